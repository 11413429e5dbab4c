//! Brute-force oracles, written without the library's linear algebra, and the
//! seeded generator of weighted-category members.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use hyperquiver::arrangement::{build_poset, Arrangement, FlatKey, StratGraph};
use hyperquiver::exactlin::{Matrix, Rat};
use hyperquiver::quiver::{check_relations, Rep};
use hyperquiver::verma::{build_verma, build_verma_at, irreducible_quotient_at};
use hyperquiver::weights::Weights;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Rank by plain Gaussian elimination.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip().unwrap();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for k in c..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= &t;
                }
            }
        }
        r += 1;
    }
    r
}

fn rows_of(m: &Matrix) -> Vec<Vec<Rat>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].clone()).collect()).collect()
}

fn cols_of(m: &Matrix) -> Vec<Vec<Rat>> {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m[(i, j)].clone()).collect()).collect()
}

/// Flats from every subset of hyperplanes: `(key, codim)` and the
/// codimension-one containments between keys.
pub fn brute_poset(arr: &Arrangement) -> (BTreeSet<(FlatKey, usize)>, BTreeSet<(FlatKey, FlatKey)>) {
    let n = arr.len();
    let aug: Vec<Vec<Rat>> = arr.hyperplanes.iter().map(|h| h.augmented()).collect();
    let mut flats = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let normals: Vec<Vec<Rat>> = s.iter().map(|&i| arr.hyperplanes[i].normal.clone()).collect();
        let rows: Vec<Vec<Rat>> = s.iter().map(|&i| aug[i].clone()).collect();
        let r = rank(&rows);
        if rank(&normals) != r {
            continue; // empty intersection
        }
        let key: FlatKey = (0..n)
            .filter(|&i| {
                let mut more = rows.clone();
                more.push(aug[i].clone());
                rank(&more) == r
            })
            .collect();
        flats.insert((key, r));
    }
    let mut arrows = BTreeSet::new();
    for (a, ca) in &flats {
        for (b, cb) in &flats {
            if *cb == ca + 1 && a.iter().all(|i| b.contains(i)) {
                arrows.insert((a.clone(), b.clone()));
            }
        }
    }
    (flats, arrows)
}

/// `λ_{α,β}` summed over the hyperplanes newly containing `β`.
pub fn arrow_weight(g: &StratGraph, w: &Weights, a: usize, b: usize) -> Rat {
    g.key(b).iter().filter(|i| !g.key(a).contains(i)).map(|&i| w.weights[i].clone()).sum()
}

/// Membership in the weighted category via words: at each vertex the shifted
/// round trips generate a nilpotent algebra, i.e. every word of length
/// `dim V_α` in them vanishes.
pub fn in_category_by_words(rep: &Rep, w: &Weights) -> bool {
    let g = rep.graph();
    (0..g.len()).all(|a| {
        let d = rep.dim(a);
        let ops: Vec<Matrix> = g
            .down(a)
            .iter()
            .map(|&b| &rep.round_trip(a, b) - &Matrix::scalar(d, &arrow_weight(g, w, a, b)))
            .collect();
        let mut words = vec![Matrix::identity(d)];
        for _ in 0..d {
            words = words.iter().flat_map(|p| ops.iter().map(move |n| n * p)).collect();
        }
        d == 0 || words.iter().all(Matrix::is_zero)
    })
}

/// Dimension of `∩_i ker(A_{∅,i} A_{i,∅} − λ_i)` on the open stratum.
pub fn joint_eigenspace_dim(rep: &Rep, w: &Weights) -> usize {
    let g = rep.graph();
    let open = g.open();
    let d = rep.dim(open);
    let mut rows = Vec::new();
    for &b in g.down(open) {
        let i = g.key(b)[0];
        rows.extend(rows_of(&(&rep.round_trip(open, b) - &Matrix::scalar(d, &w.weights[i]))));
    }
    d - if rows.is_empty() { 0 } else { rank(&rows) }
}

fn span_contains(basis: &[Vec<Rat>], vs: &[Vec<Rat>]) -> bool {
    let r = rank(basis);
    let mut all = basis.to_vec();
    all.extend(vs.iter().cloned());
    (all.is_empty() || rank(&all) == r) && (basis.is_empty() || r == basis.len())
}

fn apply(m: &Matrix, v: &[Rat]) -> Vec<Rat> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| &m[(i, j)] * &v[j]).sum()).collect()
}

fn unit(d: usize, i: usize) -> Vec<Rat> {
    (0..d).map(|k| if k == i { Rat::one() } else { Rat::zero() }).collect()
}

/// Whether `rep` has a proper nonzero subrepresentation, by enumerating every
/// candidate family of subspaces. `None` outside the exhaustive range: at most
/// one vertex of dimension 2, all others at most 1. A line at the 2-dimensional
/// vertex is pinned by any nonzero incident map (kernel out, image in); when
/// none pins it, every line behaves alike and a coordinate line stands in.
pub fn has_proper_subrep(rep: &Rep) -> Option<bool> {
    let g = rep.graph();
    let live: Vec<usize> = (0..g.len()).filter(|&v| rep.dim(v) > 0).collect();
    if live.iter().any(|&v| rep.dim(v) > 2) || live.iter().filter(|&&v| rep.dim(v) == 2).count() > 1 {
        return None;
    }
    let mut choices: Vec<Vec<Vec<Vec<Rat>>>> = Vec::new();
    for &v in &live {
        let d = rep.dim(v);
        let full: Vec<Vec<Rat>> = (0..d).map(|i| unit(d, i)).collect();
        let mut opts = vec![Vec::new(), full];
        if d == 2 {
            let mut lines = vec![unit(2, 0)];
            for &(a, b) in &g.adjacent_pairs() {
                if b == v && rep.dim(a) == 1 {
                    let m = rep.map(a, v);
                    if !m.is_zero() {
                        lines.push(vec![-m[(0, 1)].clone(), m[(0, 0)].clone()]);
                    }
                }
                if a == v && rep.dim(b) == 1 {
                    let m = rep.map(v, b);
                    if !m.is_zero() {
                        lines.push(cols_of(&m).remove(0));
                    }
                }
            }
            opts.extend(lines.into_iter().map(|l| vec![l]));
        }
        choices.push(opts);
    }
    let total: usize = live.iter().map(|&v| rep.dim(v)).sum();
    let mut pick = vec![0usize; live.len()];
    loop {
        let sub: BTreeMap<usize, &Vec<Vec<Rat>>> =
            live.iter().enumerate().map(|(k, &v)| (v, &choices[k][pick[k]])).collect();
        let size: usize = sub.values().map(|s| s.len()).sum();
        if size > 0 && size < total {
            let closed = g.adjacent_pairs().iter().all(|&(a, b)| match (sub.get(&a), sub.get(&b)) {
                (Some(ua), Some(ub)) => {
                    let images: Vec<Vec<Rat>> = ub.iter().map(|x| apply(&rep.map(a, b), x)).collect();
                    span_contains(ua, &images)
                }
                _ => true,
            });
            if closed {
                return Some(true);
            }
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Some(false);
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn small(rng: &mut ChaCha8Rng) -> Rat {
    Rat::from_int(rng.gen_range(-2..=2))
}

/// A random extension `0 → sub → V → quot → 0`: the off-diagonal blocks enter
/// the quadratic relations linearly, so a random kernel vector of that linear
/// system gives a representation satisfying them.
pub fn extension(sub: &Rep, quot: &Rep, rng: &mut ChaCha8Rng) -> Rep {
    let g = sub.graph_arc();
    let dims: Vec<usize> = sub.dims().iter().zip(quot.dims()).map(|(a, b)| a + b).collect();
    let pairs = g.adjacent_pairs();
    let slots: Vec<(usize, usize, usize, usize)> = pairs
        .iter()
        .flat_map(|&(a, b)| {
            (0..sub.dim(a)).flat_map(move |i| (0..quot.dim(b)).map(move |j| (a, b, i, j)))
        })
        .collect();
    let build = |x: &[Rat]| {
        let mut rep = Rep::with_dims(g.clone(), dims.clone());
        for &(a, b) in &pairs {
            let mut m = Matrix::zeros(dims[a], dims[b]);
            m.set_block(0, 0, &sub.map(a, b));
            m.set_block(sub.dim(a), sub.dim(b), &quot.map(a, b));
            rep.set_map(a, b, m).unwrap();
        }
        for (k, &(a, b, i, j)) in slots.iter().enumerate() {
            if !x[k].is_zero() {
                let mut m = rep.map(a, b);
                m[(i, sub.dim(b) + j)] = x[k].clone();
                rep.set_map(a, b, m).unwrap();
            }
        }
        rep
    };
    let mut columns: Vec<BTreeMap<(FlatKey, FlatKey, usize, usize), Rat>> = Vec::new();
    for k in 0..slots.len() {
        let mut col = BTreeMap::new();
        for v in check_relations(&build(&unit(slots.len(), k))).unwrap().violations {
            for (i, row) in rows_of(&v.residual).into_iter().enumerate() {
                for (j, x) in row.into_iter().enumerate() {
                    if !x.is_zero() {
                        col.insert((v.to.clone(), v.from.clone(), i, j), x);
                    }
                }
            }
        }
        columns.push(col);
    }
    let keys: BTreeSet<_> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
    let rows: Vec<Vec<Rat>> =
        keys.iter().map(|key| columns.iter().map(|c| c.get(key).cloned().unwrap_or_else(Rat::zero)).collect()).collect();
    let kernel =
        if rows.is_empty() { Matrix::identity(slots.len()) } else { Matrix::from_rows(rows, slots.len()).unwrap().kernel_basis() };
    let mut x = vec![Rat::zero(); slots.len()];
    for c in 0..kernel.cols() {
        let t = small(rng);
        for (k, xk) in x.iter_mut().enumerate() {
            *xk += &(&t * &kernel[(k, c)]);
        }
    }
    build(&x)
}

/// Random unit upper-triangular change of basis at every vertex.
pub fn twist(rep: &Rep, rng: &mut ChaCha8Rng) -> Rep {
    let ps: Vec<Matrix> = rep
        .dims()
        .iter()
        .map(|&d| {
            let mut p = Matrix::identity(d);
            for i in 0..d {
                for j in i + 1..d {
                    p[(i, j)] = small(rng);
                }
            }
            p
        })
        .collect();
    rep.change_basis(&ps).unwrap()
}

/// Building blocks in the weighted category: `M_λ`, and `M_{λ,α}` with its
/// simple quotient for every flat.
pub fn pieces(arr: &Arrangement, w: &Weights) -> Vec<Rep> {
    let m = build_verma(arr, w).unwrap().rep;
    let g = m.graph_arc();
    let mut out = vec![m];
    for a in 0..g.len() {
        let at = build_verma_at(arr, g.clone(), w, a).unwrap();
        out.push(irreducible_quotient_at(&at, a).unwrap());
        out.push(at);
    }
    out
}

/// `count` deterministic members of the weighted category: twisted iterated
/// extensions of two or three random pieces.
pub fn qui_members(arr: &Arrangement, w: &Weights, count: usize, seed: u64) -> Vec<Rep> {
    let pieces = pieces(arr, w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut v = pieces[rng.gen_range(0..pieces.len())].clone();
            let steps = rng.gen_range(1..=2);
            for _ in 0..steps {
                let q = &pieces[rng.gen_range(0..pieces.len())];
                if v.total_dim() + q.total_dim() > 20 {
                    break;
                }
                v = extension(&v, q, &mut rng);
            }
            twist(&v, &mut rng)
        })
        .collect()
}

pub fn graph(arr: &Arrangement) -> Arc<StratGraph> {
    Arc::new(build_poset(arr))
}
