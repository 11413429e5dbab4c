//! Flag spaces, the Verma-type representations `M_λ`, `M_{λ,α}` and the
//! irreducible quotients `L_{λ,α}`.
//!
//! `(M_λ)_γ` is spanned by complete flags `∅ = α_0 → … → α_n = γ` modulo the
//! exchange relations that fill each codimension-two gap. Arrows pointing down
//! append a vertex. Arrows pointing up are fixed by the universal property:
//! every composite is rewritten with the quadratic relations until it becomes a
//! round trip at the open stratum, which acts by `λ_i`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::arrangement::{build_poset, format_key, induced_arrangement, Arrangement, FlatKey, StratGraph};
use crate::error::{Error, Result};
use crate::exactlin::{common_preimage, intersect_spans, Matrix, QuotientMap, Rat};
use crate::quiver::{check_relations, extend_by_zero, Rep};
use crate::weights::{in_category, induced_weights, lambda_of_arrow, Weights};

/// A chain of vertex indices starting at the open stratum.
pub type Flag = Vec<usize>;

/// All complete flags ending at `gamma`, in lexicographic order of vertex keys.
pub fn enumerate_flags(g: &StratGraph, gamma: usize) -> Vec<Flag> {
    fn extend(g: &StratGraph, target: usize, chain: &mut Flag, out: &mut Vec<Flag>) {
        let last = *chain.last().expect("nonempty chain");
        if last == target {
            out.push(chain.clone());
            return;
        }
        for &b in g.down(last) {
            if g.contains(b, target) {
                chain.push(b);
                extend(g, target, chain, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(g, gamma, &mut vec![g.open()], &mut out);
    out.sort();
    out
}

#[derive(Clone, Debug)]
pub struct FlagSpace {
    pub target: usize,
    pub flags: Vec<Flag>,
    /// One row per exchange relation, one column per flag.
    pub relation_matrix: Matrix,
    /// Indices into `flags` of the coset representatives.
    pub basis: Vec<usize>,
    quotient: QuotientMap,
    index: HashMap<Flag, usize>,
}

impl FlagSpace {
    pub fn new(g: &StratGraph, target: usize) -> FlagSpace {
        let flags = enumerate_flags(g, target);
        let index: HashMap<Flag, usize> = flags.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for f in &flags {
            for k in 1..f.len().saturating_sub(1) {
                let mut row = vec![Rat::zero(); flags.len()];
                for &b in g.down(f[k - 1]) {
                    if g.is_arrow(b, f[k + 1]) {
                        let mut h = f.clone();
                        h[k] = b;
                        row[index[&h]] += Rat::one();
                    }
                }
                if !rows.contains(&row) {
                    rows.push(row);
                }
            }
        }
        let relation_matrix = Matrix::from_rows(rows, flags.len()).expect("rectangular");
        let quotient = QuotientMap::new(flags.len(), &relation_matrix.transpose());
        let basis = quotient.representatives.clone();
        FlagSpace { target, flags, relation_matrix, basis, quotient, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn vector(&self, c: &Combo) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.flags.len()];
        for (f, x) in c {
            v[self.index[f]] += x;
        }
        v
    }

    fn project(&self, c: &Combo) -> Vec<Rat> {
        self.quotient.project(&self.vector(c))
    }

    fn relations(&self) -> Vec<Combo> {
        (0..self.relation_matrix.rows())
            .map(|r| {
                let mut c = Combo::new();
                for (i, x) in self.relation_matrix.row(r).iter().enumerate() {
                    if !x.is_zero() {
                        c.insert(self.flags[i].clone(), x.clone());
                    }
                }
                c
            })
            .collect()
    }
}

/// Formal linear combination of flags.
type Combo = BTreeMap<Flag, Rat>;

fn add_into(acc: &mut Combo, c: Combo, scale: &Rat) {
    for (f, x) in c {
        let e = acc.entry(f).or_insert_with(Rat::zero);
        *e += &x * scale;
    }
    acc.retain(|_, x| !x.is_zero());
}

struct Operators<'a> {
    g: &'a StratGraph,
    w: &'a Weights,
}

impl Operators<'_> {
    /// `A_{β,α}` on a flag ending at α.
    fn up(&self, beta: usize, c: &Combo) -> Combo {
        c.iter()
            .map(|(f, x)| {
                let mut h = f.clone();
                h.push(beta);
                (h, x.clone())
            })
            .collect()
    }

    /// `A_{α,β}` on a single flag ending at β.
    fn down(&self, alpha: usize, flag: &Flag) -> Combo {
        let n = flag.len();
        let prefix: Flag = flag[..n - 1].to_vec();
        let p = prefix[n - 2];
        let beta = flag[n - 1];
        if p == alpha {
            return self.round(alpha, beta, &prefix);
        }
        // α and p span a flat δ one step up, or the composite vanishes.
        let Some(&delta) = self.g.up(alpha).iter().find(|&&d| self.g.is_arrow(d, p)) else {
            return Combo::new();
        };
        let inner = self.down(delta, &prefix);
        let mut out = Combo::new();
        add_into(&mut out, self.up(alpha, &inner), &-Rat::one());
        out
    }

    /// `A_α^β = A_{α,β} A_{β,α}` on a single flag ending at α.
    fn round(&self, alpha: usize, beta: usize, flag: &Flag) -> Combo {
        if flag.len() == 1 {
            let lam = lambda_of_arrow(self.g, self.w, alpha, beta).expect("arrow");
            let mut out = Combo::new();
            add_into(&mut out, Combo::from([(flag.clone(), Rat::one())]), &lam);
            return out;
        }
        let prefix: Flag = flag[..flag.len() - 1].to_vec();
        let q = *prefix.last().expect("nonempty");
        let mut inner = Combo::new();
        for &x in self.g.down(q) {
            if x != alpha && self.g.is_arrow(x, beta) {
                add_into(&mut inner, self.round(q, x, &prefix), &Rat::one());
            }
        }
        self.up(alpha, &inner)
    }

    fn down_combo(&self, alpha: usize, c: &Combo) -> Combo {
        let mut out = Combo::new();
        for (f, x) in c {
            add_into(&mut out, self.down(alpha, f), x);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Verma {
    pub rep: Rep,
    pub spaces: Vec<FlagSpace>,
}

impl Verma {
    /// `{vertex key: [basis flags as key chains]}`.
    pub fn flag_bases(&self) -> BTreeMap<String, Vec<Vec<FlatKey>>> {
        let g = self.rep.graph();
        self.spaces
            .iter()
            .map(|s| {
                let chains = s.basis.iter().map(|&i| s.flags[i].iter().map(|&v| g.key(v).clone()).collect()).collect();
                (format_key(g.key(s.target)), chains)
            })
            .collect()
    }
}

#[derive(Serialize)]
struct FlagBases<'a> {
    flag_bases: &'a BTreeMap<String, Vec<Vec<FlatKey>>>,
}

/// Sidecar JSON for a Verma build.
pub fn flag_bases_json(v: &Verma) -> serde_json::Value {
    serde_json::to_value(FlagBases { flag_bases: &v.flag_bases() }).expect("serializes")
}

/// `M_λ` on the full arrangement, verified against the quadratic relations, the
/// eigenvalue law at the open stratum, and membership in `Qui_λ`.
pub fn build_verma(arr: &Arrangement, w: &Weights) -> Result<Verma> {
    w.validate(arr)?;
    build_verma_on(Arc::new(build_poset(arr)), w)
}

pub fn build_verma_on(g: Arc<StratGraph>, w: &Weights) -> Result<Verma> {
    let spaces: Vec<FlagSpace> = (0..g.len()).map(|v| FlagSpace::new(&g, v)).collect();
    let ops = Operators { g: &g, w };
    let mut rep = Rep::with_dims(g.clone(), spaces.iter().map(FlagSpace::dim).collect());
    for &(a, b) in &g.arrows {
        let (sa, sb) = (&spaces[a], &spaces[b]);
        // well-definedness on the quotients
        for rel in sa.relations() {
            if sb.project(&ops.up(b, &rel)).iter().any(|x| !x.is_zero()) {
                return Err(reading(&g, "appending", a, b));
            }
        }
        for rel in sb.relations() {
            if sa.project(&ops.down_combo(a, &rel)).iter().any(|x| !x.is_zero()) {
                return Err(reading(&g, "retracting", b, a));
            }
        }
        let single = |s: &FlagSpace, i: usize| Combo::from([(s.flags[i].clone(), Rat::one())]);
        let up_cols: Vec<Vec<Rat>> = sa.basis.iter().map(|&i| sb.project(&ops.up(b, &single(sa, i)))).collect();
        let down_cols: Vec<Vec<Rat>> =
            sb.basis.iter().map(|&i| sa.project(&ops.down_combo(a, &single(sb, i)))).collect();
        rep.set_map(b, a, Matrix::from_columns(&up_cols, sb.dim()))?;
        rep.set_map(a, b, Matrix::from_columns(&down_cols, sa.dim()))?;
    }
    verify(&rep, w)?;
    Ok(Verma { rep, spaces })
}

fn reading(g: &StratGraph, what: &str, from: usize, to: usize) -> Error {
    Error::Reading(format!(
        "{what} map {} -> {} does not preserve the exchange relations",
        format_key(g.key(from)),
        format_key(g.key(to))
    ))
}

fn verify(rep: &Rep, w: &Weights) -> Result<()> {
    let g = rep.graph();
    let report = check_relations(rep)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Reading(format!(
            "quadratic relation fails at {} <- {}",
            format_key(&v.to),
            format_key(&v.from)
        )));
    }
    let open = g.open();
    for &b in g.down(open) {
        let lam = lambda_of_arrow(g, w, open, b)?;
        if rep.round_trip(open, b) != Matrix::scalar(rep.dim(open), &lam) {
            return Err(Error::Reading(format!("eigenvalue law fails for {}", format_key(g.key(b)))));
        }
    }
    if !in_category(rep, w)? {
        return Err(Error::Reading("result is not in the weighted category".into()));
    }
    Ok(())
}

/// `M_{λ,α}`: the Verma representation of the induced arrangement on `X̄_α`,
/// extended by zero.
pub fn build_verma_at(arr: &Arrangement, g: Arc<StratGraph>, w: &Weights, alpha: usize) -> Result<Rep> {
    w.validate(arr)?;
    let ind = induced_arrangement(arr, &g, alpha)?;
    let wi = induced_weights(&ind, w);
    let sub = build_verma_on(Arc::new(ind.graph.clone()), &wi)?;
    extend_by_zero(&sub.rep, g, &ind.vertex_map)
}

/// Subrepresentation generated by the whole space at `v`.
fn generated(rep: &Rep, v: usize) -> Vec<Matrix> {
    let g = rep.graph();
    let mut s: Vec<Matrix> = (0..g.len()).map(|b| Matrix::zeros(rep.dim(b), 0)).collect();
    s[v] = Matrix::identity(rep.dim(v));
    loop {
        let mut changed = false;
        for (&(a, b), m) in rep.maps() {
            let grown = s[a].hstack(&(m * &s[b])).column_space();
            if grown.cols() > s[a].cols() {
                s[a] = grown;
                changed = true;
            }
        }
        if !changed {
            return s;
        }
    }
}

/// Largest subrepresentation vanishing at `v`: decreasing fixpoint.
pub fn maximal_sub_avoiding(rep: &Rep, v: usize) -> Vec<Matrix> {
    let g = rep.graph();
    let mut n: Vec<Matrix> = (0..g.len()).map(|b| Matrix::identity(rep.dim(b))).collect();
    n[v] = Matrix::zeros(rep.dim(v), 0);
    loop {
        let mut changed = false;
        for b in 0..g.len() {
            let mut cur = n[b].clone();
            for (&(a, from), m) in rep.maps() {
                if from != b {
                    continue;
                }
                let pre = common_preimage(std::slice::from_ref(m), &n[a], rep.dim(b));
                cur = intersect_spans(&cur, &pre);
            }
            if cur.cols() < n[b].cols() {
                n[b] = cur;
                changed = true;
            }
        }
        if !changed {
            return n;
        }
    }
}

/// Irreducible quotient of a representation generated by its space at one vertex;
/// the generating vertex is the first (in key order) that generates everything.
pub fn irreducible_quotient(rep: &Rep) -> Result<Rep> {
    let g = rep.graph();
    let v = (0..g.len())
        .filter(|&v| rep.dim(v) > 0)
        .find(|&v| generated(rep, v).iter().zip(rep.dims()).all(|(s, &d)| s.cols() == d));
    match v {
        Some(v) => irreducible_quotient_at(rep, v),
        None if rep.is_zero() => Ok(rep.clone()),
        None => Err(Error::Precondition("representation is not generated at a single vertex".into())),
    }
}

pub fn irreducible_quotient_at(rep: &Rep, v: usize) -> Result<Rep> {
    if generated(rep, v).iter().zip(rep.dims()).any(|(s, &d)| s.cols() != d) {
        return Err(Error::Precondition(format!("not generated at {}", format_key(rep.graph().key(v)))));
    }
    Ok(rep.quotient(&maximal_sub_avoiding(rep, v)))
}
