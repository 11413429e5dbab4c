use std::collections::BTreeMap;

use serde::Serialize;

use super::exterior::{complement, subset_index, subsets, WedgeBasis};
use super::weyl::WeylPoly;
use crate::arrangement::{adapted_frame, contract, top_form_ratio, FlatKey, Frame, StratGraph};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rat};
use crate::quiver::Rep;

/// `T_α = T′_α ⊕ T″_α` inside `Q^N ⊕ (Q^N)^*`: the frame vectors `∂_{z_k}`
/// followed by the conormal covectors `dw_j`.
#[derive(Clone, Debug)]
pub struct TangentData {
    pub frame: Frame,
    pub basis: WedgeBasis,
}

impl TangentData {
    pub fn new(g: &StratGraph, v: usize) -> TangentData {
        let frame = adapted_frame(g.flat(v));
        let n = g.dim;
        let mut vectors = Vec::with_capacity(n);
        for k in 0..frame.z_count() {
            let mut t = frame.direction(k);
            t.extend(vec![Rat::zero(); n]);
            vectors.push(t);
        }
        for j in 0..frame.w_count() {
            let mut t = vec![Rat::zero(); n];
            t.extend(frame.w_linear(j));
            vectors.push(t);
        }
        TangentData { basis: WedgeBasis::new(vectors, 2 * n), frame }
    }

    /// `I_α(t_k)`: `∂_{z_k}` as a derivation, `dw_j` as the affine function `w_j`.
    pub fn embed(&self, k: usize) -> WeylPoly {
        let z = self.frame.z_count();
        if k < z {
            WeylPoly::derivation(&self.frame.direction(k))
        } else {
            WeylPoly::affine(&self.frame.w_linear(k - z), &self.frame.w_offset(k - z))
        }
    }
}

pub fn tangent_data(g: &StratGraph) -> Vec<TangentData> {
    (0..g.len()).map(|v| TangentData::new(g, v)).collect()
}

/// For each neighbour β the functional `φ_β` on `T_α` (in frame coordinates)
/// such that `Q_α(t ⊗ v) = Σ_β φ_β(t) A_{β,α} v`.
pub fn q_functionals(g: &StratGraph, tangents: &[TangentData], alpha: usize) -> Result<Vec<(usize, Vec<Rat>)>> {
    let fa = &tangents[alpha].frame;
    let (z, n) = (fa.z_count(), g.dim);
    let mut out = Vec::new();
    for &beta in g.down(alpha) {
        let fb = &tangents[beta].frame;
        let den: Vec<Vec<Rat>> = fb.omega_hat().into_iter().chain(fb.omega()).collect();
        let mut phi = vec![Rat::zero(); n];
        for (k, slot) in phi.iter_mut().enumerate().take(z) {
            for (c, rest) in contract(&fa.direction(k), &fb.omega_hat()) {
                let num: Vec<Vec<Rat>> = rest.into_iter().chain(fa.omega()).collect();
                *slot += c * top_form_ratio(&num, &den)?;
            }
        }
        out.push((beta, phi));
    }
    for &beta in g.up(alpha) {
        let fb = &tangents[beta].frame;
        let den: Vec<Vec<Rat>> = fb.omega_hat().into_iter().chain(fb.omega()).collect();
        let mut phi = vec![Rat::zero(); n];
        for j in 0..fa.w_count() {
            let num: Vec<Vec<Rat>> =
                std::iter::once(fa.w_linear(j)).chain(fb.omega_hat()).chain(fa.omega()).collect();
            phi[z + j] = top_form_ratio(&num, &den)?;
        }
        out.push((beta, phi));
    }
    Ok(out)
}

/// `Q_α` on the frame vectors of `T_α`: entry `k` lists `(β, φ_β(t_k) A_{β,α})`
/// over the nonzero contributions.
#[derive(Clone, Debug)]
pub struct QMap {
    pub alpha: usize,
    pub terms: Vec<Vec<(usize, Matrix)>>,
}

pub fn q_alpha(rep: &Rep, alpha: usize) -> Result<QMap> {
    let g = rep.graph();
    let tangents = tangent_data(g);
    let funcs = q_functionals(g, &tangents, alpha)?;
    let terms = (0..g.dim)
        .map(|k| {
            funcs
                .iter()
                .filter(|(_, phi)| !phi[k].is_zero())
                .map(|(b, phi)| (*b, rep.map(*b, alpha).scale(&phi[k])))
                .collect()
        })
        .collect();
    Ok(QMap { alpha, terms })
}

/// Generator `1 ⊗ t_S ⊗ e_i` of `D ⊗ Λ^n(T_α) ⊗ V_α`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Generator {
    pub vertex: usize,
    pub wedge: Vec<usize>,
    pub basis: usize,
}

/// Sparse matrix over the Weyl algebra; a generator `g_j` of the source goes to
/// `Σ_i entries[(i, j)] · g_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), WeylPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, j: usize, p: &WeylPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.entries.entry((i, j)).or_default();
        *e = &*e + p;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&WeylPoly> {
        self.entries.get(&(i, j))
    }

    /// The composite "first `self`, then `next`" of left `D`-module maps:
    /// entry `(k, j) = Σ_i self(i, j) · next(k, i)`.
    pub fn then(&self, next: &PolyMatrix) -> PolyMatrix {
        let mut by_row: BTreeMap<usize, Vec<(usize, &WeylPoly)>> = BTreeMap::new();
        for (&(k, i), p) in &next.entries {
            by_row.entry(i).or_default().push((k, p));
        }
        let mut out = PolyMatrix::zeros(next.rows, self.cols);
        for (&(i, j), p) in &self.entries {
            for &(k, q) in by_row.get(&i).map(Vec::as_slice).unwrap_or(&[]) {
                out.add(k, j, &(p * q));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.entries.values().map(WeylPoly::order).max().unwrap_or(0)
    }
}

/// The free resolution `E^• V`: `generators[n]` spans `E^n`, `differentials[n−1]`
/// is `d^{(n)}: E^n → E^{n−1}`.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub rep: Rep,
    pub dim: usize,
    pub generators: Vec<Vec<Generator>>,
    pub differentials: Vec<PolyMatrix>,
}

impl KoszulComplex {
    pub fn differential(&self, n: usize) -> &PolyMatrix {
        &self.differentials[n - 1]
    }

    pub fn index(&self, n: usize, g: &Generator) -> Option<usize> {
        self.generators[n].binary_search(g).ok()
    }

    pub fn label(&self, g: &Generator) -> GeneratorLabel {
        GeneratorLabel { flat: self.rep.graph().key(g.vertex).clone(), wedge: g.wedge.clone(), basis: g.basis }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorLabel {
    pub flat: FlatKey,
    pub wedge: Vec<usize>,
    pub basis: usize,
}

fn generators(rep: &Rep, n: usize) -> Vec<Generator> {
    let g = rep.graph();
    let mut out = Vec::new();
    for v in 0..g.len() {
        for s in subsets(g.dim, n) {
            for i in 0..rep.dim(v) {
                out.push(Generator { vertex: v, wedge: s.clone(), basis: i });
            }
        }
    }
    out
}

/// `d^{(n)}(t_S ⊗ v) = Σ_k (−1)^{k+1} I_α(t_k) t_{S∖k} ⊗ v − Σ_β ι_{φ_β}(t_S) ⊗ A_{β,α} v`,
/// where `ι_{φ_β}(t_S) = Σ_k (−1)^{k+1} φ_β(t_k) t_{S∖k}` lies in `Λ^{n−1}(T_α ∩ T_β)`
/// and is rewritten in the frame of `T_β`.
pub fn koszul_differential(rep: &Rep) -> Result<KoszulComplex> {
    let g = rep.graph();
    let n_dim = g.dim;
    let tangents = tangent_data(g);
    let funcs: Vec<Vec<(usize, Vec<Rat>)>> =
        (0..g.len()).map(|a| q_functionals(g, &tangents, a)).collect::<Result<_>>()?;
    let gens: Vec<Vec<Generator>> = (0..=n_dim).map(|n| generators(rep, n)).collect();
    let index = |n: usize, gen: &Generator| gens[n].binary_search(gen).expect("generator exists");
    let mut differentials = Vec::with_capacity(n_dim);
    for n in 1..=n_dim {
        let mut d = PolyMatrix::zeros(gens[n - 1].len(), gens[n].len());
        for (col, gen) in gens[n].iter().enumerate() {
            let alpha = gen.vertex;
            let s = &gen.wedge;
            for (pos, &k) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&x| x != k).collect();
                let row = index(n - 1, &Generator { vertex: alpha, wedge: rest, basis: gen.basis });
                let sign = if pos % 2 == 0 { Rat::one() } else { Rat::from_int(-1) };
                d.add(row, col, &tangents[alpha].embed(k).scale(&sign));
            }
            for (beta, phi) in &funcs[alpha] {
                let emb = &tangents[alpha].basis.embeddings[n - 1];
                let mut y = vec![Rat::zero(); emb.rows()];
                for (pos, &k) in s.iter().enumerate() {
                    if phi[k].is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = s.iter().copied().filter(|&x| x != k).collect();
                    let c = if pos % 2 == 0 { phi[k].clone() } else { -&phi[k] };
                    let col_r = emb.column(subset_index(n_dim, &rest));
                    for (yi, e) in y.iter_mut().zip(col_r) {
                        *yi += &c * &e;
                    }
                }
                if y.iter().all(Rat::is_zero) {
                    continue;
                }
                let coords = tangents[*beta].basis.coordinates(n - 1, &y)?;
                let a = rep.map(*beta, alpha);
                for (ri, r) in subsets(n_dim, n - 1).into_iter().enumerate() {
                    if coords[ri].is_zero() {
                        continue;
                    }
                    for b in 0..rep.dim(*beta) {
                        let c = &coords[ri] * &a[(b, gen.basis)];
                        if c.is_zero() {
                            continue;
                        }
                        let row = index(n - 1, &Generator { vertex: *beta, wedge: r.clone(), basis: b });
                        d.add(row, col, &WeylPoly::constant(n_dim, -c));
                    }
                }
            }
        }
        differentials.push(d);
    }
    Ok(KoszulComplex { rep: rep.clone(), dim: n_dim, generators: gens, differentials })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareWitness {
    /// `d^{(degree−1)} d^{(degree)}`.
    pub degree: usize,
    pub from: GeneratorLabel,
    pub to: GeneratorLabel,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub passed: bool,
    pub witnesses: Vec<SquareWitness>,
}

/// Normal-ordered products of consecutive differentials.
pub fn check_d_squared(cx: &KoszulComplex) -> SquareReport {
    let mut witnesses = Vec::new();
    for n in 2..=cx.dim {
        let sq = cx.differential(n).then(cx.differential(n - 1));
        for (&(k, j), p) in &sq.entries {
            witnesses.push(SquareWitness {
                degree: n,
                from: cx.label(&cx.generators[n][j]),
                to: cx.label(&cx.generators[n - 2][k]),
                residual: p.to_string(),
            });
        }
    }
    SquareReport { passed: witnesses.is_empty(), witnesses }
}

/// The quiver whose Koszul complex is the dual complex: `Ã_{α,β} = (−1)^{(codim α − codim β − 1)/2} A_{β,α}^T`,
/// i.e. the transpose with a minus sign on every map towards the larger stratum.
/// It differs from [`dualize`](crate::quiver::dualize) by `(−1)^{codim β}` on `Ã_{α,β}`.
pub fn complex_dual_quiver(rep: &Rep) -> Rep {
    let g = rep.graph();
    let mut out = rep.clone();
    for (&(a, b), _) in rep.maps() {
        let m = rep.map(b, a).transpose();
        let m = if g.codim(a) > g.codim(b) { m } else { -&m };
        out.set_map(a, b, m).expect("transposed shape");
    }
    out
}

/// Sign identifying `(t_S ⊗ e_i)^*` with `t_{S^c} ⊗ e_i^*`: the wedge position
/// sign, one sign per `∂_z` (the adjoint reverses them), and the frame orientation.
fn identification_sign(t: &TangentData, wedge: &[usize]) -> bool {
    let z = t.frame.z_count();
    let parity = wedge.iter().sum::<usize>() + wedge.iter().filter(|&&s| s < z).count();
    let mut covectors = t.frame.omega();
    covectors.extend(t.frame.omega_hat());
    let n = covectors.len();
    let orient = Matrix::from_rows(covectors, n).and_then(|m| m.determinant()).map(|d| d.is_negative()).unwrap_or(false);
    (parity % 2 == 1) ^ orient
}

/// `Hom_D(E^•, D)` turned into a left complex: `d'^{(N−n+1)}` is the transpose of
/// `d^{(n)}` with adjoint entries, read through `Λ^n(T_α)^* ≅ Λ^{N−n}(T_α)`.
/// Gated against the Koszul complex of [`complex_dual_quiver`].
pub fn dual_complex(cx: &KoszulComplex) -> Result<KoszulComplex> {
    let g = cx.rep.graph();
    let n = cx.dim;
    let tangents = tangent_data(g);
    let target = koszul_differential(&complex_dual_quiver(&cx.rep))?;
    let mut differentials = vec![PolyMatrix::zeros(0, 0); n];
    for deg in 1..=n {
        let d = cx.differential(deg);
        let m = n - deg + 1;
        let mut out = PolyMatrix::zeros(target.generators[m - 1].len(), target.generators[m].len());
        for (&(i, j), p) in &d.entries {
            let (gi, gj) = (&cx.generators[deg - 1][i], &cx.generators[deg][j]);
            let src = Generator { vertex: gi.vertex, wedge: complement(n, &gi.wedge), basis: gi.basis };
            let tgt = Generator { vertex: gj.vertex, wedge: complement(n, &gj.wedge), basis: gj.basis };
            let flip = identification_sign(&tangents[gi.vertex], &gi.wedge) ^ identification_sign(&tangents[gj.vertex], &gj.wedge);
            let entry = if flip { -&p.adjoint() } else { p.adjoint() };
            let (si, ti) = (target.index(m, &src).expect("dual generator"), target.index(m - 1, &tgt).expect("dual generator"));
            out.add(ti, si, &entry);
        }
        if out != *target.differential(m) {
            return Err(Error::Reading(format!("dual differential d'({m}) differs from the Koszul complex of the dual quiver")));
        }
        differentials[m - 1] = out;
    }
    Ok(KoszulComplex { rep: target.rep, dim: n, generators: target.generators, differentials })
}

/// Whether two complexes on the same generators have identical differentials.
pub fn same_differentials(a: &KoszulComplex, b: &KoszulComplex) -> bool {
    a.generators == b.generators && a.differentials == b.differentials
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::arrangement::build_poset;
    use crate::arrangement::corpus::{a1, a2};
    use crate::quiver::{check_relations, scalar};
    use crate::verma::build_verma;
    use crate::weights::Weights;

    fn a1_scalar(a: i64, b: i64) -> Rep {
        let g = Arc::new(build_poset(&a1()));
        let mut rep = Rep::with_dims(g, vec![1, 1]);
        rep.set_map(1, 0, scalar(Rat::from_int(a))).unwrap();
        rep.set_map(0, 1, scalar(Rat::from_int(b))).unwrap();
        rep
    }

    #[test]
    fn q_on_a1_point() {
        let rep = a1_scalar(2, 3);
        let q = q_alpha(&rep, 1).unwrap();
        assert_eq!(q.terms[0], vec![(0, scalar(Rat::from_int(3)))]);
        let z = Rep::zero(rep.graph_arc());
        assert!(q_alpha(&z, 1).unwrap().terms[0].iter().all(|(_, m)| m.is_zero()));
    }

    #[test]
    fn q_on_a2_line_along_the_line() {
        let m = build_verma(&a2(), &Weights::from_fractions(&[(1, 2), (1, 3)])).unwrap().rep;
        let g = m.graph();
        let q = q_alpha(&m, g.vertex(&[0]).unwrap()).unwrap();
        // ∂_z along the line x = 0 only reaches the point
        assert_eq!(q.terms[0].len(), 1);
        assert_eq!(q.terms[0][0].0, g.vertex(&[0, 1]).unwrap());
        // dw = dx only reaches the open stratum
        assert_eq!(q.terms[1].len(), 1);
        assert_eq!(q.terms[1][0].0, g.open());
    }

    #[test]
    fn a1_complex() {
        let cx = koszul_differential(&a1_scalar(2, 3)).unwrap();
        assert_eq!(cx.differentials.len(), 1);
        assert!(cx.differential(1).max_order() <= 1);
        assert_eq!(cx.generators[1].len(), 2);
        // d(∂ ⊗ v_∅) = ∂ v_∅ − a v_pt
        let d = cx.differential(1);
        assert_eq!(d.get(0, 0), Some(&WeylPoly::dx(1, 0)));
        assert_eq!(d.get(1, 0), Some(&WeylPoly::constant(1, Rat::from_int(-2))));
        assert_eq!(d.get(1, 1), Some(&WeylPoly::x(1, 0)));
        assert!(check_d_squared(&cx).passed);
        let z = koszul_differential(&Rep::zero(cx.rep.graph_arc())).unwrap();
        assert!(z.differentials.iter().all(PolyMatrix::is_zero));
    }

    #[test]
    fn generator_counts() {
        let m = build_verma(&a2(), &Weights::from_fractions(&[(1, 2), (1, 3)])).unwrap().rep;
        let cx = koszul_differential(&m).unwrap();
        let counts: Vec<usize> = cx.generators.iter().map(Vec::len).collect();
        // dims (1,1,1,1), Λ^n of a plane: 1, 2, 1
        assert_eq!(counts, vec![4, 8, 4]);
    }

    #[test]
    fn d_squared_tracks_relations() {
        let m = build_verma(&a2(), &Weights::from_fractions(&[(1, 2), (1, 3)])).unwrap().rep;
        assert!(check_d_squared(&koszul_differential(&m).unwrap()).passed);
        let g = m.graph_arc();
        let v = |k: &[usize]| g.vertex(k).unwrap();
        let mut bad = Rep::with_dims(g.clone(), vec![1, 1, 1, 1]);
        let one = scalar(Rat::one());
        bad.set_map(v(&[0]), v(&[]), one.clone()).unwrap();
        bad.set_map(v(&[]), v(&[1]), one.clone()).unwrap();
        bad.set_map(v(&[0]), v(&[0, 1]), one.clone()).unwrap();
        bad.set_map(v(&[0, 1]), v(&[1]), one).unwrap();
        assert!(!check_relations(&bad).unwrap().passed);
        let report = check_d_squared(&koszul_differential(&bad).unwrap());
        assert!(!report.passed);
        assert!(report.witnesses.iter().any(|w| w.from.flat == vec![1] && w.to.flat == vec![0]));
    }

    #[test]
    fn dual_complex_on_a1() {
        let cx = koszul_differential(&a1_scalar(2, 3)).unwrap();
        let d = dual_complex(&cx).unwrap();
        // carries (b, −a): maps into the point are b, out of it −a
        assert_eq!(d.rep.map(1, 0), scalar(Rat::from_int(3)));
        assert_eq!(d.rep.map(0, 1), scalar(Rat::from_int(-2)));
        let z = koszul_differential(&Rep::zero(cx.rep.graph_arc())).unwrap();
        assert!(dual_complex(&z).unwrap().differentials.iter().all(PolyMatrix::is_zero));
    }

    #[test]
    fn dual_twice_negates_maps() {
        let m = build_verma(&a2(), &Weights::from_fractions(&[(1, 2), (1, 3)])).unwrap().rep;
        let cx = koszul_differential(&m).unwrap();
        let twice = dual_complex(&dual_complex(&cx).unwrap()).unwrap();
        let mut neg = m.clone();
        for (&(a, b), x) in m.maps() {
            neg.set_map(a, b, -x).unwrap();
        }
        assert_eq!(twice.rep, neg);
        // −A is A conjugated by (−1)^{codim}
        let p: Vec<Matrix> = (0..m.graph().len())
            .map(|v| Matrix::scalar(m.dim(v), &Rat::from_int(if m.graph().codim(v) % 2 == 0 { 1 } else { -1 })))
            .collect();
        assert_eq!(m.change_basis(&p).unwrap(), neg);
    }
}
