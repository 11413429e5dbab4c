use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::koszul::{q_functionals, tangent_data};
use crate::arrangement::{format_key, Frame, FlatKey};
use crate::error::{Error, Result};
use crate::exactlin::Rat;
use crate::quiver::{check_relations, Rep};

/// Sparse vector over a model basis.
pub type SVec = BTreeMap<usize, Rat>;

pub fn axpy(acc: &mut SVec, c: &Rat, v: &SVec) {
    if c.is_zero() {
        return;
    }
    for (&i, x) in v {
        let e = acc.entry(i).or_insert_with(Rat::zero);
        *e += c * x;
        if e.is_zero() {
            acc.remove(&i);
        }
    }
}

fn unit(i: usize) -> SVec {
    SVec::from([(i, Rat::one())])
}

/// `z^a ∂_w^b ⊗ e_i` in the block of `vertex`; `mono` lists the z exponents
/// then the ∂_w exponents of the vertex frame.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModelElt {
    pub vertex: usize,
    pub mono: Vec<u32>,
    pub basis: usize,
}

impl ModelElt {
    pub fn degree(&self) -> usize {
        self.mono.iter().sum::<u32>() as usize
    }
}

/// Global generators of the Weyl algebra: `x_i` for `i < N`, `∂_{i−N}` after.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gen {
    X(usize),
    D(usize),
}

impl Gen {
    pub fn all(n: usize) -> Vec<Gen> {
        (0..n).map(Gen::X).chain((0..n).map(Gen::D)).collect()
    }

    pub fn slot(self, n: usize) -> usize {
        match self {
            Gen::X(i) => i,
            Gen::D(i) => n + i,
        }
    }

    pub fn name(self) -> String {
        match self {
            Gen::X(i) => format!("x{i}"),
            Gen::D(i) => format!("d{i}"),
        }
    }
}

/// Monomials of total degree `d` in `n` variables, lexicographically descending.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Truncated global sections `⊕_α C[z^α, ∂_{w^α}] V_α` with the action of the
/// generators on every basis vector of degree below the cutoff.
#[derive(Clone, Debug)]
pub struct GradedModel {
    pub rep: Rep,
    pub cutoff: usize,
    pub dim: usize,
    pub frames: Vec<Frame>,
    /// Sorted by degree, then vertex, monomial, basis vector.
    pub basis: Vec<ModelElt>,
    index: HashMap<ModelElt, usize>,
    /// `actions[g.slot(N)][i]` for `i` of degree `< cutoff`.
    actions: Vec<Vec<SVec>>,
}

impl GradedModel {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn index(&self, e: &ModelElt) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.basis[i].degree()
    }

    /// Number of basis vectors with degree `< d`.
    pub fn below(&self, d: usize) -> usize {
        self.basis.partition_point(|e| e.degree() < d)
    }

    pub fn dims_by_degree(&self) -> Vec<usize> {
        let mut out = vec![0; self.cutoff + 1];
        for e in &self.basis {
            out[e.degree()] += 1;
        }
        out
    }

    pub fn action(&self, g: Gen, i: usize) -> &SVec {
        &self.actions[g.slot(self.dim)][i]
    }

    /// Applies a generator to a vector all of whose terms have degree `< cutoff`.
    pub fn apply(&self, g: Gen, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (&i, c) in v {
            axpy(&mut out, c, self.action(g, i));
        }
        out
    }

    pub fn label(&self, i: usize) -> String {
        let e = &self.basis[i];
        format!("{}:{:?}:{}", format_key(self.rep.graph().key(e.vertex)), e.mono, e.basis)
    }

    pub fn key(&self, i: usize) -> &FlatKey {
        self.rep.graph().key(self.basis[i].vertex)
    }
}

struct Builder<'a> {
    rep: &'a Rep,
    n: usize,
    frames: Vec<Frame>,
    basis: Vec<ModelElt>,
    index: HashMap<ModelElt, usize>,
    phis: Vec<Vec<(usize, Vec<Rat>)>>,
    memo: Vec<Vec<Option<SVec>>>,
}

impl Builder<'_> {
    fn elt(&self, v: usize, mono: Vec<u32>, basis: usize) -> usize {
        self.index[&ModelElt { vertex: v, mono, basis }]
    }

    fn act(&mut self, g: Gen, i: usize) -> SVec {
        let slot = g.slot(self.n);
        if let Some(v) = &self.memo[slot][i] {
            return v.clone();
        }
        let alpha = self.basis[i].vertex;
        let f = self.frames[alpha].clone();
        let mut out = SVec::new();
        match g {
            Gen::X(c) => {
                axpy(&mut out, &f.origin[c], &unit(i));
                for k in 0..f.z_count() {
                    let d = f.direction(k);
                    if !d[c].is_zero() {
                        let v = self.frame_z(i, k);
                        axpy(&mut out, &d[c], &v);
                    }
                }
                for (j, &p) in f.pivots.iter().enumerate() {
                    if p == c {
                        let v = self.frame_w(i, j);
                        axpy(&mut out, &Rat::one(), &v);
                    }
                }
            }
            Gen::D(c) => {
                if let Some(k) = f.free.iter().position(|&x| x == c) {
                    let v = self.frame_dz(i, k);
                    axpy(&mut out, &Rat::one(), &v);
                }
                for j in 0..f.w_count() {
                    let coef = f.w_linear(j)[c].clone();
                    if !coef.is_zero() {
                        let v = self.frame_dw(i, j);
                        axpy(&mut out, &coef, &v);
                    }
                }
            }
        }
        self.memo[slot][i] = Some(out.clone());
        out
    }

    fn shifted(&self, i: usize, slot: usize, delta: i32) -> Option<usize> {
        let e = &self.basis[i];
        let mut mono = e.mono.clone();
        let m = mono[slot] as i32 + delta;
        if m < 0 {
            return None;
        }
        mono[slot] = m as u32;
        Some(self.elt(e.vertex, mono, e.basis))
    }

    fn frame_z(&self, i: usize, k: usize) -> SVec {
        unit(self.shifted(i, k, 1).expect("degree below cutoff"))
    }

    fn frame_dw(&self, i: usize, j: usize) -> SVec {
        let z = self.frames[self.basis[i].vertex].z_count();
        unit(self.shifted(i, z + j, 1).expect("degree below cutoff"))
    }

    /// `∂_{z_k} z^a ∂_w^b v = a_k z^{a−e_k} ∂_w^b v + z^a ∂_w^b (∂_{z_k} v)`.
    fn frame_dz(&mut self, i: usize, k: usize) -> SVec {
        let e = self.basis[i].clone();
        let mut out = SVec::new();
        if let Some(lower) = self.shifted(i, k, -1) {
            axpy(&mut out, &Rat::from_int(e.mono[k] as i64), &unit(lower));
        }
        let base = self.base(e.vertex, k, e.basis);
        let v = self.apply_mono(e.vertex, &e.mono, base);
        axpy(&mut out, &Rat::one(), &v);
        out
    }

    /// `w_j z^a ∂_w^b v = −b_j z^a ∂_w^{b−e_j} v + z^a ∂_w^b (w_j v)`.
    fn frame_w(&mut self, i: usize, j: usize) -> SVec {
        let e = self.basis[i].clone();
        let z = self.frames[e.vertex].z_count();
        let mut out = SVec::new();
        if let Some(lower) = self.shifted(i, z + j, -1) {
            axpy(&mut out, &Rat::from_int(-(e.mono[z + j] as i64)), &unit(lower));
        }
        let base = self.base(e.vertex, z + j, e.basis);
        let v = self.apply_mono(e.vertex, &e.mono, base);
        axpy(&mut out, &Rat::one(), &v);
        out
    }

    /// Degree-zero relations: the frame vector `t_k` of `T_α` applied to `e_i ∈ V_α`.
    fn base(&self, alpha: usize, k: usize, i: usize) -> SVec {
        let mut out = SVec::new();
        for (beta, phi) in &self.phis[alpha] {
            if phi[k].is_zero() {
                continue;
            }
            let a = self.rep.map(*beta, alpha);
            for r in 0..a.rows() {
                let c = &phi[k] * &a[(r, i)];
                if !c.is_zero() {
                    let idx = self.elt(*beta, vec![0; self.n], r);
                    axpy(&mut out, &c, &unit(idx));
                }
            }
        }
        out
    }

    /// `z^a ∂_w^b` of the frame of `alpha`, as global operators, applied to `v`.
    fn apply_mono(&mut self, alpha: usize, mono: &[u32], mut v: SVec) -> SVec {
        let f = self.frames[alpha].clone();
        let z = f.z_count();
        for (j, &p) in f.pivots.iter().enumerate() {
            for _ in 0..mono[z + j] {
                v = self.act_vec(Gen::D(p), &v);
            }
        }
        for (k, &c) in f.free.iter().enumerate() {
            for _ in 0..mono[k] {
                v = self.act_vec(Gen::X(c), &v);
            }
        }
        v
    }

    fn act_vec(&mut self, g: Gen, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (&i, c) in v {
            let w = self.act(g, i);
            axpy(&mut out, c, &w);
        }
        out
    }
}

/// Builds the model up to `cutoff`; the representation must satisfy the quadratic relations.
pub fn build_sections_model(rep: &Rep, cutoff: usize) -> Result<GradedModel> {
    let report = check_relations(rep)?;
    if !report.passed {
        return Err(Error::Precondition("the representation violates the quadratic relations".into()));
    }
    let g = rep.graph();
    let n = g.dim;
    let tangents = tangent_data(g);
    let phis = (0..g.len()).map(|a| q_functionals(g, &tangents, a)).collect::<Result<Vec<_>>>()?;
    let frames: Vec<Frame> = tangents.into_iter().map(|t| t.frame).collect();
    let mut basis = Vec::new();
    for d in 0..=cutoff as u32 {
        for v in 0..g.len() {
            for mono in monomials(n, d) {
                for i in 0..rep.dim(v) {
                    basis.push(ModelElt { vertex: v, mono: mono.clone(), basis: i });
                }
            }
        }
    }
    let index: HashMap<ModelElt, usize> = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let active = basis.partition_point(|e| e.degree() < cutoff);
    let mut b = Builder {
        rep,
        n,
        frames,
        basis,
        index,
        phis,
        memo: vec![vec![None; active]; 2 * n],
    };
    let gens = Gen::all(n);
    for i in 0..active {
        for &gen in &gens {
            b.act(gen, i);
        }
    }
    let actions = b.memo.into_iter().map(|col| col.into_iter().map(|v| v.expect("filled")).collect()).collect();
    Ok(GradedModel { rep: rep.clone(), cutoff, dim: n, frames: b.frames, basis: b.basis, index: b.index, actions })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylWitness {
    pub pair: (String, String),
    pub element: String,
    pub residual: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylReport {
    pub passed: bool,
    /// Relations were checked on every basis vector of degree at most this.
    pub checked_degree: usize,
    pub witnesses: Vec<WeylWitness>,
}

/// `[x_i, x_j] = [∂_i, ∂_j] = 0`, `[∂_i, x_j] = δ_ij` on every basis vector of
/// degree `≤ cutoff − 2`, written in frame coordinates.
pub fn check_weyl_relations(model: &GradedModel) -> WeylReport {
    let n = model.dim;
    let gens = Gen::all(n);
    let top = model.cutoff.saturating_sub(2);
    let mut witnesses = Vec::new();
    if model.cutoff >= 2 {
        for i in 0..model.below(top + 1) {
            let e = unit(i);
            for (a, &g) in gens.iter().enumerate() {
                for &h in &gens[a + 1..] {
                    let gh = model.apply(g, &model.apply(h, &e));
                    let hg = model.apply(h, &model.apply(g, &e));
                    let mut res = gh;
                    axpy(&mut res, &Rat::from_int(-1), &hg);
                    // [g, h] with g before h in (x…, ∂…) order: only [x_i, ∂_i] = −1
                    if let (Gen::X(p), Gen::D(q)) = (g, h) {
                        if p == q {
                            axpy(&mut res, &Rat::one(), &e);
                        }
                    }
                    if !res.is_empty() {
                        witnesses.push(WeylWitness {
                            pair: (g.name(), h.name()),
                            element: model.label(i),
                            residual: res.iter().map(|(&k, c)| (model.label(k), c.to_string())).collect(),
                        });
                    }
                }
            }
        }
    }
    WeylReport { passed: witnesses.is_empty(), checked_degree: top, witnesses }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::arrangement::build_poset;
    use crate::arrangement::corpus::{a1, a2};
    use crate::quiver::scalar;
    use crate::verma::build_verma;
    use crate::weights::Weights;

    fn a1_scalar(a: i64, b: i64) -> Rep {
        let g = Arc::new(build_poset(&a1()));
        let mut rep = Rep::with_dims(g, vec![1, 1]);
        rep.set_map(1, 0, scalar(Rat::from_int(a))).unwrap();
        rep.set_map(0, 1, scalar(Rat::from_int(b))).unwrap();
        rep
    }

    fn a2_verma() -> Rep {
        build_verma(&a2(), &Weights::from_fractions(&[(1, 2), (1, 3)])).unwrap().rep
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 3).len(), 4);
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(0, 0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn a1_model() {
        let rep = a1_scalar(2, 3);
        let m = build_sections_model(&rep, 3).unwrap();
        assert_eq!(m.dims_by_degree(), vec![2, 2, 2, 2]);
        assert!(check_weyl_relations(&m).passed);
        let g = rep.graph();
        let open = m.index(&ModelElt { vertex: g.vertex(&[]).unwrap(), mono: vec![0], basis: 0 }).unwrap();
        let pt = m.index(&ModelElt { vertex: g.vertex(&[0]).unwrap(), mono: vec![0], basis: 0 }).unwrap();
        // ∂ v_open lands on the point through A = 2; x v_pt goes back through 3
        let d = m.action(Gen::D(0), open);
        assert_eq!(d.get(&pt), Some(&Rat::from_int(2)));
        let x = m.action(Gen::X(0), pt);
        assert_eq!(x.get(&open), Some(&Rat::from_int(3)));
    }

    #[test]
    fn a2_dimensions_and_relations() {
        let rep = a2_verma();
        let m = build_sections_model(&rep, 4).unwrap();
        let total = rep.total_dim();
        assert_eq!(m.dims_by_degree(), (0..=4).map(|d| total * (d + 1)).collect::<Vec<_>>());
        assert!(check_weyl_relations(&m).passed);
    }

    #[test]
    fn zero_rep_is_empty() {
        let rep = Rep::zero(Arc::new(build_poset(&a2())));
        let m = build_sections_model(&rep, 3).unwrap();
        assert!(m.is_empty());
        assert!(check_weyl_relations(&m).passed);
    }
}
