//! The filtration along a flat and its associated graded module.
//!
//! The model of `Sp_α V` lives on the normal space, whose coordinates are the
//! `(z, w)` frame coordinates of α. Its tilde frames are split into `z`- and
//! `w`-variables, so every basis vector `z̃^a ∂̃^b v_β` has a well-defined
//! weight (`w`: +1, `∂_w`: −1, the rest 0) plus the offset of `v_β`. Reading
//! the same operator on `X` gives an element of the model of `V`; these images
//! together with the blocks of strata missing `X̄_α` (killed by localizing near
//! the flat) form a basis, and the filtration is the span of images of weight
//! `≥ n`. The checks below are exact on the truncation.

use std::collections::BTreeMap;

use serde::Serialize;

use super::exterior::{plucker, subsets};
use super::model::{axpy, build_sections_model, Gen, GradedModel, ModelElt, SVec};
use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::arrangement::Frame;
use crate::exactlin::{Matrix, Rat};
use crate::quiver::Rep;
use crate::specialize::{specialize_rep, SpResult};
use crate::weights::{lambda_of_stratum, Weights};

/// A tilde generator read on `X`: `Σ c_g g + c0`.
#[derive(Clone, Debug)]
struct Operator {
    terms: Vec<(Gen, Rat)>,
    constant: Rat,
    weight: i64,
}

struct DegreeSolver {
    targets: Vec<usize>,
    remotes: Vec<usize>,
    rows: BTreeMap<usize, usize>,
    inverse: Option<Matrix>,
}

pub struct GrModel {
    pub alpha: usize,
    pub sp: SpResult,
    /// Model of the representation on `X`.
    pub source: GradedModel,
    /// Model of `Sp_α` on the normal space; it is `Gr F_α` when the comparison passes.
    pub target: GradedModel,
    /// Filtration degree of each target basis vector.
    pub levels: Vec<i64>,
    /// Target basis vector → element of the source model.
    pub phi: Vec<SVec>,
    /// Source basis vectors in blocks of strata whose closure misses `X̄_α`.
    pub remote: Vec<bool>,
    ops: Vec<Operator>,
    solvers: Vec<DegreeSolver>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrWitness {
    pub generator: String,
    pub element: String,
    /// `below`: a term of lower filtration degree appears (the filtration is not
    /// stable); `leading`: the degree-preserving parts differ.
    pub kind: String,
    pub terms: Vec<(String, i64, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrReport {
    pub passed: bool,
    /// Images and remote blocks form a basis in every degree.
    pub basis: bool,
    /// `F^k(D) F^j ⊂ F^{j+k}` on every checked pair.
    pub stable: bool,
    /// Degree-preserving parts equal the action on the `Sp` model.
    pub graded_match: bool,
    pub checked: usize,
    /// Pairs whose difference had components in killed blocks.
    pub remote_terms: usize,
    pub witnesses: Vec<GrWitness>,
}

impl GrModel {
    /// Dimensions of `Gr^k` in each polynomial degree, keyed `(k, degree)`.
    pub fn dims(&self) -> BTreeMap<(i64, usize), usize> {
        let mut out = BTreeMap::new();
        for (i, &k) in self.levels.iter().enumerate() {
            *out.entry((k, self.target.degree(i))).or_insert(0) += 1;
        }
        out
    }

    pub fn target_label(&self, i: usize) -> String {
        self.target.label(i)
    }

    fn apply_op(&self, op: &Operator, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (g, c) in &op.terms {
            axpy(&mut out, c, &self.source.apply(*g, v));
        }
        axpy(&mut out, &op.constant, v);
        out
    }

    fn phi_of(&self, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (&i, c) in v {
            axpy(&mut out, c, &self.phi[i]);
        }
        out
    }

    /// Splits a source vector into target coordinates and a remote part.
    pub fn decompose(&self, v: &SVec) -> Option<(SVec, SVec)> {
        let mut rest = v.clone();
        let mut coords = SVec::new();
        let mut remote = SVec::new();
        for d in (0..self.solvers.len()).rev() {
            let s = &self.solvers[d];
            let inv = s.inverse.as_ref()?;
            let mut rhs = vec![Rat::zero(); s.rows.len()];
            for (&i, c) in &rest {
                if self.source.degree(i) == d {
                    rhs[s.rows[&i]] = c.clone();
                }
            }
            if rhs.iter().all(Rat::is_zero) {
                continue;
            }
            let x = inv.apply(&rhs);
            for (p, c) in x.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if p < s.targets.len() {
                    let t = s.targets[p];
                    coords.insert(t, c.clone());
                    axpy(&mut rest, &-c, &self.phi[t]);
                } else {
                    let r = s.remotes[p - s.targets.len()];
                    remote.insert(r, c.clone());
                    axpy(&mut rest, &-c, &SVec::from([(r, Rat::one())]));
                }
            }
            debug_assert!(rest.keys().all(|&i| self.source.degree(i) < d));
        }
        Some((coords, remote))
    }

    /// Compares `g Φ(s)` with `Φ(g s)` for every tilde generator `g` and every
    /// target basis vector `s` below the cutoff.
    pub fn compare(&self) -> GrReport {
        let basis = self.solvers.iter().all(|s| s.inverse.is_some());
        let mut report = GrReport {
            passed: false,
            basis,
            stable: true,
            graded_match: true,
            checked: 0,
            remote_terms: 0,
            witnesses: Vec::new(),
        };
        if !basis {
            return report;
        }
        let n = self.target.dim;
        let active = self.target.below(self.target.cutoff);
        for (slot, op) in self.ops.iter().enumerate() {
            let g = Gen::all(n)[slot];
            for s in 0..active {
                let lhs = self.apply_op(op, &self.phi[s]);
                let rhs = self.phi_of(self.target.action(g, s));
                let mut diff = lhs;
                axpy(&mut diff, &Rat::from_int(-1), &rhs);
                report.checked += 1;
                let (coords, remote) = self.decompose(&diff).expect("basis checked");
                if !remote.is_empty() {
                    report.remote_terms += 1;
                }
                let expect = self.levels[s] + op.weight;
                let below: Vec<_> = coords.iter().filter(|(&t, _)| self.levels[t] < expect).collect();
                let level: Vec<_> = coords.iter().filter(|(&t, _)| self.levels[t] == expect).collect();
                let kind = if !below.is_empty() {
                    report.stable = false;
                    "below"
                } else if !level.is_empty() {
                    report.graded_match = false;
                    "leading"
                } else {
                    continue;
                };
                if report.witnesses.len() < 20 {
                    let terms = if kind == "below" { below } else { level };
                    report.witnesses.push(GrWitness {
                        generator: g.name(),
                        element: self.target.label(s),
                        kind: kind.into(),
                        terms: terms.into_iter().map(|(&t, c)| (self.target.label(t), self.levels[t], c.to_string())).collect(),
                    });
                }
            }
        }
        report.passed = report.basis && report.stable && report.graded_match;
        report
    }
}

/// `ω_β` read in the coordinates `(z, w)` of α keeps, in the graded module,
/// only its component with the fewest `w`-covectors; returns the scalar `c`
/// with that component equal to `c ω_τ`.
fn form_scale(alpha: &Frame, beta: &Frame, tau: &Frame) -> Result<Rat> {
    let n = alpha.dim;
    let d = alpha.z_count();
    let read: Vec<Vec<Rat>> = (0..beta.w_count())
        .map(|j| {
            let u = beta.w_linear(j);
            let mut out: Vec<Rat> = (0..d).map(|k| dot(&u, &alpha.direction(k))).collect();
            out.extend(alpha.pivots.iter().map(|&p| u[p].clone()));
            out
        })
        .collect();
    let q = tau.pivots.iter().filter(|&&p| p >= d).count();
    let c = read.len();
    let lead: Vec<Rat> = plucker(&read, n)
        .into_iter()
        .zip(subsets(n, c))
        .map(|(x, s)| if s.iter().filter(|&&i| i >= d).count() == q { x } else { Rat::zero() })
        .collect();
    let target = plucker(&(0..tau.w_count()).map(|j| tau.w_linear(j)).collect::<Vec<_>>(), n);
    let i = target.iter().position(|x| !x.is_zero()).ok_or_else(|| Error::Reading("degenerate tilde form".into()))?;
    let scale = &lead[i] / &target[i];
    if scale.is_zero() || lead.iter().zip(&target).any(|(l, t)| *l != &scale * t) {
        return Err(Error::Reading("leading part of the form is not the tilde form".into()));
    }
    // the relations are normalized by the volume `ω̂ ∧ ω` of each frame
    let chart: Vec<Vec<Rat>> = alpha
        .free
        .iter()
        .map(|&f| (0..n).map(|i| if i == f { Rat::one() } else { Rat::zero() }).collect())
        .chain((0..alpha.w_count()).map(|j| alpha.w_linear(j)))
        .collect();
    let vol_beta = volume(beta, n)?;
    let vol_tau = volume(tau, n)? * determinant(chart, n)?;
    Ok(scale * vol_beta / vol_tau)
}

fn determinant(rows: Vec<Vec<Rat>>, n: usize) -> Result<Rat> {
    Matrix::from_rows(rows, n)?.determinant()
}

fn volume(f: &Frame, n: usize) -> Result<Rat> {
    determinant(f.omega_hat().into_iter().chain(f.omega()).collect(), n)
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

fn tilde_operators(source: &GradedModel, alpha: usize) -> Vec<Operator> {
    let f = &source.frames[alpha];
    let (d, n) = (f.z_count(), source.dim);
    let mut ops = Vec::with_capacity(2 * n);
    for l in 0..n {
        ops.push(if l < d {
            Operator { terms: vec![(Gen::X(f.free[l]), Rat::one())], constant: Rat::zero(), weight: 0 }
        } else {
            let lin = f.w_linear(l - d);
            Operator {
                terms: (0..n).filter(|&i| !lin[i].is_zero()).map(|i| (Gen::X(i), lin[i].clone())).collect(),
                constant: f.w_offset(l - d),
                weight: 1,
            }
        });
    }
    for l in 0..n {
        ops.push(if l < d {
            let dir = f.direction(l);
            Operator {
                terms: (0..n).filter(|&i| !dir[i].is_zero()).map(|i| (Gen::D(i), dir[i].clone())).collect(),
                constant: Rat::zero(),
                weight: 0,
            }
        } else {
            Operator { terms: vec![(Gen::D(f.pivots[l - d]), Rat::one())], constant: Rat::zero(), weight: -1 }
        });
    }
    ops
}

/// Builds both models, the comparison map and the filtration degrees. The
/// generator `V_β ⊗ Ω_β` sits in degree `codim_{X̄β}(X̄β ∩ X̄α) − codim α`, so
/// the open stratum starts in degree 0.
pub fn gr_model(rep: &Rep, arr: &Arrangement, alpha: usize, cutoff: usize) -> Result<GrModel> {
    let sp = specialize_rep(rep, arr, alpha)?;
    let source = build_sections_model(rep, cutoff)?;
    let target = build_sections_model(&sp.rep, cutoff)?;
    let n = source.dim;
    let d = source.frames[alpha].z_count();
    let ops = tilde_operators(&source, alpha);
    let remote: Vec<bool> = source.basis.iter().map(|e| sp.vertex_map[e.vertex].is_none()).collect();

    let mut levels = Vec::with_capacity(target.len());
    let mut phi = Vec::with_capacity(target.len());
    let mut gm = GrModel { alpha, sp, source, target, levels: Vec::new(), phi: Vec::new(), remote, ops, solvers: Vec::new() };
    for e in &gm.target.basis {
        let tf = &gm.target.frames[e.vertex];
        let z = tf.z_count();
        let mut level = -(tf.pivots.iter().filter(|&&p| p >= d).count() as i64);
        for (k, &c) in tf.free.iter().enumerate() {
            if c >= d {
                level += e.mono[k] as i64;
            }
        }
        for (j, &p) in tf.pivots.iter().enumerate() {
            if p >= d {
                level -= e.mono[z + j] as i64;
            }
        }
        levels.push(level);

        let &(beta, off) = gm.sp.block_map[e.vertex]
            .iter()
            .rev()
            .find(|(_, off)| *off <= e.basis)
            .ok_or_else(|| Error::Reading("empty tilde block".into()))?;
        let start = gm
            .source
            .index(&ModelElt { vertex: beta, mono: vec![0; n], basis: e.basis - off })
            .expect("degree-zero vector");
        let scale = form_scale(&gm.source.frames[alpha], &gm.source.frames[beta], tf)?;
        let mut v = SVec::from([(start, scale.recip().expect("nonzero"))]);
        for (j, &p) in tf.pivots.iter().enumerate() {
            for _ in 0..e.mono[z + j] {
                v = gm.apply_op(&gm.ops[n + p], &v);
            }
        }
        for (k, &c) in tf.free.iter().enumerate() {
            for _ in 0..e.mono[k] {
                v = gm.apply_op(&gm.ops[c], &v);
            }
        }
        phi.push(v);
    }
    gm.levels = levels;
    gm.phi = phi;

    for deg in 0..=cutoff {
        let rows: BTreeMap<usize, usize> =
            (0..gm.source.len()).filter(|&i| gm.source.degree(i) == deg).enumerate().map(|(p, i)| (i, p)).collect();
        let targets: Vec<usize> = (0..gm.target.len()).filter(|&i| gm.target.degree(i) == deg).collect();
        let remotes: Vec<usize> = rows.keys().copied().filter(|&i| gm.remote[i]).collect();
        let mut cols = Vec::with_capacity(targets.len() + remotes.len());
        for &t in &targets {
            let mut col = vec![Rat::zero(); rows.len()];
            for (i, c) in &gm.phi[t] {
                if let Some(&p) = rows.get(i) {
                    col[p] = c.clone();
                }
            }
            cols.push(col);
        }
        for &r in &remotes {
            let mut col = vec![Rat::zero(); rows.len()];
            col[rows[&r]] = Rat::one();
            cols.push(col);
        }
        let inverse = if cols.len() == rows.len() {
            if rows.is_empty() {
                Some(Matrix::zeros(0, 0))
            } else {
                Matrix::from_columns(&cols, rows.len()).inverse()
            }
        } else {
            None
        };
        if inverse.is_none() {
            return Err(Error::Reading(format!(
                "degree {deg}: {} images and {} killed vectors do not form a basis of {} sections",
                targets.len(),
                remotes.len(),
                rows.len()
            )));
        }
        gm.solvers.push(DegreeSolver { targets, remotes, rows, inverse });
    }
    Ok(gm)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaSlice {
    pub level: i64,
    pub dim: usize,
    pub eigenvalue: String,
    /// `θ` maps the truncated slice into itself.
    pub closed: bool,
    pub nilpotent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaReport {
    pub passed: bool,
    pub lambda: String,
    pub slices: Vec<ThetaSlice>,
}

/// `θ = Σ_j w_j ∂_{w_j}` on each `Gr^k` slice of degree `≤ cutoff − 2`, checking
/// that `θ − λ_α − k` is nilpotent; slices with `k > max_level` are skipped.
pub fn theta_spectrum(gr: &GrModel, weights: &Weights, max_level: i64) -> ThetaReport {
    let lambda = lambda_of_stratum(gr.source.rep.graph(), weights, gr.alpha);
    let t = &gr.target;
    let d = gr.source.frames[gr.alpha].z_count();
    let top = t.cutoff.saturating_sub(2);
    let theta = |v: &SVec| {
        let mut out = SVec::new();
        for j in d..t.dim {
            axpy(&mut out, &Rat::one(), &t.apply(Gen::X(j), &t.apply(Gen::D(j), v)));
        }
        out
    };
    let mut by_level: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    if t.cutoff >= 2 {
        for i in 0..t.below(top + 1) {
            by_level.entry(gr.levels[i]).or_default().push(i);
        }
    }
    let mut slices = Vec::new();
    for (level, idx) in by_level.into_iter().filter(|(k, _)| *k <= max_level) {
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let eigen = &lambda + &Rat::from_int(level);
        let mut closed = true;
        let mut m = Matrix::zeros(idx.len(), idx.len());
        for (c, &i) in idx.iter().enumerate() {
            for (k, x) in theta(&SVec::from([(i, Rat::one())])) {
                match pos.get(&k) {
                    Some(&r) => m[(r, c)] = x,
                    None => closed = false,
                }
            }
            m[(c, c)] -= &eigen;
        }
        let nilpotent = closed && m.is_nilpotent();
        slices.push(ThetaSlice { level, dim: idx.len(), eigenvalue: eigen.to_string(), closed, nilpotent });
    }
    ThetaReport { passed: slices.iter().all(|s| s.nilpotent), lambda: lambda.to_string(), slices }
}
