use serde::Serialize;

use super::Rep;
use crate::arrangement::{FlatKey, StratGraph};
use crate::error::Result;
use crate::exactlin::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub to: FlatKey,
    pub from: FlatKey,
    pub residual: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl RelationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        RelationReport { passed: violations.is_empty(), violations }
    }
}

/// Checks `Σ_β A_{α,β} A_{β,γ} = 0` over every ordered pair `α ≠ γ` that
/// carries a relation (see [`is_relation_pair`]).
pub fn check_relations(rep: &Rep) -> Result<RelationReport> {
    let g = rep.graph();
    let mut violations = Vec::new();
    for alpha in 0..g.len() {
        for gamma in 0..g.len() {
            if !is_relation_pair(g, alpha, gamma) {
                continue;
            }
            let mids: Vec<usize> = neighbours(g, alpha).into_iter().filter(|&b| g.adjacent(b, gamma)).collect();
            if mids.is_empty() {
                continue;
            }
            let mut sum = Matrix::zeros(rep.dim(alpha), rep.dim(gamma));
            for b in mids {
                sum = sum.try_add(&rep.map(alpha, b).try_mul(&rep.map(b, gamma))?)?;
            }
            if !sum.is_zero() {
                violations.push(Violation { to: g.key(alpha).clone(), from: g.key(gamma).clone(), residual: sum });
            }
        }
    }
    Ok(RelationReport::from_violations(violations))
}

/// Pairs on which the quadratic relation is imposed: comparable vertices two
/// codimensions apart, or equal-codimension vertices whose closures meet in
/// codimension one. Equal-codimension strata that only share a stratum above
/// (two points of a line, two parallel hyperplanes) are not constrained.
pub fn is_relation_pair(g: &StratGraph, alpha: usize, gamma: usize) -> bool {
    let (ca, cg) = (g.codim(alpha), g.codim(gamma));
    if alpha == gamma {
        return false;
    }
    if ca.abs_diff(cg) == 2 {
        return g.contains(alpha, gamma) || g.contains(gamma, alpha);
    }
    ca == cg && g.down(alpha).iter().any(|&b| g.is_arrow(gamma, b))
}

pub(crate) fn neighbours(g: &StratGraph, v: usize) -> Vec<usize> {
    let mut n: Vec<usize> = g.up(v).iter().chain(g.down(v)).copied().collect();
    n.sort();
    n
}

/// `(−1)^{(codim α + codim β − 1)/2}` for adjacent `α, β`.
pub fn dual_sign(g: &StratGraph, alpha: usize, beta: usize) -> i64 {
    let e = (g.codim(alpha) + g.codim(beta) - 1) / 2;
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `A^t_{α,β} = (−1)^{(codim α + codim β − 1)/2} A_{β,α}^T` on the dual spaces.
pub fn dualize(rep: &Rep) -> Rep {
    let g = rep.graph();
    let mut out = rep.clone();
    for (&(a, b), _) in rep.maps() {
        let m = rep.map(b, a).transpose();
        let m = if dual_sign(g, a, b) < 0 { -&m } else { m };
        out.set_map(a, b, m).expect("transposed shape");
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::arrangement::build_poset;
    use crate::arrangement::corpus::{a1, a2};
    use crate::exactlin::Rat;
    use crate::quiver::scalar;

    #[test]
    fn zero_maps_pass() {
        let g = Arc::new(build_poset(&a2()));
        let rep = Rep::with_dims(g, vec![1, 1, 1, 1]);
        assert!(check_relations(&rep).unwrap().passed);
    }

    #[test]
    fn constructed_violation() {
        let g = Arc::new(build_poset(&a2()));
        let v = |k: &[usize]| g.vertex(k).unwrap();
        let mut rep = Rep::with_dims(g.clone(), vec![1, 1, 1, 1]);
        let one = scalar(Rat::one());
        rep.set_map(v(&[0]), v(&[]), one.clone()).unwrap();
        rep.set_map(v(&[]), v(&[1]), one.clone()).unwrap();
        rep.set_map(v(&[0]), v(&[0, 1]), one.clone()).unwrap();
        rep.set_map(v(&[0, 1]), v(&[1]), one).unwrap();
        let report = check_relations(&rep).unwrap();
        assert!(!report.passed);
        let w = report.violations.iter().find(|w| w.to == vec![0] && w.from == vec![1]).unwrap();
        assert_eq!(w.residual, scalar(Rat::from_int(2)));
    }

    #[test]
    fn far_apart_points_are_unconstrained() {
        use crate::arrangement::corpus::a4;
        let g = build_poset(&a4());
        let v = |k: &[usize]| g.vertex(k).unwrap();
        assert!(!is_relation_pair(&g, v(&[0, 1]), v(&[0, 2])));
        assert!(is_relation_pair(&g, v(&[0]), v(&[1])));
        assert!(is_relation_pair(&g, v(&[]), v(&[0, 1])));
        assert!(!is_relation_pair(&g, v(&[1]), v(&[0, 2])));
    }

    #[test]
    fn dual_signs_and_involution() {
        let g = Arc::new(build_poset(&a2()));
        assert_eq!(dual_sign(&g, 0, 1), 1);
        assert_eq!(dual_sign(&g, 1, 2), -1);
        let g1 = Arc::new(build_poset(&a1()));
        let mut rep = Rep::with_dims(g1, vec![1, 1]);
        rep.set_map(0, 1, scalar(Rat::from_int(2))).unwrap();
        rep.set_map(1, 0, scalar(Rat::from_int(3))).unwrap();
        let d = dualize(&rep);
        assert_eq!(d.map(0, 1), scalar(Rat::from_int(3)));
        assert_eq!(d.map(1, 0), scalar(Rat::from_int(2)));
        assert_eq!(dualize(&d), rep);
    }
}
