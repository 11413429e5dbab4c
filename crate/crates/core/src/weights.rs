//! Hyperplane weights, arrow weights, non-resonance and membership in `Qui_λ`.

use serde::{Deserialize, Serialize};

use crate::arrangement::{format_key, Arrangement, FlatKey, InducedArrangement, NormalCone, StratGraph};
use crate::error::{Error, Result};
use crate::exactlin::{common_preimage, Matrix, Rat};
use crate::quiver::{check_relations, Rep};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weights {
    pub weights: Vec<Rat>,
}

impl Weights {
    pub fn new(weights: Vec<Rat>) -> Self {
        Weights { weights }
    }

    pub fn from_fractions(w: &[(i64, i64)]) -> Self {
        Weights { weights: w.iter().map(|&(p, q)| Rat::new(p, q)).collect() }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.weights[i]
    }

    pub fn from_json(s: &str, arr: &Arrangement) -> Result<Self> {
        let w: Weights = serde_json::from_str(s)?;
        w.validate(arr)?;
        Ok(w)
    }

    pub fn validate(&self, arr: &Arrangement) -> Result<()> {
        if self.len() != arr.len() {
            return Err(Error::Shape(format!("{} weights for {} hyperplanes", self.len(), arr.len())));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("weights serialize")
    }
}

/// `λ_α = Σ_{i ∈ key(α)} λ_i`.
pub fn lambda_of_stratum(g: &StratGraph, w: &Weights, alpha: usize) -> Rat {
    g.key(alpha).iter().map(|&i| w.get(i)).sum()
}

/// `λ_{α,β} = Σ_{i ∈ key(β) ∖ key(α)} λ_i` for an arrow `α → β`.
pub fn lambda_of_arrow(g: &StratGraph, w: &Weights, alpha: usize, beta: usize) -> Result<Rat> {
    if !g.is_arrow(alpha, beta) {
        return Err(Error::NotAnArrow(format!("{} -> {}", format_key(g.key(alpha)), format_key(g.key(beta)))));
    }
    let ka = g.key(alpha);
    Ok(g.key(beta).iter().filter(|i| !ka.contains(i)).map(|&i| w.get(i)).sum())
}

/// Each tilde hyperplane carries the total weight of its preimages.
pub fn specialize_weights(cone: &NormalCone, w: &Weights) -> Weights {
    Weights::new(cone.preimages.iter().map(|pre| pre.iter().map(|&i| w.get(i)).sum()).collect())
}

/// Weights of the induced arrangement on `X̄_α`, summed over coinciding restrictions.
pub fn induced_weights(ind: &InducedArrangement, w: &Weights) -> Weights {
    Weights::new(ind.groups.iter().map(|g| g.iter().map(|&i| w.get(i)).sum()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Resonance {
    /// `λ_{α,β}` is a nonzero integer.
    Integral { arrow: (FlatKey, FlatKey), value: Rat },
    /// `λ_{α,β} − λ_{γ,δ}` is an integer (nonzero unless strict).
    Difference { first: (FlatKey, FlatKey), second: (FlatKey, FlatKey), value: Rat },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonresonanceReport {
    pub nonresonant: bool,
    pub strict: bool,
    pub witnesses: Vec<Resonance>,
}

/// Scans all arrows and ordered arrow pairs. With `strict`, a zero difference
/// between distinct arrows also counts as resonance.
pub fn is_nonresonant(g: &StratGraph, w: &Weights, strict: bool) -> NonresonanceReport {
    let arrows: Vec<((FlatKey, FlatKey), Rat)> = g
        .arrows
        .iter()
        .map(|&(a, b)| ((g.key(a).clone(), g.key(b).clone()), lambda_of_arrow(g, w, a, b).expect("arrow")))
        .collect();
    let mut witnesses = Vec::new();
    for (arrow, value) in &arrows {
        if value.is_integer() && !value.is_zero() {
            witnesses.push(Resonance::Integral { arrow: arrow.clone(), value: value.clone() });
        }
    }
    for (i, (first, x)) in arrows.iter().enumerate() {
        for (j, (second, y)) in arrows.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = x - y;
            if d.is_integer() && (strict || !d.is_zero()) {
                witnesses.push(Resonance::Difference { first: first.clone(), second: second.clone(), value: d });
            }
        }
    }
    NonresonanceReport { nonresonant: witnesses.is_empty(), strict, witnesses }
}

/// Operators `A_α^β − λ_{α,β}` for the arrows out of `α`.
pub fn shifted_round_trips(rep: &Rep, w: &Weights, alpha: usize) -> Vec<Matrix> {
    let g = rep.graph();
    g.down(alpha)
        .iter()
        .map(|&b| {
            let l = lambda_of_arrow(g, w, alpha, b).expect("arrow");
            &rep.round_trip(alpha, b) - &Matrix::scalar(rep.dim(alpha), &l)
        })
        .collect()
}

/// Membership in `Qui_λ`: at every vertex the shifted round trips must admit a
/// complete flag of common invariant subspaces on which they act by zero.
/// Built bottom-up as `S_{k+1} = {x : N x ∈ S_k for every shifted N}`.
pub fn in_category(rep: &Rep, w: &Weights) -> Result<bool> {
    if !check_relations(rep)?.passed {
        return Err(Error::Precondition("representation violates the quadratic relations".into()));
    }
    for alpha in 0..rep.graph().len() {
        let d = rep.dim(alpha);
        let ops = shifted_round_trips(rep, w, alpha);
        let mut s = Matrix::zeros(d, 0);
        loop {
            let next = common_preimage(&ops, &s, d);
            if next.cols() == s.cols() {
                break;
            }
            s = next;
        }
        if s.cols() != d {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::arrangement::build_poset;
    use crate::arrangement::corpus::{a1, a2};
    use crate::quiver::scalar;

    #[test]
    fn stratum_and_arrow_weights() {
        let g = build_poset(&a2());
        let w = Weights::from_fractions(&[(1, 2), (1, 3)]);
        let v = |k: &[usize]| g.vertex(k).unwrap();
        assert_eq!(lambda_of_stratum(&g, &w, v(&[])), Rat::zero());
        assert_eq!(lambda_of_stratum(&g, &w, v(&[0, 1])), Rat::new(5, 6));
        assert_eq!(lambda_of_stratum(&g, &w, v(&[0])), Rat::new(1, 2));
        assert_eq!(lambda_of_arrow(&g, &w, v(&[0]), v(&[0, 1])).unwrap(), Rat::new(1, 3));
        assert_eq!(lambda_of_arrow(&g, &w, v(&[]), v(&[1])).unwrap(), Rat::new(1, 3));
        assert!(lambda_of_arrow(&g, &w, v(&[0]), v(&[1])).is_err());
        for &(a, b) in &g.arrows {
            assert_eq!(
                lambda_of_arrow(&g, &w, a, b).unwrap(),
                lambda_of_stratum(&g, &w, b) - lambda_of_stratum(&g, &w, a)
            );
        }
    }

    #[test]
    fn resonance_examples() {
        let g = build_poset(&a2());
        assert!(is_nonresonant(&g, &Weights::from_fractions(&[(1, 2), (1, 3)]), false).nonresonant);
        let r = is_nonresonant(&g, &Weights::from_fractions(&[(1, 1), (0, 1)]), false);
        assert!(!r.nonresonant);
        assert!(r.witnesses.contains(&Resonance::Integral { arrow: (vec![], vec![0]), value: Rat::one() }));
        let half = Weights::from_fractions(&[(1, 2), (1, 2)]);
        assert!(is_nonresonant(&g, &half, false).nonresonant);
        assert!(!is_nonresonant(&g, &half, true).nonresonant);
    }

    #[test]
    fn category_membership_on_a_point() {
        let g = Arc::new(build_poset(&a1()));
        let w = Weights::from_fractions(&[(1, 2)]);
        let mut rep = Rep::with_dims(g.clone(), vec![1, 1]);
        rep.set_map(1, 0, scalar(Rat::one())).unwrap();
        rep.set_map(0, 1, scalar(Rat::new(1, 2))).unwrap();
        assert!(in_category(&rep, &w).unwrap());
        rep.set_map(0, 1, scalar(Rat::new(3, 2))).unwrap();
        assert!(!in_category(&rep, &w).unwrap());
        assert!(in_category(&Rep::zero(g), &w).unwrap());
    }
}
