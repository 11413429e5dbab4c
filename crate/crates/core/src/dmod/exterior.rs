//! Finite exterior powers with subset bases.

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rat};

/// The `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

pub fn subset_index(n: usize, s: &[usize]) -> usize {
    subsets(n, s.len()).iter().position(|t| t == s).expect("a sorted subset")
}

/// Sign of the shuffle putting `s` followed by its complement into increasing order,
/// so that `e_s ∧ e_{s^c} = sign · e_0 ∧ … ∧ e_{n−1}`.
pub fn complement_sign(s: &[usize]) -> i64 {
    let inversions: usize = s.iter().enumerate().map(|(pos, &i)| i - pos).sum();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn complement(n: usize, s: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !s.contains(i)).collect()
}

/// Plücker coordinates of `v_0 ∧ … ∧ v_{k−1}` in `Λ^k(Q^m)`, indexed by `subsets(m, k)`.
pub fn plucker(vectors: &[Vec<Rat>], m: usize) -> Vec<Rat> {
    let k = vectors.len();
    if k == 0 {
        return vec![Rat::one()];
    }
    let rows = Matrix::from_rows(vectors.to_vec(), m).expect("uniform lengths");
    subsets(m, k)
        .iter()
        .map(|cols| rows.select_columns(cols).determinant().expect("square minor"))
        .collect()
}

/// A basis `u_0 … u_{n−1}` of a subspace of `Q^m` with its exterior powers
/// embedded in `Λ(Q^m)`.
#[derive(Clone, Debug)]
pub struct WedgeBasis {
    pub ambient: usize,
    pub vectors: Vec<Vec<Rat>>,
    /// Degree k: columns are the Plücker coordinates of `u_S`, `S ∈ subsets(n, k)`.
    pub embeddings: Vec<Matrix>,
}

impl WedgeBasis {
    pub fn new(vectors: Vec<Vec<Rat>>, ambient: usize) -> WedgeBasis {
        let n = vectors.len();
        let embeddings = (0..=n)
            .map(|k| {
                let cols: Vec<Vec<Rat>> = subsets(n, k)
                    .iter()
                    .map(|s| plucker(&s.iter().map(|&i| vectors[i].clone()).collect::<Vec<_>>(), ambient))
                    .collect();
                Matrix::from_columns(&cols, subsets(ambient, k).len())
            })
            .collect();
        WedgeBasis { ambient, vectors, embeddings }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coordinates in the `u_S` basis of an element of `Λ^k(Q^m)`; errors if it
    /// does not lie in `Λ^k` of the subspace.
    pub fn coordinates(&self, k: usize, plucker: &[Rat]) -> Result<Vec<Rat>> {
        if k > self.len() {
            return if plucker.iter().all(Rat::is_zero) {
                Ok(Vec::new())
            } else {
                Err(Error::Reading("wedge leaves the target subspace".into()))
            };
        }
        self.embeddings[k].solve(plucker).ok_or_else(|| Error::Reading("wedge leaves the target subspace".into()))
    }
}
