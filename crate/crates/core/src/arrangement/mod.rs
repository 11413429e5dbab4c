//! Affine hyperplane arrangements over Q and their stratification data.

mod cone;
mod frame;
mod poset;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rat};

pub use cone::{induced_arrangement, normal_cone_arrangement, InducedArrangement, NormalCone, PairKey};
pub use frame::{adapted_frame, contract, top_form_ratio, Frame};
pub use poset::{build_poset, format_key, parse_key, Flat, FlatKey, StratGraph};

/// Zero set of the affine functional `normal · x + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Hyperplane {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        Hyperplane { normal, offset }
    }

    pub fn from_ints(normal: &[i64], offset: i64) -> Self {
        Hyperplane { normal: normal.iter().map(|&x| Rat::from_int(x)).collect(), offset: Rat::from_int(offset) }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum::<Rat>() + &self.offset
    }

    /// Augmented row `[normal | offset]`.
    pub fn augmented(&self) -> Vec<Rat> {
        let mut r = self.normal.clone();
        r.push(self.offset.clone());
        r
    }

    /// Functional scaled so that its first nonzero normal entry is 1.
    pub fn normalized(&self) -> Vec<Rat> {
        let row = self.augmented();
        let lead = self.normal.iter().find(|x| !x.is_zero()).cloned().expect("nonzero normal");
        let inv = lead.recip().expect("nonzero");
        row.iter().map(|x| x * &inv).collect()
    }
}

/// An ordered list of distinct hyperplanes in `Q^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    pub dim: usize,
    pub hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    /// Validates normals and rejects hyperplanes that coincide as sets.
    /// A zero-dimensional ambient space (a point, no hyperplanes) is accepted;
    /// it arises as the restriction to a point stratum.
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.normal.len() != dim {
                return Err(Error::Arrangement(format!("hyperplane {i} has normal of length {}", h.normal.len())));
            }
            if h.normal.iter().all(Rat::is_zero) {
                return Err(Error::Arrangement(format!("hyperplane {i} has zero normal")));
            }
        }
        let normalized: Vec<_> = hyperplanes.iter().map(Hyperplane::normalized).collect();
        for i in 0..normalized.len() {
            for j in 0..i {
                if normalized[i] == normalized[j] {
                    return Err(Error::Arrangement(format!("hyperplanes {j} and {i} coincide")));
                }
            }
        }
        Ok(Arrangement { dim, hyperplanes })
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Arrangement = serde_json::from_str(s)?;
        if raw.dim == 0 {
            return Err(Error::Arrangement("dimension must be at least 1".into()));
        }
        Arrangement::new(raw.dim, raw.hyperplanes)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("arrangement serializes")
    }

    /// Rewrites the arrangement in the affine coordinates `(z, w)` of a frame,
    /// so that the frame's flat becomes `{w = 0}`.
    pub fn in_frame_coordinates(&self, frame: &Frame) -> Arrangement {
        let hyperplanes = self
            .hyperplanes
            .iter()
            .map(|h| {
                let mut normal: Vec<Rat> = (0..frame.z_count())
                    .map(|k| dot(&h.normal, &frame.direction(k)))
                    .collect();
                normal.extend(frame.pivots.iter().map(|&p| h.normal[p].clone()));
                // x = origin + sum z_k d_k + sum w_j e_{p_j}
                Hyperplane { normal, offset: h.eval(&frame.origin) }
            })
            .collect();
        Arrangement { dim: self.dim, hyperplanes }
    }
}

pub(crate) fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum()
}

/// `point + span(dirs)`; `dirs` has one column per direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub point: Vec<Rat>,
    pub dirs: Matrix,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.dirs.cols()
    }

    /// Solution set of the augmented system `rows · [x; 1] = 0`, if nonempty.
    pub fn from_equations(rows: &Matrix, n: usize) -> Option<AffineSubspace> {
        let r = rows.rref();
        if r.pivots.last() == Some(&n) {
            return None;
        }
        let mut point = vec![Rat::zero(); n];
        for (i, &p) in r.pivots.iter().enumerate() {
            point[p] = -&r.echelon[(i, n)];
        }
        let dirs = r.echelon.block(0, 0, r.rank, n).kernel_basis();
        Some(AffineSubspace { point, dirs })
    }

    pub fn lies_in(&self, h: &Hyperplane) -> bool {
        h.eval(&self.point).is_zero() && (0..self.dirs.cols()).all(|k| dot(&h.normal, &self.dirs.column(k)).is_zero())
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_zero_normals() {
        let dup = Arrangement::new(1, vec![Hyperplane::from_ints(&[1], 0), Hyperplane::from_ints(&[2], 0)]);
        assert!(dup.is_err());
        let zero = Arrangement::new(1, vec![Hyperplane::from_ints(&[0], 1)]);
        assert!(zero.is_err());
        let parallel = Arrangement::new(1, vec![Hyperplane::from_ints(&[1], 0), Hyperplane::from_ints(&[1], -1)]);
        assert!(parallel.is_ok());
    }

    #[test]
    fn json_format() {
        let a = Arrangement::from_json(r#"{"dim": 2, "hyperplanes": [{"normal": ["1","0"], "offset": "0"}, {"normal": [0, 1], "offset": "-1/2"}]}"#).unwrap();
        assert_eq!(a.hyperplanes[1].offset, Rat::new(-1, 2));
        assert!(Arrangement::from_json(r#"{"dim": 0, "hyperplanes": []}"#).is_err());
        let back = Arrangement::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
    }
}
