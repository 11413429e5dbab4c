//! Representations of the strat-graph quiver.

mod hom;
mod relations;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arrangement::{format_key, FlatKey, StratGraph};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rat};

pub use hom::{extend_by_zero, find_isomorphism, hom_space, unflatten_morphism, IsoSearch};
pub use relations::{check_relations, dual_sign, dualize, is_relation_pair, RelationReport, Violation};

/// Spaces `V_α` and maps `A_{α,β}: V_β → V_α` for every ordered adjacent pair.
/// Maps between non-adjacent vertices do not exist (they are zero).
#[derive(Clone, Debug)]
pub struct Rep {
    graph: Arc<StratGraph>,
    dims: Vec<usize>,
    /// Keyed by `(to, from)`; every ordered adjacent pair is present.
    maps: BTreeMap<(usize, usize), Matrix>,
}

impl Rep {
    pub fn zero(graph: Arc<StratGraph>) -> Rep {
        Rep::with_dims(graph.clone(), vec![0; graph.len()])
    }

    /// All maps zero.
    pub fn with_dims(graph: Arc<StratGraph>, dims: Vec<usize>) -> Rep {
        assert_eq!(dims.len(), graph.len());
        let maps = graph
            .adjacent_pairs()
            .into_iter()
            .map(|(a, b)| ((a, b), Matrix::zeros(dims[a], dims[b])))
            .collect();
        Rep { graph, dims, maps }
    }

    pub fn graph(&self) -> &StratGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> Arc<StratGraph> {
        self.graph.clone()
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// `A_{to,from}`; a zero matrix of the right shape for non-adjacent pairs.
    pub fn map(&self, to: usize, from: usize) -> Matrix {
        self.maps.get(&(to, from)).cloned().unwrap_or_else(|| Matrix::zeros(self.dims[to], self.dims[from]))
    }

    pub fn map_ref(&self, to: usize, from: usize) -> Option<&Matrix> {
        self.maps.get(&(to, from))
    }

    pub fn set_map(&mut self, to: usize, from: usize, m: Matrix) -> Result<()> {
        if !self.graph.adjacent(to, from) {
            return Err(Error::NotAnArrow(format!("{} – {}", format_key(self.graph.key(to)), format_key(self.graph.key(from)))));
        }
        if m.shape() != (self.dims[to], self.dims[from]) {
            return Err(Error::Shape(format!(
                "map {} <- {} must be {}x{}, got {}x{}",
                format_key(self.graph.key(to)),
                format_key(self.graph.key(from)),
                self.dims[to],
                self.dims[from],
                m.rows(),
                m.cols()
            )));
        }
        self.maps.insert((to, from), m);
        Ok(())
    }

    /// Round trip `A_α^β = A_{α,β} A_{β,α}` on `V_α`.
    pub fn round_trip(&self, alpha: usize, beta: usize) -> Matrix {
        &self.map(alpha, beta) * &self.map(beta, alpha)
    }

    pub fn maps(&self) -> impl Iterator<Item = (&(usize, usize), &Matrix)> {
        self.maps.iter()
    }

    pub fn direct_sum(&self, other: &Rep) -> Result<Rep> {
        if !self.graph.same_shape(&other.graph) {
            return Err(Error::GraphMismatch);
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mut out = Rep::with_dims(self.graph.clone(), dims);
        for (&(a, b), m) in &self.maps {
            let mut big = Matrix::zeros(out.dims[a], out.dims[b]);
            big.set_block(0, 0, m);
            big.set_block(self.dims[a], self.dims[b], &other.maps[&(a, b)]);
            out.maps.insert((a, b), big);
        }
        Ok(out)
    }

    /// Conjugates by invertible `P_α`: `A'_{α,β} = P_α A_{α,β} P_β^{-1}`.
    pub fn change_basis(&self, p: &[Matrix]) -> Result<Rep> {
        let inv: Vec<Matrix> = p
            .iter()
            .map(|m| m.inverse().ok_or_else(|| Error::Precondition("change of basis is not invertible".into())))
            .collect::<Result<_>>()?;
        let mut out = self.clone();
        for (&(a, b), m) in &self.maps {
            out.maps.insert((a, b), &(&p[a] * m) * &inv[b]);
        }
        Ok(out)
    }

    /// Quotient by the subrepresentation with spaces spanned by the columns of `sub[α]`.
    /// The caller guarantees invariance; coordinates follow [`QuotientMap`](crate::exactlin::QuotientMap).
    pub fn quotient(&self, sub: &[Matrix]) -> Rep {
        let q: Vec<_> = (0..self.dims.len()).map(|v| crate::exactlin::QuotientMap::new(self.dims[v], &sub[v])).collect();
        let dims = q.iter().map(|m| m.dim()).collect();
        let mut out = Rep::with_dims(self.graph.clone(), dims);
        for (&(a, b), m) in &self.maps {
            let lift = Matrix::identity(self.dims[b]).select_columns(&q[b].representatives);
            out.maps.insert((a, b), &(q[a].matrix() * m) * &lift);
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let dims: BTreeMap<String, usize> =
            (0..self.dims.len()).map(|v| (format_key(self.graph.key(v)), self.dims[v])).collect();
        let maps: Vec<MapJson> = self
            .maps
            .iter()
            .map(|(&(a, b), m)| MapJson { from: self.graph.key(b).clone(), to: self.graph.key(a).clone(), matrix: m.clone() })
            .collect();
        serde_json::to_value(RepJson { dims, maps }).expect("rep serializes")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Parses a Rep over `graph`; vertices missing from `dims` get dimension 0 and
    /// maps not listed are zero.
    pub fn from_json(s: &str, graph: Arc<StratGraph>) -> Result<Rep> {
        let raw: RepJson = serde_json::from_str(s)?;
        let mut dims = vec![0; graph.len()];
        for (k, &d) in &raw.dims {
            let key = crate::arrangement::parse_key(k)?;
            dims[graph.vertex(&key)?] = d;
        }
        let mut rep = Rep::with_dims(graph.clone(), dims);
        for m in raw.maps {
            let to = graph.vertex(&m.to)?;
            let from = graph.vertex(&m.from)?;
            // an empty row list cannot carry its column count
            let matrix = if m.matrix.rows() == 0 { Matrix::zeros(0, rep.dims[from]) } else { m.matrix };
            rep.set_map(to, from, matrix)?;
        }
        Ok(rep)
    }
}

impl PartialEq for Rep {
    fn eq(&self, other: &Rep) -> bool {
        self.graph.same_shape(&other.graph) && self.dims == other.dims && self.maps == other.maps
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    from: FlatKey,
    to: FlatKey,
    matrix: Matrix,
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    dims: BTreeMap<String, usize>,
    #[serde(default)]
    maps: Vec<MapJson>,
}

/// Scalar 1x1 matrix.
pub fn scalar(x: Rat) -> Matrix {
    Matrix::scalar(1, &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::build_poset;
    use crate::arrangement::corpus::a2;

    #[test]
    fn json_round_trip_and_errors() {
        let g = Arc::new(build_poset(&a2()));
        let s = r#"{"dims": {"[]": 1, "[0]": 1}, "maps": [{"from": [0], "to": [], "matrix": [["1/2"]]}]}"#;
        let rep = Rep::from_json(s, g.clone()).unwrap();
        assert_eq!(rep.map(0, 1), scalar(Rat::new(1, 2)));
        assert_eq!(rep.dim(2), 0);
        let back = Rep::from_json(&rep.to_json(), g.clone()).unwrap();
        assert_eq!(rep, back);
        let bad_shape = r#"{"dims": {"[]": 1}, "maps": [{"from": [0], "to": [], "matrix": [["1"]]}]}"#;
        assert!(matches!(Rep::from_json(bad_shape, g.clone()), Err(Error::Shape(_))));
        let not_adjacent = r#"{"dims": {"[0]": 1, "[1]": 1}, "maps": [{"from": [0], "to": [1], "matrix": [["1"]]}]}"#;
        assert!(matches!(Rep::from_json(not_adjacent, g.clone()), Err(Error::NotAnArrow(_))));
        let unknown = r#"{"dims": {"[5]": 1}}"#;
        assert!(matches!(Rep::from_json(unknown, g), Err(Error::UnknownFlat(_))));
    }

    #[test]
    fn direct_sum_dims_add() {
        let g = Arc::new(build_poset(&a2()));
        let a = Rep::with_dims(g.clone(), vec![1, 0, 1, 2]);
        let b = Rep::with_dims(g, vec![0, 1, 1, 0]);
        assert_eq!(a.direct_sum(&b).unwrap().dims(), &[1, 1, 2, 2]);
    }
}
