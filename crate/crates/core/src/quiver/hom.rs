use std::collections::BTreeSet;
use std::sync::Arc;

use super::Rep;
use crate::arrangement::StratGraph;
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rat};

fn offsets(v: &Rep, w: &Rep) -> Vec<usize> {
    let mut off = vec![0];
    for a in 0..v.dims().len() {
        off.push(off[a] + w.dim(a) * v.dim(a));
    }
    off
}

/// Basis (columns) of `Hom(V, W)`: families `φ_α: V_α → W_α` with
/// `φ_α A^V_{α,β} = A^W_{α,β} φ_β`. Unknowns are the entries of each `φ_α`,
/// vertices in key order, column-major inside a block.
pub fn hom_space(v: &Rep, w: &Rep) -> Result<Matrix> {
    if !v.graph().same_shape(w.graph()) {
        return Err(Error::GraphMismatch);
    }
    let off = offsets(v, w);
    let unknowns = off[off.len() - 1];
    let idx = |a: usize, i: usize, k: usize| off[a] + k * w.dim(a) + i;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (&(a, b), av) in v.maps() {
        let aw = w.map(a, b);
        // entry (i, j) of φ_a A^v_{ab} − A^w_{ab} φ_b
        for i in 0..w.dim(a) {
            for j in 0..v.dim(b) {
                let mut row = vec![Rat::zero(); unknowns];
                for k in 0..v.dim(a) {
                    if !av[(k, j)].is_zero() {
                        row[idx(a, i, k)] += &av[(k, j)];
                    }
                }
                for k in 0..w.dim(b) {
                    if !aw[(i, k)].is_zero() {
                        row[idx(b, k, j)] -= &aw[(i, k)];
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    Ok(Matrix::from_rows(rows, unknowns)?.kernel_basis())
}

/// Splits a flattened morphism into its vertex components.
pub fn unflatten_morphism(v: &Rep, w: &Rep, x: &[Rat]) -> Vec<Matrix> {
    let off = offsets(v, w);
    (0..v.dims().len())
        .map(|a| {
            let mut m = Matrix::zeros(w.dim(a), v.dim(a));
            for k in 0..v.dim(a) {
                for i in 0..w.dim(a) {
                    m[(i, k)] = x[off[a] + k * w.dim(a) + i].clone();
                }
            }
            m
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoSearch {
    Found(Vec<Matrix>),
    /// Dimension vectors differ, so no isomorphism exists.
    NotIsomorphic,
    /// The deterministic sweep found no invertible morphism; nothing is proved.
    Inconclusive,
}

impl IsoSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, IsoSearch::Found(_))
    }
}

/// Sweeps basis morphisms, then `Σ c_i h_i` for coefficient patterns
/// `i+1`, `k^i` (k = 2, 3, 5, 7) until one is invertible at every vertex.
pub fn find_isomorphism(v: &Rep, w: &Rep) -> Result<IsoSearch> {
    if !v.graph().same_shape(w.graph()) {
        return Err(Error::GraphMismatch);
    }
    if v.dims() != w.dims() {
        return Ok(IsoSearch::NotIsomorphic);
    }
    let h = hom_space(v, w)?;
    let n = h.cols();
    let mut patterns: Vec<Vec<Rat>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    patterns.push((0..n).map(|i| Rat::from_int(i as i64 + 1)).collect());
    for k in [2i64, 3, 5, 7] {
        let mut c = Rat::one();
        patterns.push(
            (0..n)
                .map(|_| {
                    let cur = c.clone();
                    c = &c * &Rat::from_int(k);
                    cur
                })
                .collect(),
        );
    }
    for c in patterns {
        let x = h.apply(&c);
        let phi = unflatten_morphism(v, w, &x);
        if phi.iter().all(Matrix::is_invertible) {
            return Ok(IsoSearch::Found(phi));
        }
    }
    Ok(IsoSearch::Inconclusive)
}

/// Transports a representation of an induced arrangement along `vertex_map`;
/// every other vertex gets the zero space.
pub fn extend_by_zero(sub: &Rep, graph: Arc<StratGraph>, vertex_map: &[usize]) -> Result<Rep> {
    let sg = sub.graph();
    if vertex_map.len() != sg.len() || vertex_map.iter().any(|&v| v >= graph.len()) {
        return Err(Error::Precondition("vertex map does not cover the induced graph".into()));
    }
    if vertex_map.iter().collect::<BTreeSet<_>>().len() != vertex_map.len() {
        return Err(Error::Precondition("vertex map is not injective".into()));
    }
    for a in 0..sg.len() {
        for b in 0..sg.len() {
            if sg.is_arrow(a, b) != graph.is_arrow(vertex_map[a], vertex_map[b]) {
                return Err(Error::Precondition("vertex map does not preserve arrows".into()));
            }
        }
    }
    let mut dims = vec![0; graph.len()];
    for (a, &t) in vertex_map.iter().enumerate() {
        dims[t] = sub.dim(a);
    }
    let mut out = Rep::with_dims(graph, dims);
    for (&(a, b), m) in sub.maps() {
        out.set_map(vertex_map[a], vertex_map[b], m.clone())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::corpus::{a1, a2};
    use crate::arrangement::{build_poset, induced_arrangement};
    use crate::quiver::{check_relations, scalar};

    fn a1_rep(up: i64, down: i64) -> Rep {
        let g = Arc::new(build_poset(&a1()));
        let mut rep = Rep::with_dims(g, vec![1, 1]);
        rep.set_map(1, 0, scalar(Rat::from_int(up))).unwrap();
        rep.set_map(0, 1, scalar(Rat::from_int(down))).unwrap();
        rep
    }

    #[test]
    fn endomorphisms_of_a_scalar_rep() {
        let v = a1_rep(1, 3);
        assert_eq!(hom_space(&v, &v).unwrap().cols(), 1);
        assert!(find_isomorphism(&v, &v).unwrap().is_found());
    }

    #[test]
    fn hom_from_zero_is_zero() {
        let v = a1_rep(1, 3);
        let z = Rep::zero(v.graph_arc());
        assert_eq!(hom_space(&z, &v).unwrap().cols(), 0);
    }

    #[test]
    fn isomorphism_search_outcomes() {
        let v = a1_rep(1, 3);
        let z = Rep::with_dims(v.graph_arc(), vec![1, 0]);
        assert_eq!(find_isomorphism(&v, &z).unwrap(), IsoSearch::NotIsomorphic);
        // rescaled arrows, same round trip
        let w = a1_rep(3, 1);
        assert!(find_isomorphism(&v, &w).unwrap().is_found());
        // different round trip: no morphism is invertible
        let u = a1_rep(1, 2);
        assert_eq!(find_isomorphism(&v, &u).unwrap(), IsoSearch::Inconclusive);
        let g2 = Arc::new(build_poset(&a2()));
        assert!(matches!(find_isomorphism(&v, &Rep::zero(g2)), Err(Error::GraphMismatch)));
    }

    #[test]
    fn extension_along_a_line() {
        let arr = a2();
        let g = Arc::new(build_poset(&arr));
        let alpha = g.vertex(&[0]).unwrap();
        let ind = induced_arrangement(&arr, &g, alpha).unwrap();
        let mut sub = Rep::with_dims(Arc::new(ind.graph.clone()), vec![1, 1]);
        sub.set_map(1, 0, scalar(Rat::one())).unwrap();
        sub.set_map(0, 1, scalar(Rat::new(1, 3))).unwrap();
        let ext = extend_by_zero(&sub, g.clone(), &ind.vertex_map).unwrap();
        assert_eq!(ext.dims(), &[0, 1, 1, 0]);
        assert!(check_relations(&ext).unwrap().passed);
        let id = extend_by_zero(&Rep::zero(g.clone()), g.clone(), &(0..g.len()).collect::<Vec<_>>()).unwrap();
        assert!(id.is_zero());
        assert!(extend_by_zero(&sub, g, &[0, 0]).is_err());
    }
}
