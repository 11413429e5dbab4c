
use serde::Serialize;

use super::{adapted_frame, build_poset, dot, AffineSubspace, Arrangement, FlatKey, Frame, Hyperplane, StratGraph};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rat};

/// Deduplicates functionals up to scale, keeping first-occurrence order.
/// Returns the distinct hyperplanes and, for each, the original indices that map to it.
fn dedup(candidates: Vec<(usize, Hyperplane)>) -> (Vec<Hyperplane>, Vec<Vec<usize>>) {
    let mut seen: Vec<Vec<Rat>> = Vec::new();
    let mut hyperplanes = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, h) in candidates {
        let norm = h.normalized();
        match seen.iter().position(|s| *s == norm) {
            Some(t) => groups[t].push(i),
            None => {
                seen.push(norm);
                hyperplanes.push(h);
                groups.push(vec![i]);
            }
        }
    }
    (hyperplanes, groups)
}

/// Closure key of an affine subspace with respect to `arr`.
fn closure_key(arr: &Arrangement, s: &AffineSubspace) -> FlatKey {
    (0..arr.len()).filter(|&i| s.lies_in(&arr.hyperplanes[i])).collect()
}

/// The arrangement cut out on `X̄_α` by the hyperplanes not containing it.
#[derive(Clone, Debug)]
pub struct InducedArrangement {
    pub frame: Frame,
    /// Lives in the z coordinates of `frame`.
    pub arrangement: Arrangement,
    pub graph: StratGraph,
    /// Induced vertex → vertex of the original graph.
    pub vertex_map: Vec<usize>,
    /// Induced hyperplane → original hyperplanes restricting to it.
    pub groups: Vec<Vec<usize>>,
}

pub fn induced_arrangement(arr: &Arrangement, graph: &StratGraph, alpha: usize) -> Result<InducedArrangement> {
    if alpha >= graph.len() {
        return Err(Error::UnknownFlat(format!("vertex {alpha}")));
    }
    let frame = adapted_frame(graph.flat(alpha));
    let d = frame.z_count();
    let key = graph.key(alpha);
    let candidates = arr
        .hyperplanes
        .iter()
        .enumerate()
        .filter(|(i, _)| !key.contains(i))
        .filter_map(|(i, h)| {
            let normal: Vec<Rat> = (0..d).map(|k| dot(&h.normal, &frame.direction(k))).collect();
            // Restriction constant on X̄_α and nonzero there: empty intersection.
            normal.iter().any(|x| !x.is_zero()).then(|| (i, Hyperplane::new(normal, h.eval(&frame.origin))))
        })
        .collect();
    let (hyperplanes, groups) = dedup(candidates);
    let induced = Arrangement::new(d, hyperplanes)?;
    let sub = build_poset(&induced);
    let mut vertex_map = Vec::with_capacity(sub.len());
    for v in 0..sub.len() {
        let s = &sub.flat(v).subspace;
        let lifted = AffineSubspace {
            point: add(&frame.origin, &frame.directions.apply(&s.point)),
            dirs: &frame.directions * &s.dirs,
        };
        let target = graph.vertex(&closure_key(arr, &lifted))?;
        if graph.flat(target).dim() != s.dim() {
            return Err(Error::Arrangement("restriction does not match the intersection poset".into()));
        }
        vertex_map.push(target);
    }
    Ok(InducedArrangement { frame, arrangement: induced, graph: sub, vertex_map, groups })
}

fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `(β′, β″)`: `X̄_β′ = X̄_β ∩ X̄_α` as a flat of the arrangement, and
/// `β″` listed by the hyperplanes through `X̄_α` that also contain `X̄_β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairKey {
    pub prime: FlatKey,
    pub second: FlatKey,
}

/// Normal-cone arrangement `T_{X̄α}A` in the coordinates `(z, w)` of α's frame.
#[derive(Clone, Debug)]
pub struct NormalCone {
    pub frame: Frame,
    pub arrangement: Arrangement,
    pub graph: StratGraph,
    /// Original hyperplane → tilde hyperplane, `None` when dropped.
    pub merge: Vec<Option<usize>>,
    /// Tilde hyperplane → original hyperplanes.
    pub preimages: Vec<Vec<usize>>,
    /// Original vertex → tilde vertex, for strata whose closure meets `X̄_α`.
    pub vertex_map: Vec<Option<usize>>,
    pub pairs: Vec<Option<PairKey>>,
}

impl NormalCone {
    pub fn dropped(&self) -> Vec<usize> {
        (0..self.merge.len()).filter(|&i| self.merge[i].is_none()).collect()
    }

    /// Original vertices sent to tilde vertex `t`, in key order.
    pub fn preimage_vertices(&self, t: usize) -> Vec<usize> {
        (0..self.vertex_map.len()).filter(|&b| self.vertex_map[b] == Some(t)).collect()
    }
}

pub fn normal_cone_arrangement(arr: &Arrangement, graph: &StratGraph, alpha: usize) -> Result<NormalCone> {
    if alpha >= graph.len() {
        return Err(Error::UnknownFlat(format!("vertex {alpha}")));
    }
    let n = arr.dim;
    let frame = adapted_frame(graph.flat(alpha));
    let (d, c) = (frame.z_count(), frame.w_count());
    let key = graph.key(alpha).clone();
    let mut candidates = Vec::new();
    for (i, h) in arr.hyperplanes.iter().enumerate() {
        let mut normal = vec![Rat::zero(); n];
        let offset;
        if key.contains(&i) {
            // f_i = Σ_j n_i[p_j] w_j because the w rows are reduced.
            for j in 0..c {
                normal[d + j] = h.normal[frame.pivots[j]].clone();
            }
            offset = Rat::zero();
        } else {
            for k in 0..d {
                normal[k] = dot(&h.normal, &frame.direction(k));
            }
            if normal.iter().all(Rat::is_zero) {
                continue;
            }
            offset = h.eval(&frame.origin);
        }
        candidates.push((i, Hyperplane::new(normal, offset)));
    }
    let (hyperplanes, preimages) = dedup(candidates);
    let mut merge = vec![None; arr.len()];
    for (t, pre) in preimages.iter().enumerate() {
        for &i in pre {
            merge[i] = Some(t);
        }
    }
    let t_arr = Arrangement::new(n, hyperplanes)?;
    let t_graph = build_poset(&t_arr);

    let mut vertex_map = vec![None; graph.len()];
    let mut pairs = vec![None; graph.len()];
    for b in 0..graph.len() {
        let fb = graph.flat(b);
        let both = fb.equations.vstack(&graph.flat(alpha).equations);
        let Some(meet) = AffineSubspace::from_equations(&both, n) else { continue };
        // X̄_β′ × w(X̄_β) in frame coordinates.
        let z = frame.coordinates(&meet.point);
        let mut point = z[..d].to_vec();
        point.resize(n, Rat::zero());
        let mut dirs = Vec::new();
        for k in 0..meet.dirs.cols() {
            let mut v = frame.linear_coordinates(&meet.dirs.column(k));
            for x in v.iter_mut().skip(d) {
                *x = Rat::zero();
            }
            dirs.push(v);
        }
        for k in 0..fb.subspace.dirs.cols() {
            let mut v = frame.linear_coordinates(&fb.subspace.dirs.column(k));
            for x in v.iter_mut().take(d) {
                *x = Rat::zero();
            }
            dirs.push(v);
        }
        let dirs = Matrix::from_columns(&dirs, n).column_space();
        let product = AffineSubspace { point, dirs };
        let t = t_graph.vertex(&closure_key(&t_arr, &product))?;
        if t_graph.flat(t).dim() != product.dim() {
            return Err(Error::Arrangement(format!(
                "trace/projection of stratum {:?} is not a flat of the normal-cone arrangement",
                graph.key(b)
            )));
        }
        vertex_map[b] = Some(t);
        pairs[b] = Some(PairKey {
            prime: closure_key(arr, &meet),
            second: key.iter().copied().filter(|i| fb.key.contains(i)).collect(),
        });
    }
    Ok(NormalCone { frame, arrangement: t_arr, graph: t_graph, merge, preimages, vertex_map, pairs })
}

/// Tilde vertices grouped by source: `BTreeMap<tilde vertex, original vertices>`.
#[cfg(test)]
fn fibres(cone: &NormalCone) -> std::collections::BTreeMap<usize, Vec<usize>> {
    let mut out: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (b, t) in cone.vertex_map.iter().enumerate() {
        if let Some(t) = t {
            out.entry(*t).or_default().push(b);
        }
    }
    out
}
