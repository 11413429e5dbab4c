//! The specialization functor `Sp_α` to the normal-cone arrangement.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::json;

use crate::arrangement::{build_poset, format_key, normal_cone_arrangement, Arrangement, FlatKey, StratGraph};
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::quiver::Rep;
use crate::weights::Weights;

#[derive(Clone, Debug)]
pub struct SpResult {
    pub t_arrangement: Arrangement,
    pub rep: Rep,
    /// Per tilde vertex: source vertices of the original graph with their block offsets.
    pub block_map: Vec<Vec<(usize, usize)>>,
    /// Original vertex → tilde vertex, for strata whose closure meets the flat(s).
    pub vertex_map: Vec<Option<usize>>,
    /// Tilde hyperplane → original hyperplanes merged into it.
    pub origins: Vec<Vec<usize>>,
    /// Original hyperplanes that were dropped.
    pub dropped: Vec<usize>,
}

impl SpResult {
    pub fn graph(&self) -> &StratGraph {
        self.rep.graph()
    }

    /// Weights transported to the tilde hyperplanes.
    pub fn weights(&self, w: &Weights) -> Weights {
        Weights::new(self.origins.iter().map(|o| o.iter().map(|&i| w.get(i)).sum()).collect())
    }

    /// Key of each tilde vertex rewritten in original hyperplane indices.
    pub fn original_keys(&self) -> Vec<FlatKey> {
        let g = self.graph();
        (0..g.len())
            .map(|t| {
                let mut k: Vec<usize> = g.key(t).iter().flat_map(|&h| self.origins[h].iter().copied()).collect();
                k.sort();
                k
            })
            .collect()
    }

    pub fn to_json_value(&self, source: &StratGraph) -> serde_json::Value {
        let g = self.graph();
        let blocks: BTreeMap<String, Vec<serde_json::Value>> = (0..g.len())
            .map(|t| {
                let entries = self.block_map[t]
                    .iter()
                    .map(|&(b, off)| json!({"source": source.key(b), "offset": off}))
                    .collect();
                (format_key(g.key(t)), entries)
            })
            .collect();
        json!({
            "arrangement": serde_json::to_value(&self.t_arrangement).expect("serializes"),
            "rep": self.rep.to_json_value(),
            "block_map": blocks,
            "merged": self.origins,
            "dropped": self.dropped,
        })
    }
}

fn check_graph(rep: &Rep, arr: &Arrangement) -> Result<Arc<StratGraph>> {
    let g = rep.graph_arc();
    if !g.same_shape(&build_poset(arr)) {
        return Err(Error::GraphMismatch);
    }
    Ok(g)
}

/// `V_τ = ⊕ V_β` over the strata β sent to τ (key order); each tilde arrow
/// carries the original maps between the summands.
pub fn specialize_rep(rep: &Rep, arr: &Arrangement, alpha: usize) -> Result<SpResult> {
    let g = check_graph(rep, arr)?;
    let cone = normal_cone_arrangement(arr, &g, alpha)?;
    let tg = Arc::new(cone.graph.clone());
    let mut block_map = Vec::with_capacity(tg.len());
    let mut dims = Vec::with_capacity(tg.len());
    for t in 0..tg.len() {
        let mut off = 0;
        let mut blocks = Vec::new();
        for b in cone.preimage_vertices(t) {
            blocks.push((b, off));
            off += rep.dim(b);
        }
        block_map.push(blocks);
        dims.push(off);
    }
    let mut out = Rep::with_dims(tg.clone(), dims);
    for (s, t) in tg.adjacent_pairs() {
        let mut m = Matrix::zeros(out.dim(s), out.dim(t));
        for &(c, oc) in &block_map[s] {
            for &(b, ob) in &block_map[t] {
                if let Some(a) = rep.map_ref(c, b) {
                    m.set_block(oc, ob, a);
                }
            }
        }
        out.set_map(s, t, m)?;
    }
    Ok(SpResult {
        t_arrangement: cone.arrangement.clone(),
        rep: out,
        block_map,
        vertex_map: cone.vertex_map.clone(),
        origins: cone.preimages.clone(),
        dropped: cone.dropped(),
    })
}

/// Applies `Sp` successively along pairwise nested flats (given as vertices of
/// the original graph), transporting each flat into the current arrangement.
pub fn specialize_along_flag(rep: &Rep, arr: &Arrangement, chain: &[usize]) -> Result<SpResult> {
    let g = check_graph(rep, arr)?;
    for (i, &a) in chain.iter().enumerate() {
        for &b in &chain[..i] {
            if !g.contains(a, b) && !g.contains(b, a) {
                return Err(Error::Precondition(format!(
                    "flats {} and {} are not nested",
                    format_key(g.key(a)),
                    format_key(g.key(b))
                )));
            }
        }
    }
    let mut acc = SpResult {
        t_arrangement: arr.clone(),
        rep: rep.clone(),
        block_map: (0..g.len()).map(|b| vec![(b, 0)]).collect(),
        vertex_map: (0..g.len()).map(Some).collect(),
        origins: (0..arr.len()).map(|i| vec![i]).collect(),
        dropped: Vec::new(),
    };
    for &alpha in chain {
        let current = acc.vertex_map[alpha].ok_or_else(|| Error::Precondition("flat lost along the chain".into()))?;
        let step = specialize_rep(&acc.rep, &acc.t_arrangement, current)?;
        let block_map = step
            .block_map
            .iter()
            .map(|blocks| {
                blocks
                    .iter()
                    .flat_map(|&(mid, off)| acc.block_map[mid].iter().map(move |&(b, o)| (b, off + o)))
                    .collect()
            })
            .collect();
        let vertex_map = acc.vertex_map.iter().map(|m| m.and_then(|mid| step.vertex_map[mid])).collect();
        let origins = step
            .origins
            .iter()
            .map(|o| {
                let mut v: Vec<usize> = o.iter().flat_map(|&h| acc.origins[h].iter().copied()).collect();
                v.sort();
                v
            })
            .collect();
        let mut dropped = acc.dropped.clone();
        dropped.extend(step.dropped.iter().flat_map(|&h| acc.origins[h].iter().copied()));
        dropped.sort();
        acc = SpResult { t_arrangement: step.t_arrangement, rep: step.rep, block_map, vertex_map, origins, dropped };
    }
    Ok(acc)
}

/// Transports `rep` onto `target` through a vertex bijection `map[v] = target vertex`.
pub fn relabel(rep: &Rep, target: Arc<StratGraph>, map: &[usize]) -> Result<Rep> {
    let g = rep.graph();
    let mut dims = vec![0; target.len()];
    for v in 0..g.len() {
        dims[map[v]] = rep.dim(v);
    }
    let mut out = Rep::with_dims(target, dims);
    for (&(a, b), m) in rep.maps() {
        out.set_map(map[a], map[b], m.clone())?;
    }
    Ok(out)
}

/// Vertex bijection between two specializations matching original-index keys.
pub fn match_by_original_keys(from: &SpResult, to: &SpResult) -> Result<Vec<usize>> {
    let target: BTreeMap<FlatKey, usize> = to.original_keys().into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    let keys = from.original_keys();
    if keys.len() != target.len() {
        return Err(Error::GraphMismatch);
    }
    keys.iter().map(|k| target.get(k).copied().ok_or(Error::GraphMismatch)).collect()
}
