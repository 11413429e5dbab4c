use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{AffineSubspace, Arrangement};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rat};

/// Sorted indices of every hyperplane containing a flat.
pub type FlatKey = Vec<usize>;

/// Renders a key the way it is written on the command line and in JSON maps.
pub fn format_key(key: &[usize]) -> String {
    let parts: Vec<String> = key.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Parses `"[0,2]"` (whitespace tolerated). The result is sorted and deduplicated.
pub fn parse_key(s: &str) -> Result<FlatKey> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("flat key must be bracketed: {s:?}")))?;
    let set: BTreeSet<usize> = inner
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Error::Parse(format!("bad index {p:?} in flat key"))))
        .collect::<Result<_>>()?;
    Ok(set.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub key: FlatKey,
    /// RREF of the augmented system `[normal | offset]`, one row per independent equation.
    pub equations: Matrix,
    pub pivots: Vec<usize>,
    pub codim: usize,
    pub subspace: AffineSubspace,
}

impl Flat {
    fn from_equations(arr: &Arrangement, rows: &Matrix) -> Option<Flat> {
        let n = arr.dim;
        let subspace = AffineSubspace::from_equations(rows, n)?;
        let r = rows.rref();
        let equations = r.echelon.block(0, 0, r.rank, n + 1);
        let key = (0..arr.len()).filter(|&i| subspace.lies_in(&arr.hyperplanes[i])).collect();
        Some(Flat { key, equations, pivots: r.pivots, codim: r.rank, subspace })
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }
}

/// Strata of an arrangement: vertices in key-lexicographic order, arrows
/// `α → β` whenever `X̄_β` is a codimension-one subflat of `X̄_α`.
#[derive(Clone, Debug)]
pub struct StratGraph {
    pub dim: usize,
    pub vertices: Vec<Flat>,
    pub arrows: Vec<(usize, usize)>,
    index: BTreeMap<FlatKey, usize>,
    down: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
}

/// Intersection poset by breadth-first closure from the ambient space.
pub fn build_poset(arr: &Arrangement) -> StratGraph {
    let n = arr.dim;
    let ambient = Flat::from_equations(arr, &Matrix::zeros(0, n + 1)).expect("ambient space is nonempty");
    let mut found: BTreeMap<FlatKey, Flat> = BTreeMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(ambient.key.clone());
    found.insert(ambient.key.clone(), ambient);
    while let Some(key) = queue.pop_front() {
        let eqs = found[&key].equations.clone();
        for (i, h) in arr.hyperplanes.iter().enumerate() {
            if key.contains(&i) {
                continue;
            }
            let rows = eqs.vstack(&Matrix::from_rows(vec![h.augmented()], n + 1).expect("row"));
            if let Some(f) = Flat::from_equations(arr, &rows) {
                if !found.contains_key(&f.key) {
                    queue.push_back(f.key.clone());
                    found.insert(f.key.clone(), f);
                }
            }
        }
    }
    StratGraph::from_flats(n, found.into_values().collect())
}

impl StratGraph {
    fn from_flats(dim: usize, vertices: Vec<Flat>) -> StratGraph {
        let index: BTreeMap<FlatKey, usize> = vertices.iter().enumerate().map(|(i, f)| (f.key.clone(), i)).collect();
        let mut arrows = Vec::new();
        for (a, fa) in vertices.iter().enumerate() {
            for (b, fb) in vertices.iter().enumerate() {
                if fb.codim == fa.codim + 1 && fa.key.iter().all(|i| fb.key.contains(i)) {
                    arrows.push((a, b));
                }
            }
        }
        let mut down = vec![Vec::new(); vertices.len()];
        let mut up = vec![Vec::new(); vertices.len()];
        for &(a, b) in &arrows {
            down[a].push(b);
            up[b].push(a);
        }
        StratGraph { dim, vertices, arrows, index, down, up }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn key(&self, v: usize) -> &FlatKey {
        &self.vertices[v].key
    }

    pub fn codim(&self, v: usize) -> usize {
        self.vertices[v].codim
    }

    pub fn flat(&self, v: usize) -> &Flat {
        &self.vertices[v]
    }

    pub fn vertex(&self, key: &[usize]) -> Result<usize> {
        self.index.get(key).copied().ok_or_else(|| Error::UnknownFlat(format_key(key)))
    }

    pub fn find(&self, key: &[usize]) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// The open stratum (empty key).
    pub fn open(&self) -> usize {
        0
    }

    /// Targets of arrows out of `v` (one codimension higher).
    pub fn down(&self, v: usize) -> &[usize] {
        &self.down[v]
    }

    /// Sources of arrows into `v` (one codimension lower).
    pub fn up(&self, v: usize) -> &[usize] {
        &self.up[v]
    }

    pub fn is_arrow(&self, a: usize, b: usize) -> bool {
        self.down[a].contains(&b)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.is_arrow(a, b) || self.is_arrow(b, a)
    }

    /// `X̄_b ⊆ X̄_a`, i.e. `a = b` or there is an oriented path `a → … → b`.
    pub fn contains(&self, a: usize, b: usize) -> bool {
        let kb = self.key(b);
        self.key(a).iter().all(|i| kb.contains(i))
    }

    /// Vertices whose flat lies in `X̄_α`, in key order.
    pub fn below(&self, alpha: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.contains(alpha, b)).collect()
    }

    /// Ordered pairs `(a, b)` joined by an arrow in either direction.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.arrows.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        out.sort();
        out
    }

    pub fn max_codim(&self) -> usize {
        self.vertices.iter().map(|f| f.codim).max().unwrap_or(0)
    }

    /// Same keys, codimensions and arrows.
    pub fn same_shape(&self, other: &StratGraph) -> bool {
        self.len() == other.len()
            && self.arrows == other.arrows
            && self.vertices.iter().zip(&other.vertices).all(|(a, b)| a.key == b.key && a.codim == b.codim)
    }

    pub fn keys(&self) -> Vec<FlatKey> {
        self.vertices.iter().map(|f| f.key.clone()).collect()
    }

    /// A point of the stratum's closure, for reporting.
    pub fn point(&self, v: usize) -> &[Rat] {
        &self.vertices[v].subspace.point
    }
}
