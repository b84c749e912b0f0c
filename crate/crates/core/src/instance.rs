//! Instance and solution data model.
//!
//! A [`DpvcInstance`] is a simple undirected graph where each edge `{u, v}`
//! carries two positive demands: `w_uv` (what `u` must reach to cover the
//! edge on its own) and `w_vu` (same for `v`). An instance is a PVC instance
//! when both demands coincide on every edge.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// An undirected edge with one demand per endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    /// Demand `u` must meet to cover the edge.
    pub w_uv: u64,
    /// Demand `v` must meet to cover the edge.
    pub w_vu: u64,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, w_uv: u64, w_vu: u64) -> Self {
        Edge { u, v, w_uv, w_vu }
    }

    pub fn symmetric(u: VertexId, v: VertexId, w: u64) -> Self {
        Edge::new(u, v, w, w)
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    /// Demand on `x`'s side of the edge.
    pub fn demand_from(&self, x: VertexId) -> u64 {
        if self.u == x {
            self.w_uv
        } else {
            self.w_vu
        }
    }

    /// 0 if `x` is the `u` endpoint, 1 otherwise.
    pub fn side_of(&self, x: VertexId) -> usize {
        usize::from(self.u != x)
    }

    pub fn is_covered(&self, p_u: u64, p_v: u64) -> bool {
        p_u >= self.w_uv || p_v >= self.w_vu
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("demand must be at least 1 on edge ({0}, {1})")]
    ZeroDemand(VertexId, VertexId),
}

/// A validated DPVC instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpvcInstance {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<(VertexId, VertexId), usize>,
    symmetric: bool,
}

impl DpvcInstance {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, InstanceError> {
        let mut adjacency = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(InstanceError::VertexOutOfRange { vertex: x, n });
                }
            }
            if e.u == e.v {
                return Err(InstanceError::SelfLoop(e.u));
            }
            if e.w_uv == 0 || e.w_vu == 0 {
                return Err(InstanceError::ZeroDemand(e.u, e.v));
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            if index.insert(key, i).is_some() {
                return Err(InstanceError::DuplicateEdge(key.0, key.1));
            }
            adjacency[e.u].push(i);
            adjacency[e.v].push(i);
        }
        let symmetric = edges.iter().all(|e| e.w_uv == e.w_vu);
        Ok(DpvcInstance {
            n,
            edges,
            adjacency,
            index,
            symmetric,
        })
    }

    /// Builds a PVC instance from `(u, v, w)` triples.
    pub fn pvc(n: usize, edges: &[(VertexId, VertexId, u64)]) -> Result<Self, InstanceError> {
        Self::new(
            n,
            edges
                .iter()
                .map(|&(u, v, w)| Edge::symmetric(u, v, w))
                .collect(),
        )
    }

    /// Builds a DPVC instance from `(u, v, w_uv, w_vu)` tuples.
    pub fn dpvc(
        n: usize,
        edges: &[(VertexId, VertexId, u64, u64)],
    ) -> Result<Self, InstanceError> {
        Self::new(
            n,
            edges
                .iter()
                .map(|&(u, v, a, b)| Edge::new(u, v, a, b))
                .collect(),
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    /// Indices of the edges incident to `v`.
    pub fn incident(&self, v: VertexId) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v].iter().map(move |&i| self.edges[i].other(v))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `M`: the largest demand on any side of any edge.
    pub fn max_demand(&self) -> u64 {
        self.edges
            .iter()
            .map(|e| e.w_uv.max(e.w_vu))
            .max()
            .unwrap_or(0)
    }

    /// True iff `w_uv = w_vu` on every edge (a PVC instance).
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// `M(u)`: largest demand on `u`'s side among its edges.
    pub fn max_demand_from(&self, u: VertexId) -> u64 {
        self.adjacency[u]
            .iter()
            .map(|&i| self.edges[i].demand_from(u))
            .max()
            .unwrap_or(0)
    }

    /// `P(u)`: sum of the neighbours' demands on edges toward `u`.
    pub fn demand_toward(&self, u: VertexId) -> u64 {
        self.adjacency[u]
            .iter()
            .map(|&i| {
                let e = &self.edges[i];
                e.demand_from(e.other(u))
            })
            .sum()
    }

    /// Vertices at distance exactly two from `u`.
    pub fn second_neighborhood(&self, u: VertexId) -> BTreeSet<VertexId> {
        let first: BTreeSet<_> = self.neighbors(u).collect();
        let mut out = BTreeSet::new();
        for &z in &first {
            for y in self.neighbors(z) {
                if y != u && !first.contains(&y) {
                    out.insert(y);
                }
            }
        }
        out
    }

    /// Distinct demand values appearing on either side of any edge, ascending.
    pub fn distinct_demands(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self.edges.iter().flat_map(|e| [e.w_uv, e.w_vu]).collect();
        set.into_iter().collect()
    }

    /// Returns a copy of the instance with every demand multiplied by `c`.
    pub fn scaled(&self, c: u64) -> DpvcInstance {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.u, e.v, e.w_uv * c, e.w_vu * c))
            .collect();
        DpvcInstance::new(self.n, edges).expect("scaling preserves validity")
    }

    /// Symmetric instance demanding `min(w_uv, w_vu)` on both sides.
    pub fn symmetrized_min(&self) -> DpvcInstance {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::symmetric(e.u, e.v, e.w_uv.min(e.w_vu)))
            .collect();
        DpvcInstance::new(self.n, edges).expect("minimum of positive demands is positive")
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabeled(&self, perm: &[VertexId]) -> DpvcInstance {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.u], perm[e.v], e.w_uv, e.w_vu))
            .collect();
        DpvcInstance::new(self.n, edges).expect("relabeling by a permutation preserves validity")
    }

    /// The subgraph induced by `keep`, renumbered in the order given.
    pub fn induced(&self, keep: &[VertexId]) -> DpvcInstance {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| pos[e.u] != usize::MAX && pos[e.v] != usize::MAX)
            .map(|e| Edge::new(pos[e.u], pos[e.v], e.w_uv, e.w_vu))
            .collect();
        DpvcInstance::new(keep.len(), edges).expect("induced subgraph of a valid instance")
    }

    /// Returns the first uncovered edge under `a`, if any.
    pub fn first_uncovered(&self, a: &PowerAssignment) -> Option<&Edge> {
        self.edges.iter().find(|e| !e.is_covered(a.get(e.u), a.get(e.v)))
    }

    /// Feasibility: every edge has an endpoint meeting its own demand.
    pub fn is_feasible(&self, a: &PowerAssignment) -> bool {
        self.first_uncovered(a).is_none()
    }

    /// Power levels worth considering for `v`: zero or one of its own demands.
    pub fn candidate_levels(&self, v: VertexId) -> Vec<u64> {
        let mut levels: BTreeSet<u64> = self.adjacency[v]
            .iter()
            .map(|&i| self.edges[i].demand_from(v))
            .collect();
        levels.insert(0);
        levels.into_iter().collect()
    }

    /// Lowers every power to the largest demand it must actually serve,
    /// one vertex at a time. Feasibility is preserved and value never grows.
    pub fn trim(&self, a: &PowerAssignment) -> PowerAssignment {
        let mut p = a.clone();
        p.resize(self.n);
        for v in 0..self.n {
            let needed = self.adjacency[v]
                .iter()
                .map(|&i| &self.edges[i])
                .filter(|e| {
                    let z = e.other(v);
                    p.get(z) < e.demand_from(z)
                })
                .map(|e| e.demand_from(v))
                .max()
                .unwrap_or(0);
            if needed < p.get(v) {
                p.set(v, needed);
            }
        }
        p
    }
}

impl fmt::Display for DpvcInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::write_instance(self))
    }
}

/// Power values for every vertex; missing entries read as zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PowerAssignment {
    powers: Vec<u64>,
}

impl PowerAssignment {
    pub fn zeros(n: usize) -> Self {
        PowerAssignment { powers: vec![0; n] }
    }

    pub fn from_vec(powers: Vec<u64>) -> Self {
        PowerAssignment { powers }
    }

    pub fn get(&self, v: VertexId) -> u64 {
        self.powers.get(v).copied().unwrap_or(0)
    }

    pub fn set(&mut self, v: VertexId, p: u64) {
        if v >= self.powers.len() {
            self.powers.resize(v + 1, 0);
        }
        self.powers[v] = p;
    }

    pub fn add(&mut self, v: VertexId, p: u64) {
        let cur = self.get(v);
        self.set(v, cur + p);
    }

    pub fn resize(&mut self, n: usize) {
        self.powers.resize(n, 0);
    }

    /// Total power `Σ p_v`.
    pub fn value(&self) -> u64 {
        self.powers.iter().sum()
    }

    /// Number of vertices with positive power.
    pub fn support(&self) -> usize {
        self.powers.iter().filter(|&&p| p > 0).count()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.powers
    }

    /// `(vertex, power)` for every vertex with positive power.
    pub fn positive(&self) -> impl Iterator<Item = (VertexId, u64)> + '_ {
        self.powers
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0)
            .map(|(v, &p)| (v, p))
    }
}
