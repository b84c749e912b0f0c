//! Instance generators: random instances and the reduction gadgets.
//!
//! Every constructor numbers its vertices deterministically so tests can
//! address gadget vertices by formula; the layouts are documented on each
//! function.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::{DpvcInstance, Edge, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("cannot place {m} edges on {n} vertices")]
    TooManyEdges { n: usize, m: usize },
    #[error("demand bound must be at least 1")]
    ZeroDemandBound,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("clique reduction needs K >= 2, got {0}")]
    WeightTooSmall(u64),
}

/// An unweighted simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcInstance {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl VcInstance {
    pub fn new(n: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self, GenError> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v || !seen.insert((u.min(v), u.max(v))) {
                return Err(GenError::InvalidGraph(format!("bad edge ({u}, {v})")));
            }
        }
        Ok(VcInstance { n, edges })
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges
            .iter()
            .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// Minimum vertex cover size by subset enumeration.
    pub fn min_vertex_cover(&self) -> usize {
        crate::oracle::min_vertex_cover_by_subsets(self.n, &self.edges)
    }
}

/// A k-Multicolored Independent Set instance: `k` parts of `n` vertices
/// each, numbered `1..=n` inside a part. Parts are implicitly cliques; only
/// cross-part edges are stored, as `((part, index), (part, index))` with
/// parts in `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McisInstance {
    pub k: usize,
    pub n: usize,
    pub edges: Vec<((usize, usize), (usize, usize))>,
}

impl McisInstance {
    pub fn new(
        k: usize,
        n: usize,
        edges: Vec<((usize, usize), (usize, usize))>,
    ) -> Result<Self, GenError> {
        let mut seen = std::collections::HashSet::new();
        for &((c, i), (d, j)) in &edges {
            if c >= k || d >= k || c == d || i == 0 || j == 0 || i > n || j > n {
                return Err(GenError::InvalidGraph(format!(
                    "bad cross edge ({c}:{i}, {d}:{j})"
                )));
            }
            let key = if (c, i) < (d, j) {
                ((c, i), (d, j))
            } else {
                ((d, j), (c, i))
            };
            if !seen.insert(key) {
                return Err(GenError::InvalidGraph("duplicate cross edge".into()));
            }
        }
        Ok(McisInstance { k, n, edges })
    }

    /// True iff one vertex per part can be chosen with no edge among them.
    pub fn has_multicolored_independent_set(&self) -> bool {
        if self.n == 0 {
            return self.k == 0;
        }
        let mut choice = vec![1usize; self.k];
        loop {
            let independent = self
                .edges
                .iter()
                .all(|&((c, i), (d, j))| choice[c] != i || choice[d] != j);
            if independent {
                return true;
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == self.k {
                    return false;
                }
                choice[pos] += 1;
                if choice[pos] <= self.n {
                    break;
                }
                choice[pos] = 1;
                pos += 1;
            }
        }
    }
}

/// Complete-graph reduction from Vertex Cover.
///
/// Layout: vertices `0..|V|` are the graph's vertices, vertex `|V|` is the
/// apex. Graph edges get demand `big`, non-edges demand 1, apex edges 1.
/// With `big = 2` the optimum is `|V| + VC(g)`.
pub fn gen_clique_reduction(g: &VcInstance, big: u64) -> Result<DpvcInstance, GenError> {
    if big < 2 {
        return Err(GenError::WeightTooSmall(big));
    }
    let n = g.n;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let w = if g.has_edge(u, v) { big } else { 1 };
            edges.push(Edge::symmetric(u, v, w));
        }
    }
    for u in 0..n {
        edges.push(Edge::symmetric(u, n, 1));
    }
    Ok(DpvcInstance::new(n + 1, edges).expect("complete graph construction is valid"))
}

/// Optimum of [`gen_clique_reduction`] for a graph with `n` vertices and
/// minimum vertex cover `vc`: cover vertices at `big`, the rest at 1.
pub fn clique_reduction_value(n: usize, vc: usize, big: u64) -> u64 {
    big * vc as u64 + (n - vc) as u64
}

/// The treewidth-hardness construction and its cost threshold.
#[derive(Clone, Debug)]
pub struct TwHardness {
    pub instance: DpvcInstance,
    /// `k(n² + n) + 3mn`; `k(n² + n) + 3m(n + 1) + kn` when repaired.
    pub target: u64,
    pub layout: TwLayout,
}

/// Vertex numbering of [`gen_tw_hardness`].
///
/// Choice gadget `c` occupies `c·(2n+2) ..`: first `u_c`, then `u'_c`, then
/// for `i = 1..=n` the matching edge `(a_{c,i}, b_{c,i})`. Checker `e` (in the
/// order of the cross edges) follows as four consecutive K4 vertices whose
/// connectors go to `u_c, u'_c, u_d, u'_d`. Guards of the repaired variant
/// come last as two vertices per part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwLayout {
    pub k: usize,
    pub n: usize,
    pub checkers: usize,
    pub repaired: bool,
}

impl TwLayout {
    pub fn choice_base(&self, c: usize) -> VertexId {
        c * (2 * self.n + 2)
    }
    pub fn u(&self, c: usize) -> VertexId {
        self.choice_base(c)
    }
    pub fn u_prime(&self, c: usize) -> VertexId {
        self.choice_base(c) + 1
    }
    /// Endpoint of matching edge `i` attached to `u_c`.
    pub fn a(&self, c: usize, i: usize) -> VertexId {
        self.choice_base(c) + 2 * i
    }
    /// Endpoint of matching edge `i` attached to `u'_c`.
    pub fn b(&self, c: usize, i: usize) -> VertexId {
        self.choice_base(c) + 2 * i + 1
    }
    pub fn checker(&self, e: usize, corner: usize) -> VertexId {
        self.k * (2 * self.n + 2) + 4 * e + corner
    }
    pub fn guard(&self, c: usize, which: usize) -> VertexId {
        self.k * (2 * self.n + 2) + 4 * self.checkers + 2 * c + which
    }
    pub fn num_vertices(&self) -> usize {
        self.k * (2 * self.n + 2) + 4 * self.checkers + if self.repaired { 2 * self.k } else { 0 }
    }
}

/// Builds the choice/checker construction from a multicolored independent
/// set instance. Matching edges have demand `n`; matching edge `i` attaches
/// to `u_c` with demand `i` and to `u'_c` with demand `n + 1 − i`; the checker
/// for a cross edge between index `i` of part `c` and index `j` of part `d`
/// is a K4 of demand `n` with connectors `i+1, n−i+1, j+1, n−j+1`.
pub fn gen_tw_hardness(m: &McisInstance) -> TwHardness {
    build_tw_hardness(m, false)
}

/// [`gen_tw_hardness`] with two changes that make the threshold exact.
///
/// A connector of demand `i + 1 = n + 1` cannot be covered by a checker
/// vertex at power `n`, so checker cliques get demand `n + 1`. And the
/// encoding `p_{u_c} = 0, p_{u'_c} = n` covers every `u'` connector, so no
/// checker rejects it; one guard triangle `(u_c, g, g')` per part (`g–g'`
/// demand `n`, both connectors demand 1) costs exactly `n` iff
/// `p_{u_c} ≥ 1` and at least `n + 1` otherwise.
pub fn gen_tw_hardness_repaired(m: &McisInstance) -> TwHardness {
    build_tw_hardness(m, true)
}

fn build_tw_hardness(m: &McisInstance, repaired: bool) -> TwHardness {
    let (k, n) = (m.k, m.n);
    let layout = TwLayout {
        k,
        n,
        checkers: m.edges.len(),
        repaired,
    };
    let nw = n as u64;
    let clique = if repaired { nw + 1 } else { nw };
    let mut edges = Vec::new();
    for c in 0..k {
        for i in 1..=n {
            let iw = i as u64;
            edges.push(Edge::symmetric(layout.a(c, i), layout.b(c, i), nw));
            edges.push(Edge::symmetric(layout.u(c), layout.a(c, i), iw));
            edges.push(Edge::symmetric(layout.u_prime(c), layout.b(c, i), nw + 1 - iw));
        }
    }
    for (e, &((c, i), (d, j))) in m.edges.iter().enumerate() {
        for a in 0..4 {
            for b in (a + 1)..4 {
                edges.push(Edge::symmetric(layout.checker(e, a), layout.checker(e, b), clique));
            }
        }
        let (iw, jw) = (i as u64, j as u64);
        edges.push(Edge::symmetric(layout.u(c), layout.checker(e, 0), iw + 1));
        edges.push(Edge::symmetric(layout.u_prime(c), layout.checker(e, 1), nw - iw + 1));
        edges.push(Edge::symmetric(layout.u(d), layout.checker(e, 2), jw + 1));
        edges.push(Edge::symmetric(layout.u_prime(d), layout.checker(e, 3), nw - jw + 1));
    }
    if repaired {
        for c in 0..k {
            let (g, h) = (layout.guard(c, 0), layout.guard(c, 1));
            edges.push(Edge::symmetric(g, h, nw));
            edges.push(Edge::symmetric(layout.u(c), g, 1));
            edges.push(Edge::symmetric(layout.u(c), h, 1));
        }
    }
    let instance =
        DpvcInstance::new(layout.num_vertices(), edges).expect("gadget construction is valid");
    let kw = k as u64;
    let mut target = kw * (nw * nw + nw) + 3 * m.edges.len() as u64 * clique;
    if repaired {
        target += kw * nw;
    }
    TwHardness {
        instance,
        target,
        layout,
    }
}

/// Gadget where the LP relaxation puts 0 on every original vertex.
///
/// Layout: vertices `0..|V|` are the graph's; edge number `e = (u, v)` adds
/// `|V| + 2e` (attached to `u`) and `|V| + 2e + 1` (attached to `v`), joined
/// by a demand-2 edge; both attachments have demand 1.
pub fn gen_zero_vertex(g: &VcInstance) -> DpvcInstance {
    let n = g.n;
    let mut edges = Vec::new();
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        let (x, y) = (n + 2 * e, n + 2 * e + 1);
        edges.push(Edge::symmetric(x, y, 2));
        edges.push(Edge::symmetric(u, x, 1));
        edges.push(Edge::symmetric(v, y, 1));
    }
    DpvcInstance::new(n + 2 * g.edges.len(), edges).expect("zero-vertex gadget is valid")
}

/// The five-vertex integrality-gap example: `(u1, v1)` and `(u2, v2)` with
/// demand 2 (vertices 0..4) and an apex (vertex 4) joined to all four with
/// demand 1. Integral optimum 5, LP optimum 4 with the apex at 0.
pub fn gen_lp_gap() -> DpvcInstance {
    DpvcInstance::pvc(
        5,
        &[(0, 1, 2), (2, 3, 2), (4, 0, 1), (4, 1, 1), (4, 2, 1), (4, 3, 1)],
    )
    .expect("fixed instance is valid")
}

fn random_pairs(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>, GenError> {
    let total = n * n.saturating_sub(1) / 2;
    if m > total {
        return Err(GenError::TooManyEdges { n, m });
    }
    let mut idx: Vec<usize> = sample(rng, total, m).into_vec();
    idx.sort_unstable();
    Ok(idx.into_iter().map(|i| pair_from_index(n, i)).collect())
}

/// Inverse of the row-major enumeration of pairs `u < v`.
fn pair_from_index(n: usize, mut i: usize) -> (usize, usize) {
    for u in 0..n {
        let row = n - u - 1;
        if i < row {
            return (u, u + 1 + i);
        }
        i -= row;
    }
    unreachable!("pair index out of range")
}

/// Uniform simple graph with `m` edges, demands uniform in `1..=w_max`
/// (independently per side when `directed`). Deterministic per seed.
pub fn gen_random(
    n: usize,
    m: usize,
    w_max: u64,
    directed: bool,
    seed: u64,
) -> Result<DpvcInstance, GenError> {
    if w_max == 0 {
        return Err(GenError::ZeroDemandBound);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = random_pairs(n, m, &mut rng)?;
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let a = rng.gen_range(1..=w_max);
            let b = if directed { rng.gen_range(1..=w_max) } else { a };
            Edge::new(u, v, a, b)
        })
        .collect();
    Ok(DpvcInstance::new(n, edges).expect("random construction is valid"))
}

/// Uniform simple unweighted graph with `m` edges.
pub fn gen_random_graph(n: usize, m: usize, seed: u64) -> Result<VcInstance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = random_pairs(n, m, &mut rng)?;
    VcInstance::new(n, pairs)
}

/// Every labeled simple graph on `n` vertices (`2^(n(n-1)/2)` of them).
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = VcInstance> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let count = 1u64 << pairs.len();
    (0..count).map(move |mask| VcInstance {
        n,
        edges: pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect(),
    })
}

/// Multicolored independent set instance with `m` cross edges drawn
/// uniformly among all `C(k,2)·n²` possible ones.
pub fn gen_random_mcis(k: usize, n: usize, m: usize, seed: u64) -> Result<McisInstance, GenError> {
    let all: Vec<((usize, usize), (usize, usize))> = (0..k)
        .flat_map(|c| ((c + 1)..k).map(move |d| (c, d)))
        .flat_map(|(c, d)| (1..=n).flat_map(move |i| (1..=n).map(move |j| ((c, i), (d, j)))))
        .collect();
    if m > all.len() {
        return Err(GenError::TooManyEdges { n: k * n, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, all.len(), m).into_vec();
    idx.sort_unstable();
    McisInstance::new(k, n, idx.into_iter().map(|i| all[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_mcis() {
        let a = gen_random_mcis(3, 2, 5, 7).unwrap();
        assert_eq!(a, gen_random_mcis(3, 2, 5, 7).unwrap());
        assert_eq!(a.edges.len(), 5);
        assert_eq!(gen_random_mcis(2, 2, 4, 0).unwrap().edges.len(), 4);
        assert!(gen_random_mcis(2, 2, 5, 0).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let a = gen_random(9, 14, 5, true, 42).unwrap();
        let b = gen_random(9, 14, 5, true, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_edges(), 14);
        assert_ne!(a, gen_random(9, 14, 5, true, 43).unwrap());
        let text = crate::format::write_instance(&a);
        assert_eq!(crate::format::parse_instance(&text).unwrap(), a);
    }

    #[test]
    fn random_edgeless_and_overfull() {
        assert_eq!(gen_random(5, 0, 3, false, 1).unwrap().num_edges(), 0);
        assert_eq!(
            gen_random(4, 7, 3, false, 1),
            Err(GenError::TooManyEdges { n: 4, m: 7 })
        );
        assert_eq!(gen_random(4, 6, 3, false, 1).unwrap().num_edges(), 6);
    }

    #[test]
    fn pair_index_enumeration() {
        let n = 5;
        let all: Vec<_> = (0..10).map(|i| pair_from_index(n, i)).collect();
        let expect: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        assert_eq!(all, expect);
    }

    #[test]
    fn clique_reduction_shape() {
        let k2 = VcInstance::new(2, vec![(0, 1)]).unwrap();
        let inst = gen_clique_reduction(&k2, 2).unwrap();
        assert_eq!(inst.num_vertices(), 3);
        let mut ws: Vec<u64> = inst.edges().iter().map(|e| e.w_uv).collect();
        ws.sort();
        assert_eq!(ws, vec![1, 1, 2]);
        assert!(gen_clique_reduction(&k2, 1).is_err());
    }

    #[test]
    fn tw_hardness_single_gadget() {
        let m = McisInstance::new(1, 2, vec![]).unwrap();
        let h = gen_tw_hardness(&m);
        assert_eq!(h.instance.num_vertices(), 6);
        assert_eq!(h.instance.num_edges(), 6);
        assert_eq!(h.target, 6);
        // connector demands on u are distinct and pair up to n + 1
        let l = h.layout;
        for i in 1..=2 {
            let eu = h.instance.edge_between(l.u(0), l.a(0, i)).unwrap();
            let ev = h.instance.edge_between(l.u_prime(0), l.b(0, i)).unwrap();
            assert_eq!(h.instance.edge(eu).w_uv + h.instance.edge(ev).w_uv, 3);
        }
    }

    #[test]
    fn tw_hardness_target_formula() {
        let m = McisInstance::new(2, 2, vec![((0, 1), (1, 1))]).unwrap();
        let h = gen_tw_hardness(&m);
        assert_eq!(h.target, 18);
        assert_eq!(h.instance.num_vertices(), 2 * 6 + 4);
        let g = gen_tw_hardness_repaired(&m);
        assert_eq!(g.target, 12 + 9 + 4);
        assert_eq!(g.instance.num_vertices(), 2 * 6 + 4 + 4);
    }

    #[test]
    fn mcis_existence() {
        let m = McisInstance::new(2, 2, vec![((0, 1), (1, 1))]).unwrap();
        assert!(m.has_multicolored_independent_set());
        let full = McisInstance::new(2, 1, vec![((0, 1), (1, 1))]).unwrap();
        assert!(!full.has_multicolored_independent_set());
        assert!(McisInstance::new(2, 1, vec![((0, 1), (0, 1))]).is_err());
    }

    #[test]
    fn zero_vertex_layout() {
        let g = VcInstance::new(2, vec![(0, 1)]).unwrap();
        let inst = gen_zero_vertex(&g);
        assert_eq!(inst.num_vertices(), 4);
        assert_eq!(inst.edge(inst.edge_between(2, 3).unwrap()).w_uv, 2);
        assert_eq!(inst.edge(inst.edge_between(0, 2).unwrap()).w_uv, 1);
        assert_eq!(inst.edge(inst.edge_between(1, 3).unwrap()).w_uv, 1);
    }

    #[test]
    fn lp_gap_shape() {
        let g = gen_lp_gap();
        assert_eq!((g.num_vertices(), g.num_edges()), (5, 6));
        assert!(g.is_symmetric());
    }

    #[test]
    fn labeled_graph_count() {
        assert_eq!(all_labeled_graphs(4).count(), 64);
        assert_eq!(all_labeled_graphs(1).count(), 1);
    }
}
