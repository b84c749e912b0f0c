//! Tree decompositions: min-fill construction, validation, nice form.

use std::collections::{BTreeSet, VecDeque};

use crate::instance::{DpvcInstance, VertexId};

use super::TwError;

/// A tree decomposition with arbitrary bags, as read from a file or built
/// by elimination. Bags are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub n: usize,
    pub bags: Vec<Vec<VertexId>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks that the bags form a tree decomposition of `inst`.
    pub fn validate(&self, inst: &DpvcInstance) -> Result<(), TwError> {
        let bad = |m: String| Err(TwError::InvalidDecomposition(m));
        if self.n != inst.num_vertices() {
            return bad(format!("decomposition has {} vertices, instance {}", self.n, inst.num_vertices()));
        }
        if self.bags.is_empty() {
            return if self.n == 0 { Ok(()) } else { bad("no bags".into()) };
        }
        for &(a, b) in &self.edges {
            if a >= self.bags.len() || b >= self.bags.len() || a == b {
                return bad(format!("bad tree edge ({a}, {b})"));
            }
        }
        for bag in &self.bags {
            if let Some(&v) = bag.iter().find(|&&v| v >= self.n) {
                return bad(format!("vertex {v} out of range"));
            }
        }
        if self.edges.len() + 1 != self.bags.len() || !connected(&self.tree_adjacency(), |_| true) {
            return bad("bag graph is not a tree".into());
        }
        check_cover(inst, &self.bags)?;
        let adj = self.tree_adjacency();
        for v in 0..self.n {
            if !connected(&adj, |i| self.bags[i].binary_search(&v).is_ok()) {
                return bad(format!("bags containing vertex {v} are not connected"));
            }
        }
        Ok(())
    }

    /// Nice form rooted at bag 0, ending in an empty root bag.
    pub fn to_nice(&self) -> NiceTreeDecomposition {
        let mut nice = NiceTreeDecomposition {
            n: self.n,
            nodes: Vec::new(),
            root: None,
        };
        if self.bags.is_empty() {
            return nice;
        }
        let adj = self.tree_adjacency();
        let mut children = vec![Vec::new(); self.bags.len()];
        let mut seen = vec![false; self.bags.len()];
        let mut order = vec![0];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let b = order[i];
            for &c in &adj[b] {
                if !seen[c] {
                    seen[c] = true;
                    children[b].push(c);
                    order.push(c);
                }
            }
            i += 1;
        }
        // children before parents
        let mut built = vec![usize::MAX; self.bags.len()];
        for &b in order.iter().rev() {
            let bag = &self.bags[b];
            let mut tops: Vec<usize> = children[b]
                .iter()
                .map(|&c| nice.morph(built[c], bag))
                .collect();
            if tops.is_empty() {
                tops.push(nice.leaf_chain(bag));
            }
            let mut top = tops[0];
            for &other in &tops[1..] {
                top = nice.push(NodeKind::Join, bag.clone(), vec![top, other]);
            }
            built[b] = top;
        }
        let root = nice.morph(built[0], &[]);
        nice.root = Some(root);
        nice
    }
}

fn check_cover(inst: &DpvcInstance, bags: &[Vec<VertexId>]) -> Result<(), TwError> {
    let mut covered = vec![false; inst.num_vertices()];
    for bag in bags {
        for &v in bag {
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(TwError::InvalidDecomposition(format!("vertex {v} is in no bag")));
    }
    for e in inst.edges() {
        let together = bags
            .iter()
            .any(|b| b.binary_search(&e.u).is_ok() && b.binary_search(&e.v).is_ok());
        if !together {
            return Err(TwError::InvalidDecomposition(format!(
                "edge ({}, {}) is in no bag",
                e.u, e.v
            )));
        }
    }
    Ok(())
}

/// Whether the nodes selected by `keep` induce a connected subgraph.
fn connected(adj: &[Vec<usize>], keep: impl Fn(usize) -> bool) -> bool {
    let nodes: Vec<usize> = (0..adj.len()).filter(|&i| keep(i)).collect();
    let Some(&start) = nodes.first() else {
        return true;
    };
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] && keep(y) {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count == nodes.len()
}

/// Min-fill elimination ordering turned into a tree decomposition. Ties go
/// to the lower degree, then the lower index.
pub fn min_fill_tree_decomposition(inst: &DpvcInstance) -> TreeDecomposition {
    let n = inst.num_vertices();
    let mut adj: Vec<BTreeSet<VertexId>> = (0..n).map(|v| inst.neighbors(v).collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut bags = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill_in(&adj, v), adj[v].len(), v))
            .expect("live vertex");
        let nbrs: Vec<VertexId> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
            adj[a].remove(&v);
        }
        let mut bag = nbrs;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        order.push(v);
        alive[v] = false;
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let parent = bags[i].iter().filter(|&&u| u != v).map(|&u| pos[u]).min();
        match parent {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
    }
    // components share no vertex, so their roots can be chained freely
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition { n, bags, edges }
}

fn fill_in(adj: &[BTreeSet<VertexId>], v: VertexId) -> usize {
    let nbrs: Vec<_> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Nice decomposition of `inst` from a min-fill ordering.
pub fn min_fill_decomposition(inst: &DpvcInstance) -> NiceTreeDecomposition {
    min_fill_tree_decomposition(inst).to_nice()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf(VertexId),
    Introduce(VertexId),
    Forget(VertexId),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted.
    pub bag: Vec<VertexId>,
    pub children: Vec<usize>,
}

/// Nodes are stored children first, so index order is a valid bottom-up
/// evaluation order. The root bag is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub n: usize,
    pub nodes: Vec<NiceNode>,
    pub root: Option<usize>,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    fn push(&mut self, kind: NodeKind, bag: Vec<VertexId>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn leaf_chain(&mut self, bag: &[VertexId]) -> usize {
        let mut cur = vec![bag[0]];
        let mut top = self.push(NodeKind::Leaf(bag[0]), cur.clone(), Vec::new());
        for &v in &bag[1..] {
            cur.push(v);
            cur.sort_unstable();
            top = self.push(NodeKind::Introduce(v), cur.clone(), vec![top]);
        }
        top
    }

    /// Forgets and introduces on top of `node` until its bag equals `target`.
    fn morph(&mut self, node: usize, target: &[VertexId]) -> usize {
        let mut top = node;
        let mut cur = self.nodes[node].bag.clone();
        let gone: Vec<_> = cur.iter().copied().filter(|v| target.binary_search(v).is_err()).collect();
        for v in gone {
            cur.retain(|&x| x != v);
            top = self.push(NodeKind::Forget(v), cur.clone(), vec![top]);
        }
        for &v in target {
            if cur.binary_search(&v).is_err() {
                cur.push(v);
                cur.sort_unstable();
                top = self.push(NodeKind::Introduce(v), cur.clone(), vec![top]);
            }
        }
        top
    }

    /// Checks the decomposition conditions and the shape rules of every node.
    pub fn validate(&self, inst: &DpvcInstance) -> Result<(), TwError> {
        let bad = |m: String| Err(TwError::InvalidDecomposition(m));
        if self.n != inst.num_vertices() {
            return bad("vertex count mismatch".into());
        }
        let Some(root) = self.root else {
            return if self.n == 0 { Ok(()) } else { bad("empty decomposition".into()) };
        };
        let mut parent = vec![usize::MAX; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("node {i} bag not sorted"));
            }
            for &c in &node.children {
                if c >= i || parent[c] != usize::MAX {
                    return bad(format!("node {i} has an invalid child {c}"));
                }
                parent[c] = i;
            }
            let child_bag = |k: usize| &self.nodes[node.children[k]].bag;
            let with = |v: VertexId, b: &[VertexId]| {
                let mut x = b.to_vec();
                x.push(v);
                x.sort_unstable();
                x
            };
            let ok = match node.kind {
                NodeKind::Leaf(v) => node.children.is_empty() && node.bag == [v],
                NodeKind::Introduce(v) => {
                    node.children.len() == 1
                        && child_bag(0).binary_search(&v).is_err()
                        && node.bag == with(v, child_bag(0))
                }
                NodeKind::Forget(v) => {
                    node.children.len() == 1
                        && node.bag.binary_search(&v).is_err()
                        && *child_bag(0) == with(v, &node.bag)
                }
                NodeKind::Join => {
                    node.children.len() == 2 && *child_bag(0) == node.bag && *child_bag(1) == node.bag
                }
            };
            if !ok {
                return bad(format!("node {i} violates the {:?} shape", node.kind));
            }
        }
        for (i, &p) in parent.iter().enumerate() {
            if (i == root) != (p == usize::MAX) {
                return bad(format!("node {i} is detached"));
            }
        }
        let bags: Vec<Vec<VertexId>> = self.nodes.iter().map(|x| x.bag.clone()).collect();
        check_cover(inst, &bags)?;
        // a connected occurrence set has exactly one topmost node
        for v in 0..self.n {
            let tops = (0..self.nodes.len())
                .filter(|&i| {
                    bags[i].binary_search(&v).is_ok()
                        && (parent[i] == usize::MAX || bags[parent[i]].binary_search(&v).is_err())
                })
                .count();
            if tops != 1 {
                return bad(format!("bags containing vertex {v} are not connected"));
            }
        }
        Ok(())
    }
}
