//! Vertex cover by branch and reduce with degree-2 folding.

use std::collections::BTreeSet;

use crate::instance::VertexId;
use crate::state::{BranchState, BudgetMode};

use super::SolveError;

#[derive(Clone, Debug)]
struct Fold {
    v: usize,
    a: usize,
    b: usize,
    x: usize,
}

#[derive(Clone, Debug)]
struct VcGraph {
    adj: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
    edges: usize,
    cover: Vec<usize>,
    folds: Vec<Fold>,
}

impl VcGraph {
    fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        let edges = adj.iter().map(BTreeSet::len).sum::<usize>() / 2;
        VcGraph {
            adj,
            alive: vec![true; n],
            edges,
            cover: Vec::new(),
            folds: Vec::new(),
        }
    }

    fn remove(&mut self, v: usize) {
        let ns = std::mem::take(&mut self.adj[v]);
        for &u in &ns {
            self.adj[u].remove(&v);
        }
        self.edges -= ns.len();
        self.alive[v] = false;
    }

    fn take(&mut self, v: usize) {
        self.remove(v);
        self.cover.push(v);
    }

    fn fold(&mut self, v: usize, a: usize, b: usize) {
        let mut ns: BTreeSet<usize> = self.adj[a].union(&self.adj[b]).copied().collect();
        ns.remove(&v);
        self.remove(v);
        self.remove(a);
        self.remove(b);
        let x = self.adj.len();
        self.adj.push(BTreeSet::new());
        self.alive.push(true);
        for &u in &ns {
            self.adj[u].insert(x);
            self.adj[x].insert(u);
        }
        self.edges += ns.len();
        self.folds.push(Fold { v, a, b, x });
    }

    /// Applies degree rules until none fits; returns the cover size added.
    fn reduce(&mut self) -> usize {
        let mut spent = 0;
        loop {
            let mut changed = false;
            for v in 0..self.adj.len() {
                if !self.alive[v] {
                    continue;
                }
                match self.adj[v].len() {
                    0 => {
                        self.alive[v] = false;
                    }
                    1 => {
                        let u = *self.adj[v].iter().next().unwrap();
                        self.take(u);
                        spent += 1;
                        changed = true;
                    }
                    2 => {
                        let mut it = self.adj[v].iter();
                        let (a, b) = (*it.next().unwrap(), *it.next().unwrap());
                        if self.adj[a].contains(&b) {
                            self.take(a);
                            self.take(b);
                            spent += 2;
                        } else {
                            self.fold(v, a, b);
                            spent += 1;
                        }
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return spent;
            }
        }
    }

    fn max_degree_vertex(&self) -> Option<usize> {
        (0..self.adj.len())
            .filter(|&v| self.alive[v] && !self.adj[v].is_empty())
            .max_by_key(|&v| (self.adj[v].len(), std::cmp::Reverse(v)))
    }

    fn search(mut self, k: i64) -> Option<VcGraph> {
        let k = k - self.reduce() as i64;
        if k < 0 {
            return None;
        }
        let Some(v) = self.max_degree_vertex() else {
            return Some(self);
        };
        let d = self.adj[v].len();
        if self.edges > k as usize * d {
            return None;
        }
        let mut with_v = self.clone();
        with_v.take(v);
        if let Some(done) = with_v.search(k - 1) {
            return Some(done);
        }
        let ns: Vec<usize> = self.adj[v].iter().copied().collect();
        for u in ns {
            self.take(u);
        }
        self.search(k - d as i64)
    }

    fn unfolded_cover(&self) -> Vec<usize> {
        let mut cover: BTreeSet<usize> = self.cover.iter().copied().collect();
        for f in self.folds.iter().rev() {
            if cover.remove(&f.x) {
                cover.insert(f.a);
                cover.insert(f.b);
            } else {
                cover.insert(f.v);
            }
        }
        cover.into_iter().collect()
    }
}

/// A vertex cover of size at most `k`, if one exists.
pub fn vertex_cover_at_most(n: usize, edges: &[(usize, usize)], k: i64) -> Option<Vec<usize>> {
    VcGraph::new(n, edges).search(k).map(|g| g.unfolded_cover())
}

/// A minimum vertex cover, sorted.
pub fn min_vertex_cover(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    (0..=n as i64)
        .find_map(|k| vertex_cover_at_most(n, edges, k))
        .expect("all vertices form a cover")
}

/// Solves a residual instance whose live demands are all 1.
///
/// Returns the vertices to power by 1, minimum in number, if the cost fits
/// `budget`. In support mode every live marked vertex is already paid for
/// by its removal, so it joins the cover for free.
pub fn vc_subsolve(s: &BranchState, budget: i64) -> Result<Option<Vec<VertexId>>, SolveError> {
    let unit = s
        .live_edge_ids()
        .all(|e| {
            let (u, v) = s.edge_endpoints(e);
            s.demand_from(e, u) == 1 && s.demand_from(e, v) == 1
        });
    if !unit {
        return Err(SolveError::NotUnitWeight);
    }
    let (res, map) = s.residual_instance();
    let free: Vec<bool> = map
        .iter()
        .map(|&v| s.mode() == BudgetMode::Support && s.is_marked(v))
        .collect();
    let paid = free.iter().filter(|&&f| f).count() as i64;
    let edges: Vec<(usize, usize)> = res
        .edges()
        .iter()
        .filter(|e| !free[e.u] && !free[e.v])
        .map(|e| (e.u, e.v))
        .collect();
    let budget = match s.mode() {
        BudgetMode::Power => budget,
        BudgetMode::Support => budget - paid,
    };
    if budget < 0 {
        return Ok(None);
    }
    let n = res.num_vertices();
    let Some(cover) = (0..=budget.min(n as i64)).find_map(|k| vertex_cover_at_most(n, &edges, k)) else {
        return Ok(None);
    };
    let mut out: Vec<VertexId> = cover.into_iter().map(|i| map[i]).collect();
    out.extend((0..free.len()).filter(|&i| free[i] && res.degree(i) > 0).map(|i| map[i]));
    out.sort_unstable();
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::oracle::min_vertex_cover_by_subsets;

    fn is_cover(edges: &[(usize, usize)], cover: &[usize]) -> bool {
        edges.iter().all(|(u, v)| cover.contains(u) || cover.contains(v))
    }

    #[test]
    fn small_graphs() {
        let cycle5: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let c = min_vertex_cover(5, &cycle5);
        assert_eq!(c.len(), 3);
        assert!(is_cover(&cycle5, &c));
        assert!(vertex_cover_at_most(5, &cycle5, 2).is_none());

        let path: Vec<_> = (0..6).map(|i| (i, i + 1)).collect();
        assert_eq!(min_vertex_cover(7, &path).len(), 3);
        assert!(min_vertex_cover(4, &[]).is_empty());
    }

    #[test]
    fn matches_subset_oracle() {
        for seed in 0..60 {
            let n = 4 + (seed as usize % 7);
            let m = (seed as usize * 7) % (n * (n - 1) / 2 + 1);
            let g = generators::gen_random_graph(n, m, seed).unwrap();
            let c = min_vertex_cover(n, &g.edges);
            assert!(is_cover(&g.edges, &c), "seed {seed}");
            assert_eq!(c.len(), min_vertex_cover_by_subsets(n, &g.edges), "seed {seed}");
        }
    }
}
