//! Residual instances under the Adjust/Set calculus.
//!
//! A [`BranchState`] keeps the original instance untouched and stores, next
//! to it, the residual demand of every live edge. `Adjust(u, w)` commits `w`
//! more power to `u`; `Set(u, w)` finalises `u` and forces its neighbours to
//! cover whatever `u` does not. Powers committed so far accumulate in
//! `forced`, so after the graph is emptied `forced` (lifted through the
//! relaxations recorded in the trace) is a solution of the original instance.

use std::sync::Arc;

use crate::instance::{DpvcInstance, Edge, PowerAssignment, VertexId};

/// What the budget counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BudgetMode {
    /// Total power `P`.
    Power,
    /// Number of vertices with positive power `k`.
    Support,
}

/// One recorded operation. Cascades triggered inside `Set` are not recorded
/// separately: replaying the `Set` reproduces them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Adjust {
        v: VertexId,
        amount: u64,
    },
    Set {
        v: VertexId,
        power: u64,
    },
    /// Both residual demands of `edge` lowered by `amount`. `base` holds the
    /// forced powers of `(u, v)` at that moment and `need` the lowered
    /// demands, which is what lifting needs to decide who covered the edge.
    Relax {
        edge: usize,
        amount: u64,
        base: [u64; 2],
        need: [u64; 2],
    },
    /// An edgeless vertex dropped from the residual graph.
    Prune {
        v: VertexId,
    },
}

/// A live neighbour as seen from some vertex `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub edge: usize,
    pub other: VertexId,
    /// Residual demand on `u`'s side.
    pub out: u64,
    /// Residual demand on the neighbour's side.
    pub back: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchState {
    inst: Arc<DpvcInstance>,
    mode: BudgetMode,
    initial_budget: i64,
    budget: i64,
    demand: Vec<[u64; 2]>,
    edge_live: Vec<bool>,
    vertex_live: Vec<bool>,
    degree: Vec<usize>,
    live_edges: usize,
    forced: Vec<u64>,
    marked: Vec<bool>,
    trace: Vec<Op>,
}

impl BranchState {
    pub fn new(inst: Arc<DpvcInstance>, mode: BudgetMode, budget: i64) -> Self {
        let n = inst.num_vertices();
        let demand = inst.edges().iter().map(|e| [e.w_uv, e.w_vu]).collect();
        let degree = (0..n).map(|v| inst.degree(v)).collect();
        let m = inst.num_edges();
        BranchState {
            inst,
            mode,
            initial_budget: budget,
            budget,
            demand,
            edge_live: vec![true; m],
            vertex_live: vec![true; n],
            degree,
            live_edges: m,
            forced: vec![0; n],
            marked: vec![false; n],
            trace: Vec::new(),
        }
    }

    pub fn from_instance(inst: &DpvcInstance, mode: BudgetMode, budget: i64) -> Self {
        Self::new(Arc::new(inst.clone()), mode, budget)
    }

    /// Rebuilds a state by replaying `ops` from scratch.
    pub fn replay(inst: Arc<DpvcInstance>, mode: BudgetMode, budget: i64, ops: &[Op]) -> Self {
        let mut s = Self::new(inst, mode, budget);
        for op in ops {
            match *op {
                Op::Adjust { v, amount } => s.adjust(v, amount),
                Op::Set { v, power } => s.set_power(v, power),
                Op::Relax { edge, amount, .. } => s.relax_edge(edge, amount),
                Op::Prune { v } => s.remove_isolated(v),
            }
        }
        s
    }

    pub fn instance(&self) -> &DpvcInstance {
        &self.inst
    }

    pub fn shared_instance(&self) -> Arc<DpvcInstance> {
        Arc::clone(&self.inst)
    }

    pub fn mode(&self) -> BudgetMode {
        self.mode
    }

    pub fn budget(&self) -> i64 {
        self.budget
    }

    pub fn initial_budget(&self) -> i64 {
        self.initial_budget
    }

    /// Budget spent since the state was created.
    pub fn consumed(&self) -> i64 {
        self.initial_budget - self.budget
    }

    pub fn forced(&self) -> &[u64] {
        &self.forced
    }

    pub fn trace(&self) -> &[Op] {
        &self.trace
    }

    pub fn is_marked(&self, v: VertexId) -> bool {
        self.marked[v]
    }

    pub fn mark(&mut self, v: VertexId) {
        self.marked[v] = true;
    }

    pub fn is_live(&self, v: VertexId) -> bool {
        self.vertex_live[v]
    }

    pub fn is_edge_live(&self, e: usize) -> bool {
        self.edge_live[e]
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_live.len()).filter(move |&v| self.vertex_live[v])
    }

    pub fn live_edge_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edge_live.len()).filter(move |&e| self.edge_live[e])
    }

    pub fn num_live_vertices(&self) -> usize {
        self.vertex_live.iter().filter(|&&b| b).count()
    }

    pub fn num_live_edges(&self) -> usize {
        self.live_edges
    }

    pub fn has_edges(&self) -> bool {
        self.live_edges > 0
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v]
    }

    pub fn edge_endpoints(&self, e: usize) -> (VertexId, VertexId) {
        let edge = self.inst.edge(e);
        (edge.u, edge.v)
    }

    /// Residual demand of `x`'s side of edge `e`.
    pub fn demand_from(&self, e: usize, x: VertexId) -> u64 {
        self.demand[e][self.inst.edge(e).side_of(x)]
    }

    /// Live edges at `u` with their residual demands, in adjacency order.
    pub fn incidences(&self, u: VertexId) -> impl Iterator<Item = Incidence> + '_ {
        self.inst
            .incident(u)
            .iter()
            .copied()
            .filter(move |&e| self.edge_live[e])
            .map(move |e| {
                let edge = self.inst.edge(e);
                let side = edge.side_of(u);
                Incidence {
                    edge: e,
                    other: edge.other(u),
                    out: self.demand[e][side],
                    back: self.demand[e][1 - side],
                }
            })
    }

    /// Live neighbours of `u` in increasing index order.
    pub fn neighbors(&self, u: VertexId) -> Vec<VertexId> {
        let mut ns: Vec<_> = self.incidences(u).map(|i| i.other).collect();
        ns.sort_unstable();
        ns
    }

    /// The live edge between `u` and `v`, if any.
    pub fn live_edge(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.inst
            .edge_between(u, v)
            .filter(|&e| self.edge_live[e])
    }

    /// `M(u)` on the residual graph.
    pub fn max_out(&self, u: VertexId) -> u64 {
        self.incidences(u).map(|i| i.out).max().unwrap_or(0)
    }

    /// `P(u)` on the residual graph.
    pub fn sum_back(&self, u: VertexId) -> u64 {
        self.incidences(u).map(|i| i.back).sum()
    }

    /// Largest residual demand on any live edge.
    pub fn max_demand(&self) -> u64 {
        self.live_edge_ids()
            .map(|e| self.demand[e][0].max(self.demand[e][1]))
            .max()
            .unwrap_or(0)
    }

    pub fn is_residual_symmetric(&self) -> bool {
        self.live_edge_ids()
            .all(|e| self.demand[e][0] == self.demand[e][1])
    }

    fn kill_edge(&mut self, e: usize) {
        debug_assert!(self.edge_live[e]);
        self.edge_live[e] = false;
        self.live_edges -= 1;
        let edge = self.inst.edge(e);
        self.degree[edge.u] -= 1;
        self.degree[edge.v] -= 1;
    }

    fn adjust_inner(&mut self, u: VertexId, w: u64) {
        debug_assert!(self.vertex_live[u], "adjust on removed vertex {u}");
        if w == 0 {
            return;
        }
        let incident: Vec<usize> = self.inst.incident(u).to_vec();
        for e in incident {
            if !self.edge_live[e] {
                continue;
            }
            let side = self.inst.edge(e).side_of(u);
            if self.demand[e][side] <= w {
                self.demand[e][side] = 0;
                self.kill_edge(e);
            } else {
                self.demand[e][side] -= w;
            }
        }
        self.forced[u] += w;
        self.marked[u] = true;
        if self.mode == BudgetMode::Power {
            self.budget -= w as i64;
        }
    }

    /// `Adjust(u, w)`: commit `w` more power to `u`.
    pub fn adjust(&mut self, u: VertexId, w: u64) {
        self.adjust_inner(u, w);
        self.trace.push(Op::Adjust { v: u, amount: w });
    }

    /// `Set(u, w)`: give `u` exactly `w` more power, remove it, and make each
    /// neighbour whose edge `u` leaves uncovered adjust to cover it.
    pub fn set_power(&mut self, u: VertexId, w: u64) {
        debug_assert!(self.vertex_live[u], "set on removed vertex {u}");
        let mut cascade = Vec::new();
        let incident: Vec<usize> = self.inst.incident(u).to_vec();
        for e in incident {
            if !self.edge_live[e] {
                continue;
            }
            let edge = self.inst.edge(e);
            let side = edge.side_of(u);
            if self.demand[e][side] > w {
                cascade.push((edge.other(u), self.demand[e][1 - side]));
            }
            self.kill_edge(e);
        }
        let counted = w > 0 || self.marked[u];
        self.forced[u] += w;
        self.vertex_live[u] = false;
        match self.mode {
            BudgetMode::Power => self.budget -= w as i64,
            BudgetMode::Support => {
                if counted {
                    self.budget -= 1;
                }
            }
        }
        for (v, amount) in cascade {
            self.adjust_inner(v, amount);
        }
        self.trace.push(Op::Set { v: u, power: w });
    }

    /// Lowers both residual demands of edge `e` by `amount`, charging the
    /// budget in power mode. Lifting later adds `amount` to whichever
    /// endpoint ends up covering the edge.
    pub fn relax_edge(&mut self, e: usize, amount: u64) {
        debug_assert!(self.edge_live[e]);
        debug_assert!(self.demand[e][0] > amount && self.demand[e][1] > amount);
        let (u, v) = self.edge_endpoints(e);
        self.demand[e][0] -= amount;
        self.demand[e][1] -= amount;
        if self.mode == BudgetMode::Power {
            self.budget -= amount as i64;
        }
        self.trace.push(Op::Relax {
            edge: e,
            amount,
            base: [self.forced[u], self.forced[v]],
            need: self.demand[e],
        });
    }

    fn remove_isolated(&mut self, v: VertexId) {
        debug_assert!(self.vertex_live[v] && self.degree[v] == 0);
        self.vertex_live[v] = false;
        if self.mode == BudgetMode::Support && self.marked[v] {
            self.budget -= 1;
        }
        self.trace.push(Op::Prune { v });
    }

    /// Drops every live vertex without live edges. In support mode a marked
    /// vertex is counted against the budget as it leaves.
    pub fn prune_isolated(&mut self) {
        for v in 0..self.vertex_live.len() {
            if self.vertex_live[v] && self.degree[v] == 0 {
                self.remove_isolated(v);
            }
        }
    }

    /// Solution of the original instance implied by the forced powers, with
    /// every relaxation paid back to the endpoint that covers its edge.
    pub fn lift(&self) -> PowerAssignment {
        lift_relaxations(&self.inst, &self.trace, self.forced.clone())
    }

    /// The residual graph as a standalone instance on the live vertices,
    /// plus the map from new ids to ids of this state.
    pub fn residual_instance(&self) -> (DpvcInstance, Vec<VertexId>) {
        let map: Vec<VertexId> = self.live_vertices().collect();
        let mut pos = vec![usize::MAX; self.vertex_live.len()];
        for (i, &v) in map.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .live_edge_ids()
            .map(|e| {
                let edge = self.inst.edge(e);
                Edge::new(pos[edge.u], pos[edge.v], self.demand[e][0], self.demand[e][1])
            })
            .collect();
        let inst = DpvcInstance::new(map.len(), edges)
            .expect("live edges have positive residual demands");
        (inst, map)
    }
}

/// Applies the relaxations of `trace` in reverse to `powers`.
pub fn lift_relaxations(inst: &DpvcInstance, trace: &[Op], mut powers: Vec<u64>) -> PowerAssignment {
    powers.resize(inst.num_vertices(), 0);
    for op in trace.iter().rev() {
        if let Op::Relax {
            edge,
            amount,
            base,
            need,
        } = *op
        {
            let e = inst.edge(edge);
            if powers[e.u].saturating_sub(base[0]) >= need[0] {
                powers[e.u] += amount;
            } else {
                debug_assert!(powers[e.v].saturating_sub(base[1]) >= need[1]);
                powers[e.v] += amount;
            }
        }
    }
    PowerAssignment::from_vec(powers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power_state(inst: DpvcInstance, budget: i64) -> BranchState {
        BranchState::new(Arc::new(inst), BudgetMode::Power, budget)
    }

    #[test]
    fn adjust_single_edge() {
        let mut s = power_state(DpvcInstance::dpvc(2, &[(0, 1, 3, 2)]).unwrap(), 10);
        s.adjust(0, 3);
        assert!(!s.has_edges());
        assert_eq!(s.forced(), &[3, 0]);
        assert_eq!(s.budget(), 7);
    }

    #[test]
    fn adjust_star_partially() {
        let mut s = power_state(DpvcInstance::dpvc(3, &[(0, 1, 2, 1), (0, 2, 4, 1)]).unwrap(), 10);
        s.adjust(0, 2);
        assert!(!s.is_edge_live(0));
        assert!(s.is_edge_live(1));
        assert_eq!(s.demand_from(1, 0), 2);
        assert_eq!(s.demand_from(1, 2), 1);
    }

    #[test]
    fn adjust_is_additive() {
        let inst = DpvcInstance::dpvc(3, &[(0, 1, 2, 1), (0, 2, 4, 3)]).unwrap();
        let mut a = power_state(inst.clone(), 10);
        a.adjust(0, 1);
        a.adjust(0, 1);
        let mut b = power_state(inst, 10);
        b.adjust(0, 2);
        assert_eq!(a.residual_instance(), b.residual_instance());
        assert_eq!(a.forced(), b.forced());
        assert_eq!(a.budget(), b.budget());
    }

    #[test]
    fn set_examples() {
        let edge = DpvcInstance::pvc(2, &[(0, 1, 5)]).unwrap();
        let mut s = power_state(edge.clone(), 10);
        s.set_power(0, 5);
        assert!(!s.has_edges());
        assert_eq!(s.forced(), &[5, 0]);

        let mut s = power_state(edge, 10);
        s.set_power(0, 0);
        assert!(!s.has_edges());
        assert_eq!(s.forced(), &[0, 5]);
        assert_eq!(s.budget(), 5);

        let tri = DpvcInstance::pvc(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let mut s = power_state(tri, 10);
        s.set_power(0, 1);
        let (res, map) = s.residual_instance();
        assert_eq!(map, vec![1, 2]);
        assert_eq!(res.edges(), &[Edge::new(0, 1, 1, 1)]);
    }

    #[test]
    fn support_mode_counting() {
        let star = DpvcInstance::pvc(3, &[(0, 1, 2), (0, 2, 2)]).unwrap();
        let mut s = BranchState::new(Arc::new(star), BudgetMode::Support, 2);
        s.adjust(0, 1);
        s.adjust(0, 1);
        assert_eq!(s.budget(), 2);
        s.prune_isolated();
        assert_eq!(s.budget(), 1, "marked vertex counted once on removal");
        assert_eq!(s.num_live_vertices(), 0);
    }

    #[test]
    fn set_zero_on_marked_vertex_counts() {
        let path = DpvcInstance::pvc(3, &[(0, 1, 2), (1, 2, 2)]).unwrap();
        let mut s = BranchState::new(Arc::new(path), BudgetMode::Support, 3);
        s.adjust(1, 1);
        s.set_power(1, 0);
        // vertex 1 was marked, then both neighbours are forced
        assert_eq!(s.budget(), 2);
        assert!(s.is_marked(0) && s.is_marked(2));
    }

    #[test]
    fn relax_is_lifted_to_covering_endpoint() {
        let path = DpvcInstance::pvc(3, &[(0, 1, 7), (1, 2, 3)]).unwrap();
        let mut s = power_state(path.clone(), 10);
        s.relax_edge(0, 4);
        assert_eq!(s.budget(), 6);
        s.set_power(1, 3);
        let lifted = s.lift();
        assert_eq!(lifted.as_slice(), &[0, 7, 0]);
        assert!(path.is_feasible(&lifted));
    }

    #[test]
    fn replay_reproduces_state() {
        let inst = Arc::new(DpvcInstance::dpvc(4, &[(0, 1, 3, 2), (1, 2, 2, 2), (2, 3, 1, 4)]).unwrap());
        let mut s = BranchState::new(Arc::clone(&inst), BudgetMode::Power, 20);
        s.adjust(1, 2);
        let before = s.clone();
        s.set_power(2, 1);
        s.prune_isolated();
        let again = BranchState::replay(Arc::clone(&inst), BudgetMode::Power, 20, s.trace());
        assert_eq!(again, s);
        let undone = BranchState::replay(inst, BudgetMode::Power, 20, &s.trace()[..1]);
        assert_eq!(undone, before);
    }
}
