//! Branch-and-reduce solvers parameterized by total power `P` or by the
//! number `k` of vertices receiving positive power.
//!
//! All solvers are decision procedures. Each search node owns its
//! [`BranchState`]; children are independent copies, so a search observer
//! can inspect a parent and all of its children side by side.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::instance::{DpvcInstance, PowerAssignment};
use crate::oracle::OracleError;
use crate::state::BranchState;

mod power;
pub mod rules;
mod support;
mod vc;

pub use power::{algorithm1_solve, algorithm1_solve_observed, algorithm2_solve, algorithm2_solve_observed, weight2_branch};
pub use support::{hybrid_k_solve, solve_dpvc_k, solve_dpvc_k_from, solve_pvc_k};
pub(crate) use support::high_degree;
pub use vc::{min_vertex_cover, vc_subsolve};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("this solver needs a symmetric (PVC) instance")]
    NotSymmetric,
    #[error("this solver needs every demand equal to 1")]
    NotUnitWeight,
    #[error("budget must be nonnegative")]
    NegativeBudget,
    #[error("precondition not met: {0}")]
    Precondition(&'static str),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Every reduction and branching rule the solvers can apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// Lower an isolated local-maximum edge to its heaviest neighbour edge.
    Rr1,
    /// `P(u) ≤ M(u)`: the heaviest edge at `u` goes to the other side.
    Rr2,
    /// Lone demand-2 edge among unit demands: lower it to 1.
    Rr3,
    /// Max-weight edge pair (PVC): `p_u = w` or `p_v = p_v' = w`.
    MaxEdgePair,
    /// Max-weight edge without neighbours: either endpoint, same cost.
    IsolatedEdge,
    /// `P(u) ≥ 5`: `Set(u, 0)` or `Adjust(u, 1)`.
    Br1,
    /// Heavy edge: `Adjust(u, w_uv)` or `Adjust(v, w_vu)`.
    HeavyEdge,
    /// Demand-3 edge, second neighbourhood a single vertex.
    Weight3Isolated,
    /// Demand-3 edge, general case.
    Weight3General,
    /// Max demand 2 at `u`, every edge at `u` has demand 2.
    W2AllTwo,
    /// Max demand 2: one of the forced moves or branchings of the case
    /// analysis, tagged by degree and sub-case.
    W2Case(u8, char),
    /// Unit residual instance handed to the vertex cover solver.
    VertexCover,
    /// Support mode: degree above the budget forces an adjust.
    HighDegree,
    /// Support mode: cover the edge by `u` or by `v` at one of its levels.
    LevelBranch,
    /// Hybrid search: edge inside the independent side.
    HybridInner,
    /// Hybrid search: edge between a cover vertex and the independent side.
    HybridCross,
    /// A configuration outside the case analysis; resolved by the always
    /// correct two-way edge branch.
    Fallback,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::W2Case(d, c) => write!(f, "W2Case{d}{c}"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// Search counters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub rules: BTreeMap<Rule, u64>,
}

impl SearchStats {
    pub(crate) fn count(&mut self, rule: Rule) {
        *self.rules.entry(rule).or_insert(0) += 1;
    }

    pub fn applied(&self, rule: Rule) -> u64 {
        self.rules.get(&rule).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.leaves += other.leaves;
        for (&r, &c) in &other.rules {
            *self.rules.entry(r).or_insert(0) += c;
        }
    }
}

/// Result of a decision run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub answer: bool,
    /// Solution of the original instance when the answer is YES.
    pub witness: Option<PowerAssignment>,
    pub stats: SearchStats,
}

/// Hook for inspecting every rule application of a search.
///
/// `reduction` sees a state before and after one answer-preserving rule;
/// `branching` sees a parent together with all children it was split into
/// (a single child for forced moves).
pub trait SearchObserver {
    fn reduction(&mut self, _rule: Rule, _before: &BranchState, _after: &BranchState) {}
    fn branching(&mut self, _rule: Rule, _parent: &BranchState, _children: &[BranchState]) {}
}

/// Observer that ignores everything.
pub struct NoObserver;

impl SearchObserver for NoObserver {}

/// Bookkeeping shared by every search: counters and the optional observer.
pub(crate) struct Ctx<'o> {
    obs: Option<&'o mut dyn SearchObserver>,
    pub(crate) stats: SearchStats,
}

impl<'o> Ctx<'o> {
    pub(crate) fn new(obs: Option<&'o mut dyn SearchObserver>) -> Self {
        Ctx {
            obs,
            stats: SearchStats::default(),
        }
    }

    /// Runs `f` on `s` and reports it as `rule` if it changed anything.
    pub(crate) fn reduce(
        &mut self,
        rule: Rule,
        s: &mut BranchState,
        f: impl FnOnce(&mut BranchState) -> bool,
    ) -> bool {
        let applied = match self.obs.as_deref_mut() {
            Some(obs) => {
                let before = s.clone();
                let applied = f(s);
                if applied {
                    obs.reduction(rule, &before, s);
                }
                applied
            }
            None => f(s),
        };
        if applied {
            self.stats.count(rule);
        }
        applied
    }

    pub(crate) fn split(&mut self, rule: Rule, parent: &BranchState, children: Vec<BranchState>) -> Vec<BranchState> {
        self.stats.count(rule);
        if let Some(obs) = self.obs.as_deref_mut() {
            obs.branching(rule, parent, &children);
        }
        children
    }

    pub(crate) fn outcome(self, inst: &DpvcInstance, found: Option<BranchState>) -> SolveOutcome {
        let witness = found.map(|s| {
            let w = s.lift();
            debug_assert!(inst.is_feasible(&w));
            w
        });
        SolveOutcome {
            answer: witness.is_some(),
            witness,
            stats: self.stats,
        }
    }
}

/// `Adjust(u, w_uv)` or `Adjust(v, w_vu)` on live edge `e`.
pub(crate) fn edge_branch(s: &BranchState, e: usize) -> Vec<BranchState> {
    let (u, v) = s.edge_endpoints(e);
    let mut a = s.clone();
    a.adjust(u, s.demand_from(e, u));
    let mut b = s.clone();
    b.adjust(v, s.demand_from(e, v));
    vec![a, b]
}
