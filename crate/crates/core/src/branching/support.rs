//! Decision solvers parameterized by the support size `k`.

use std::collections::BTreeSet;

use crate::instance::{DpvcInstance, VertexId};
use crate::oracle::Oracle;
use crate::state::{BranchState, BudgetMode};

use super::power::run_alg1;
use super::rules::ordered_live_edges;
use super::{Ctx, Rule, SearchObserver, SolveError, SolveOutcome};

/// PVC: is there a feasible assignment with at most `k` positive powers?
pub fn solve_pvc_k(inst: &DpvcInstance, k: i64) -> Result<SolveOutcome, SolveError> {
    run_alg1(inst, BudgetMode::Support, k, None)
}

/// DPVC: is there a feasible assignment with at most `k` positive powers?
pub fn solve_dpvc_k(inst: &DpvcInstance, k: i64) -> Result<SolveOutcome, SolveError> {
    if k < 0 {
        return Err(SolveError::NegativeBudget);
    }
    solve_dpvc_k_from(BranchState::from_instance(inst, BudgetMode::Support, k))
}

/// Same search started from an existing support-mode state, which may
/// already carry forced powers and marks.
pub fn solve_dpvc_k_from(state: BranchState) -> Result<SolveOutcome, SolveError> {
    solve_dpvc_k_observed(state, None)
}

pub(crate) fn solve_dpvc_k_observed(
    state: BranchState,
    obs: Option<&mut dyn SearchObserver>,
) -> Result<SolveOutcome, SolveError> {
    if state.mode() != BudgetMode::Support {
        return Err(SolveError::Precondition("support-mode state expected"));
    }
    let inst = state.shared_instance();
    let mut ctx = Ctx::new(obs);
    let found = dpvc_k(&mut ctx, state);
    Ok(ctx.outcome(&inst, found))
}

fn live_marked(s: &BranchState) -> i64 {
    s.live_vertices().filter(|&v| s.is_marked(v)).count() as i64
}

/// Adjusts the lowest vertex whose degree exceeds the budget to its
/// `(k+1)`-th largest demand.
pub(crate) fn high_degree(s: &mut BranchState) -> bool {
    let k = s.budget();
    if k < 0 {
        return false;
    }
    let Some(u) = s.live_vertices().find(|&u| s.degree(u) as i64 > k) else {
        return false;
    };
    let mut outs: Vec<u64> = s.incidences(u).map(|i| i.out).collect();
    outs.sort_unstable_by(|a, b| b.cmp(a));
    s.adjust(u, outs[k as usize]);
    true
}

fn dpvc_k(ctx: &mut Ctx<'_>, mut s: BranchState) -> Option<BranchState> {
    ctx.stats.nodes += 1;
    loop {
        s.prune_isolated();
        if !ctx.reduce(Rule::HighDegree, &mut s, high_degree) {
            break;
        }
    }
    if s.budget() < 0 || live_marked(&s) > s.budget() {
        ctx.stats.leaves += 1;
        return None;
    }
    if !s.has_edges() {
        ctx.stats.leaves += 1;
        return Some(s);
    }
    let u = s.live_vertices().find(|&u| s.degree(u) > 0).expect("edge endpoint");
    let m = s.max_out(u);
    let (v, r_vu) = s
        .incidences(u)
        .filter(|i| i.out == m)
        .map(|i| (i.other, i.back))
        .min()
        .expect("edge at u");
    let levels: BTreeSet<u64> = s.incidences(v).map(|i| i.out).filter(|&w| w >= r_vu).collect();
    let mut kids = Vec::with_capacity(levels.len() + 1);
    let mut a = s.clone();
    a.set_power(u, m);
    kids.push(a);
    for w in levels {
        let mut b = s.clone();
        b.set_power(v, w);
        kids.push(b);
    }
    for c in ctx.split(Rule::LevelBranch, &s, kids) {
        if let Some(done) = dpvc_k(ctx, c) {
            return Some(done);
        }
    }
    None
}

struct Hybrid {
    s: BranchState,
    c1: BTreeSet<VertexId>,
    c2: BTreeSet<VertexId>,
}

impl Hybrid {
    fn in_c(&self, v: VertexId) -> bool {
        self.c1.contains(&v) || self.c2.contains(&v)
    }

    fn with(&self, v: VertexId, w: u64, join: bool) -> Hybrid {
        let mut h = Hybrid {
            s: self.s.clone(),
            c1: self.c1.clone(),
            c2: self.c2.clone(),
        };
        h.s.adjust(v, w);
        if join {
            h.c1.insert(v);
        }
        h
    }
}

/// DPVC support decision by branching towards a vertex cover `C1 ∪ C2` of
/// size at most `k` and an independent remainder `I`, then solving the
/// instance left on the cover exactly. The search has at most `4^k` leaves.
pub fn hybrid_k_solve(inst: &DpvcInstance, k: i64) -> Result<SolveOutcome, SolveError> {
    if k < 0 {
        return Err(SolveError::NegativeBudget);
    }
    let mut ctx = Ctx::new(None);
    let start = Hybrid {
        s: BranchState::from_instance(inst, BudgetMode::Support, k),
        c1: BTreeSet::new(),
        c2: BTreeSet::new(),
    };
    let found = hybrid(&mut ctx, start, k as usize);
    Ok(ctx.outcome(inst, found))
}

fn hybrid(ctx: &mut Ctx<'_>, mut h: Hybrid, k: usize) -> Option<BranchState> {
    ctx.stats.nodes += 1;
    let to_c2: Vec<VertexId> = h
        .c1
        .iter()
        .copied()
        .filter(|&u| h.s.incidences(u).all(|i| h.in_c(i.other)))
        .collect();
    for u in to_c2 {
        h.c1.remove(&u);
        h.c2.insert(u);
    }
    let touches_i = h.s.live_edge_ids().any(|e| {
        let (u, v) = h.s.edge_endpoints(e);
        !h.in_c(u) || !h.in_c(v)
    });
    if h.c1.len() + h.c2.len() >= k || !touches_i {
        ctx.stats.leaves += 1;
        return close_leaf(h);
    }
    let inner = ordered_live_edges(&h.s).into_iter().find(|&e| {
        let (u, v) = h.s.edge_endpoints(e);
        !h.in_c(u) && !h.in_c(v)
    });
    let (rule, kids) = match inner {
        Some(e) => {
            let (u, v) = h.s.edge_endpoints(e);
            let a = h.with(u, h.s.demand_from(e, u), true);
            let b = h.with(v, h.s.demand_from(e, v), true);
            (Rule::HybridInner, vec![a, b])
        }
        None => {
            let u = *h.c1.iter().next().expect("cover vertex with edges to I");
            let best = h
                .s
                .incidences(u)
                .filter(|i| !h.in_c(i.other))
                .max_by_key(|i| (i.out, std::cmp::Reverse(i.other)))
                .expect("edge to I");
            let a = h.with(u, best.out, false);
            let b = h.with(best.other, best.back, true);
            (Rule::HybridCross, vec![a, b])
        }
    };
    ctx.stats.count(rule);
    for c in kids {
        if let Some(done) = hybrid(ctx, c, k) {
            return Some(done);
        }
    }
    None
}

/// With the cover fixed, `I` gets no power: cover vertices take every edge
/// towards `I`, and what remains lives on the cover.
fn close_leaf(mut h: Hybrid) -> Option<BranchState> {
    for e in h.s.live_edge_ids().collect::<Vec<_>>() {
        let (u, v) = h.s.edge_endpoints(e);
        if !h.in_c(u) && !h.in_c(v) {
            return None;
        }
    }
    for u in h.c1.clone() {
        let need = h.s.incidences(u).filter(|i| !h.in_c(i.other)).map(|i| i.out).max();
        if let Some(w) = need {
            h.s.adjust(u, w);
        }
    }
    let (res, map) = h.s.residual_instance();
    match Oracle::default().min_power(&res) {
        Ok((_, witness)) => {
            for (i, p) in witness.positive() {
                h.s.adjust(map[i], p);
            }
        }
        Err(_) => {
            for e in h.s.live_edge_ids().collect::<Vec<_>>() {
                if h.s.is_edge_live(e) {
                    let (u, _) = h.s.edge_endpoints(e);
                    let w = h.s.demand_from(e, u);
                    h.s.adjust(u, w);
                }
            }
        }
    }
    Some(h.s)
}
