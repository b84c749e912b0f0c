//! Decision solvers parameterized by the total power `P`.

use std::collections::BTreeSet;

use crate::instance::{DpvcInstance, VertexId};
use crate::oracle::Oracle;
use crate::state::{BranchState, BudgetMode};

use super::rules::{self, ordered_live_edges};
use super::vc::vc_subsolve;
use super::{edge_branch, Ctx, Rule, SearchObserver, SolveError, SolveOutcome};

/// PVC: is there a feasible assignment of total power at most `budget`?
pub fn algorithm1_solve(inst: &DpvcInstance, budget: i64) -> Result<SolveOutcome, SolveError> {
    run_alg1(inst, BudgetMode::Power, budget, None)
}

pub fn algorithm1_solve_observed(
    inst: &DpvcInstance,
    budget: i64,
    obs: &mut dyn SearchObserver,
) -> Result<SolveOutcome, SolveError> {
    run_alg1(inst, BudgetMode::Power, budget, Some(obs))
}

pub(crate) fn run_alg1(
    inst: &DpvcInstance,
    mode: BudgetMode,
    budget: i64,
    obs: Option<&mut dyn SearchObserver>,
) -> Result<SolveOutcome, SolveError> {
    if !inst.is_symmetric() {
        return Err(SolveError::NotSymmetric);
    }
    let mut ctx = Ctx::new(obs);
    let found = alg1(&mut ctx, BranchState::from_instance(inst, mode, budget))?;
    Ok(ctx.outcome(inst, found))
}

fn alg1(ctx: &mut Ctx<'_>, mut s: BranchState) -> Result<Option<BranchState>, SolveError> {
    ctx.stats.nodes += 1;
    while ctx.reduce(Rule::Rr1, &mut s, rules::rr1) {}
    s.prune_isolated();
    if s.budget() < 0 {
        ctx.stats.leaves += 1;
        return Ok(None);
    }
    if !s.has_edges() {
        ctx.stats.leaves += 1;
        return Ok(Some(s));
    }
    let (rule, kids) = if s.max_demand() == 1 {
        (Rule::VertexCover, vec![cover_child(&s)?])
    } else {
        max_edge_branch(&s)
    };
    for c in ctx.split(rule, &s, kids) {
        if let Some(done) = alg1(ctx, c)? {
            return Ok(Some(done));
        }
    }
    Ok(None)
}

/// The state after powering a minimum vertex cover of the unit residual.
fn cover_child(s: &BranchState) -> Result<BranchState, SolveError> {
    let cover = vc_subsolve(s, i64::MAX)?.expect("unbounded budget");
    let mut c = s.clone();
    for v in cover {
        c.adjust(v, 1);
    }
    c.prune_isolated();
    Ok(c)
}

/// Branching on a maximum-weight edge of a symmetric residual instance.
fn max_edge_branch(s: &BranchState) -> (Rule, Vec<BranchState>) {
    let m = s.max_demand();
    let mut first = None;
    for e in ordered_live_edges(s) {
        let (u, v) = s.edge_endpoints(e);
        if s.demand_from(e, u) != m {
            continue;
        }
        first.get_or_insert(e);
        for (x, y) in [(u, v), (v, u)] {
            let pair = s
                .incidences(x)
                .filter(|i| i.edge != e && i.out == m)
                .map(|i| i.other)
                .min();
            if let Some(z) = pair {
                let mut a = s.clone();
                a.set_power(x, m);
                let mut b = s.clone();
                b.set_power(y, m);
                b.set_power(z, m);
                return (Rule::MaxEdgePair, vec![a, b]);
            }
        }
        if s.degree(u) == 1 && s.degree(v) == 1 {
            let mut a = s.clone();
            a.set_power(u, m);
            return (Rule::IsolatedEdge, vec![a]);
        }
    }
    (Rule::Fallback, edge_branch(s, first.expect("live edge of maximum weight")))
}

/// DPVC: is there a feasible assignment of total power at most `budget`?
pub fn algorithm2_solve(inst: &DpvcInstance, budget: i64) -> Result<SolveOutcome, SolveError> {
    run_alg2(inst, budget, None)
}

pub fn algorithm2_solve_observed(
    inst: &DpvcInstance,
    budget: i64,
    obs: &mut dyn SearchObserver,
) -> Result<SolveOutcome, SolveError> {
    run_alg2(inst, budget, Some(obs))
}

fn run_alg2(inst: &DpvcInstance, budget: i64, obs: Option<&mut dyn SearchObserver>) -> Result<SolveOutcome, SolveError> {
    let mut ctx = Ctx::new(obs);
    let found = alg2(&mut ctx, BranchState::from_instance(inst, BudgetMode::Power, budget))?;
    Ok(ctx.outcome(inst, found))
}

fn alg2(ctx: &mut Ctx<'_>, mut s: BranchState) -> Result<Option<BranchState>, SolveError> {
    ctx.stats.nodes += 1;
    loop {
        while ctx.reduce(Rule::Rr2, &mut s, rules::rr2) {}
        if !ctx.reduce(Rule::Rr3, &mut s, rules::rr3) {
            break;
        }
    }
    s.prune_isolated();
    if s.budget() < 0 {
        ctx.stats.leaves += 1;
        return Ok(None);
    }
    if !s.has_edges() {
        ctx.stats.leaves += 1;
        return Ok(Some(s));
    }
    let (rule, kids) = alg2_branch(&s)?;
    for c in ctx.split(rule, &s, kids) {
        if let Some(done) = alg2(ctx, c)? {
            return Ok(Some(done));
        }
    }
    Ok(None)
}

fn alg2_branch(s: &BranchState) -> Result<(Rule, Vec<BranchState>), SolveError> {
    if let Some(kids) = rules::br1(s) {
        return Ok((Rule::Br1, kids.into()));
    }
    let heavy = ordered_live_edges(s).into_iter().find(|&e| {
        let (u, v) = s.edge_endpoints(e);
        let (a, b) = (s.demand_from(e, u), s.demand_from(e, v));
        a + b >= 6 || (a.min(b), a.max(b)) == (2, 3)
    });
    if let Some(e) = heavy {
        return Ok((Rule::HeavyEdge, edge_branch(s, e)));
    }
    if let Some(r) = weight3_branch(s)? {
        return Ok(r);
    }
    match s.max_demand() {
        2 => weight2_branch(s),
        1 => Ok((Rule::VertexCover, vec![cover_child(s)?])),
        _ => Ok(fallback(s)),
    }
}

fn fallback(s: &BranchState) -> (Rule, Vec<BranchState>) {
    let e = ordered_live_edges(s)[0];
    (Rule::Fallback, edge_branch(s, e))
}

fn fallback_at(s: &BranchState, u: VertexId, v: VertexId) -> (Rule, Vec<BranchState>) {
    let e = s.live_edge(u, v).expect("live edge");
    (Rule::Fallback, edge_branch(s, e))
}

/// Live vertices at distance exactly two from `u`.
fn second_neighborhood(s: &BranchState, u: VertexId) -> BTreeSet<VertexId> {
    let first = s.neighbors(u);
    let mut out = BTreeSet::new();
    for &z in &first {
        for y in s.neighbors(z) {
            if y != u && !first.contains(&y) {
                out.insert(y);
            }
        }
    }
    out
}

/// Branching on an edge with `w_uv = 3 = M(u)`.
fn weight3_branch(s: &BranchState) -> Result<Option<(Rule, Vec<BranchState>)>, SolveError> {
    let Some(u) = s.live_vertices().find(|&u| s.max_out(u) == 3) else {
        return Ok(None);
    };
    let (v, r_vu) = s
        .incidences(u)
        .filter(|i| i.out == 3)
        .map(|i| (i.other, i.back))
        .min()
        .expect("edge of demand 3");
    if s.sum_back(u) != 4 || r_vu != 1 {
        return Ok(Some(fallback_at(s, u, v)));
    }
    let nbrs = s.neighbors(u);
    let n2 = second_neighborhood(s, u);
    if n2.is_empty() {
        let mut a = s.clone();
        let mut closed = nbrs.clone();
        closed.push(u);
        solve_detached(&mut a, &closed)?;
        return Ok(Some((Rule::Weight3Isolated, vec![a])));
    }
    let lone_t = match n2.iter().next() {
        Some(&t) if n2.len() == 1 => Some(t),
        _ => None,
    };
    let isolated = lone_t.filter(|&t| {
        nbrs.iter()
            .filter_map(|&z| s.live_edge(t, z))
            .all(|e| s.demand_from(e, t) == 1)
    });
    if let Some(t) = isolated {
        let mut a = s.clone();
        a.adjust(t, 1);
        let mut closed = nbrs.clone();
        closed.push(u);
        solve_detached(&mut a, &closed)?;
        let mut b = s.clone();
        b.set_power(t, 0);
        return Ok(Some((Rule::Weight3Isolated, vec![a, b])));
    }
    let mut a = s.clone();
    a.adjust(v, r_vu);
    let mut b = s.clone();
    b.set_power(u, 3);
    for z in nbrs {
        b.set_power(z, 0);
    }
    Ok(Some((Rule::Weight3General, vec![a, b])))
}

/// Covers every live edge inside `part`, a union of components of the
/// residual graph, optimally.
fn solve_detached(s: &mut BranchState, part: &[VertexId]) -> Result<(), SolveError> {
    let (res, map) = s.residual_instance();
    let keep: Vec<usize> = map
        .iter()
        .enumerate()
        .filter(|(_, v)| part.contains(v))
        .map(|(i, _)| i)
        .collect();
    let sub = res.induced(&keep);
    let (_, witness) = Oracle::default().min_power(&sub)?;
    for (i, p) in witness.positive() {
        s.adjust(map[keep[i]], p);
    }
    Ok(())
}

/// One step of the case analysis for a residual instance of maximum demand 2.
///
/// Returns the rule and its children; a forced move has a single child.
pub fn weight2_branch(s: &BranchState) -> Result<(Rule, Vec<BranchState>), SolveError> {
    if s.max_demand() != 2 {
        return Err(SolveError::Precondition("maximum residual demand must be 2"));
    }
    let u = s
        .live_vertices()
        .filter(|&u| s.max_out(u) == 2)
        .max_by_key(|&u| (s.degree(u), std::cmp::Reverse(u)))
        .expect("vertex with out-demand 2");
    Ok(weight2_at(s, u, 0))
}

fn set_zero_or_two(s: &BranchState, u: VertexId) -> Vec<BranchState> {
    let mut a = s.clone();
    a.set_power(u, 0);
    let mut b = s.clone();
    b.set_power(u, 2);
    vec![a, b]
}

fn adjusted(s: &BranchState, moves: &[(VertexId, u64)]) -> BranchState {
    let mut c = s.clone();
    for &(v, w) in moves {
        c.adjust(v, w);
    }
    c
}

fn weight2_at(s: &BranchState, u: VertexId, depth: u8) -> (Rule, Vec<BranchState>) {
    let pu = s.sum_back(u);
    if pu >= 5 {
        let mut one = s.clone();
        one.adjust(u, 1);
        let mut zero = s.clone();
        zero.set_power(u, 0);
        return (Rule::Br1, vec![zero, one]);
    }
    let inc: Vec<_> = {
        let mut v: Vec<_> = s.incidences(u).collect();
        v.sort_by_key(|i| i.other);
        v
    };
    let twos: Vec<_> = inc.iter().filter(|i| i.out == 2).copied().collect();
    let ones: Vec<_> = inc.iter().filter(|i| i.out == 1).copied().collect();
    let first_two = twos[0].other;
    if pu <= 2 {
        return fallback_at(s, u, first_two);
    }
    if ones.is_empty() {
        return (Rule::W2AllTwo, set_zero_or_two(s, u));
    }
    match inc.len() {
        4 => match ones.len() {
            3 => {
                let v = twos[0];
                (Rule::W2Case(4, 'b'), vec![adjusted(s, &[(v.other, v.back)])])
            }
            1 => (Rule::W2Case(4, 'a'), set_zero_or_two(s, u)),
            _ => two_heavy(s, u, twos[0], twos[1], 4),
        },
        3 => {
            if twos.len() == 2 {
                let t = ones[0];
                if t.back == 1 {
                    (Rule::W2Case(3, 'a'), set_zero_or_two(s, u))
                } else {
                    two_heavy(s, u, twos[0], twos[1], 3)
                }
            } else {
                let v = twos[0];
                if v.back == 1 {
                    return (Rule::W2Case(3, 'b'), vec![adjusted(s, &[(v.other, 1)])]);
                }
                let other = s
                    .incidences(v.other)
                    .filter(|i| i.other != u && i.out == 2)
                    .min_by_key(|i| i.other);
                match other {
                    Some(si) => {
                        let mut a = s.clone();
                        a.set_power(v.other, 2);
                        let b = adjusted(s, &[(u, 2), (si.other, si.back)]);
                        (Rule::W2Case(3, 'b'), vec![a, b])
                    }
                    None => fallback_at(s, u, v.other),
                }
            }
        }
        2 => {
            let v = twos[0];
            let z = ones[0];
            if z.back == 1 {
                (Rule::W2Case(2, 'a'), set_zero_or_two(s, u))
            } else if v.back == 1 {
                (Rule::W2Case(2, 'b'), vec![adjusted(s, &[(v.other, 1)])])
            } else if depth == 0 && s.max_out(z.other) == 2 {
                weight2_at(s, z.other, depth + 1)
            } else {
                fallback_at(s, u, v.other)
            }
        }
        _ => fallback_at(s, u, first_two),
    }
}

/// Two demand-2 edges `(u, v)`, `(u, z)` whose other sides demand 1.
fn two_heavy(
    s: &BranchState,
    u: VertexId,
    a: crate::state::Incidence,
    b: crate::state::Incidence,
    d: u8,
) -> (Rule, Vec<BranchState>) {
    let sub = if d == 4 { 'c' } else { 'a' };
    if a.back != 1 || b.back != 1 {
        return fallback_at(s, u, a.other);
    }
    if s.degree(a.other) == 1 && s.degree(b.other) == 1 {
        let mut c = s.clone();
        c.set_power(u, 2);
        return (Rule::W2Case(d, sub), vec![c]);
    }
    let (z, v) = if s.degree(a.other) >= 2 { (a, b) } else { (b, a) };
    let mut zero = s.clone();
    zero.set_power(z.other, 0);
    let one = adjusted(s, &[(z.other, 1), (v.other, 1)]);
    (Rule::W2Case(d, sub), vec![zero, one])
}
