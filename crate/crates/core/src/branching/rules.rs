//! Reduction rules and the `P(u) ≥ 5` branching rule, as operations on a
//! [`BranchState`]. Ties are broken by lowest vertex index, then lowest
//! second endpoint.

use crate::instance::VertexId;
use crate::state::BranchState;

/// Live edges ordered by `(min endpoint, max endpoint)`.
pub fn ordered_live_edges(s: &BranchState) -> Vec<usize> {
    let mut es: Vec<usize> = s.live_edge_ids().collect();
    es.sort_by_key(|&e| {
        let (u, v) = s.edge_endpoints(e);
        (u.min(v), u.max(v))
    });
    es
}

/// Largest residual demand of the edges at `x` other than `skip`.
fn max_other(s: &BranchState, x: VertexId, skip: usize) -> Option<u64> {
    s.incidences(x)
        .filter(|i| i.edge != skip)
        .map(|i| i.out.max(i.back))
        .max()
}

/// RR1 on a symmetric residual instance: an edge of weight `M` whose
/// neighbouring edges all weigh at most `B < M` is lowered to `B`, and the
/// budget pays `M − B`. Skipped when the edge has no neighbouring edge.
pub fn rr1(s: &mut BranchState) -> bool {
    for e in ordered_live_edges(s) {
        let (u, v) = s.edge_endpoints(e);
        let w = s.demand_from(e, u);
        let b = match (max_other(s, u, e), max_other(s, v, e)) {
            (None, None) => continue,
            (a, b) => a.unwrap_or(0).max(b.unwrap_or(0)),
        };
        if b < w {
            s.relax_edge(e, w - b);
            return true;
        }
    }
    false
}

/// RR2: if some `u` has `P(u) ≤ M(u)`, the neighbour `v` with `w_uv = M(u)`
/// must cover `(u, v)`, so `Adjust(v, w_vu)`.
pub fn rr2(s: &mut BranchState) -> bool {
    let found = s.live_vertices().find_map(|u| {
        if s.degree(u) == 0 {
            return None;
        }
        let m = s.max_out(u);
        if s.sum_back(u) > m {
            return None;
        }
        s.incidences(u)
            .filter(|i| i.out == m)
            .min_by_key(|i| i.other)
            .map(|i| (i.other, i.back))
    });
    match found {
        Some((v, w)) => {
            s.adjust(v, w);
            true
        }
        None => false,
    }
}

/// RR3: an edge with both demands 2 whose endpoints have every other
/// outgoing demand equal to 1 is lowered to 1 on both sides, budget −1.
pub fn rr3(s: &mut BranchState) -> bool {
    for e in ordered_live_edges(s) {
        let (u, v) = s.edge_endpoints(e);
        if s.demand_from(e, u) != 2 || s.demand_from(e, v) != 2 {
            continue;
        }
        let rest_unit = |x: VertexId| s.incidences(x).filter(|i| i.edge != e).all(|i| i.out == 1);
        if rest_unit(u) && rest_unit(v) {
            s.relax_edge(e, 1);
            return true;
        }
    }
    false
}

/// Lowest vertex with `P(u) ≥ 5`.
pub fn br1_vertex(s: &BranchState) -> Option<VertexId> {
    s.live_vertices().find(|&u| s.sum_back(u) >= 5)
}

/// BR1: `Set(u, 0)` or `Adjust(u, 1)` for the lowest `u` with `P(u) ≥ 5`.
pub fn br1(s: &BranchState) -> Option<[BranchState; 2]> {
    let u = br1_vertex(s)?;
    let mut zero = s.clone();
    zero.set_power(u, 0);
    let mut one = s.clone();
    one.adjust(u, 1);
    Some([zero, one])
}
