//! Brute-force ground truth.
//!
//! Any feasible assignment induces an orientation (each edge names an
//! endpoint that covers it), and for a fixed orientation the cheapest
//! assignment gives every vertex the largest demand oriented to it. The
//! oracle enumerates orientations depth-first with two prunings: an edge
//! already covered by the partial powers is oriented for free, and a branch
//! whose partial cost reaches the incumbent is abandoned.

use thiserror::Error;

use crate::instance::{DpvcInstance, PowerAssignment};

pub const DEFAULT_EDGE_LIMIT: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {edges} edges, oracle limit is {limit}")]
    TooLarge { edges: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub opt_value: u64,
    /// Minimum support over all feasible assignments (its own search).
    pub opt_support: usize,
    pub witness: PowerAssignment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    pub edge_limit: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            edge_limit: DEFAULT_EDGE_LIMIT,
        }
    }
}

impl Oracle {
    pub fn new(edge_limit: usize) -> Self {
        Oracle { edge_limit }
    }

    fn check(&self, inst: &DpvcInstance) -> Result<(), OracleError> {
        if inst.num_edges() > self.edge_limit {
            return Err(OracleError::TooLarge {
                edges: inst.num_edges(),
                limit: self.edge_limit,
            });
        }
        Ok(())
    }

    pub fn solve(&self, inst: &DpvcInstance) -> Result<OracleResult, OracleError> {
        let (opt_value, witness) = self.min_power(inst)?;
        let opt_support = self.min_support(inst)?;
        Ok(OracleResult {
            opt_value,
            opt_support,
            witness,
        })
    }

    /// Exact minimum total power with an attaining assignment.
    pub fn min_power(&self, inst: &DpvcInstance) -> Result<(u64, PowerAssignment), OracleError> {
        self.check(inst)?;
        let mut order: Vec<usize> = (0..inst.num_edges()).collect();
        // heavy edges first so the incumbent tightens early
        order.sort_by_key(|&i| {
            let e = inst.edge(i);
            std::cmp::Reverse(e.w_uv.max(e.w_vu))
        });
        let mut search = PowerSearch {
            inst,
            order,
            powers: vec![0; inst.num_vertices()],
            best: u64::MAX,
            best_powers: Vec::new(),
        };
        search.run(0, 0);
        let witness = PowerAssignment::from_vec(search.best_powers);
        Ok((search.best, witness))
    }

    /// Exact minimum number of vertices with positive power.
    pub fn min_support(&self, inst: &DpvcInstance) -> Result<usize, OracleError> {
        Ok(self.min_support_assignment(inst)?.0)
    }

    /// Minimum support with an attaining assignment: every chosen vertex
    /// takes its largest demand.
    pub fn min_support_assignment(&self, inst: &DpvcInstance) -> Result<(usize, PowerAssignment), OracleError> {
        self.check(inst)?;
        let mut search = SupportSearch {
            inst,
            used: vec![false; inst.num_vertices()],
            best: usize::MAX,
            best_used: Vec::new(),
        };
        search.run(0, 0);
        let powers = search
            .best_used
            .iter()
            .enumerate()
            .map(|(v, &u)| if u { inst.max_demand_from(v) } else { 0 })
            .collect();
        Ok((search.best, PowerAssignment::from_vec(powers)))
    }
}

struct PowerSearch<'a> {
    inst: &'a DpvcInstance,
    order: Vec<usize>,
    powers: Vec<u64>,
    best: u64,
    best_powers: Vec<u64>,
}

impl PowerSearch<'_> {
    fn run(&mut self, depth: usize, cost: u64) {
        if cost >= self.best {
            return;
        }
        let Some(&i) = self.order.get(depth) else {
            self.best = cost;
            self.best_powers = self.powers.clone();
            return;
        };
        let e = *self.inst.edge(i);
        if e.is_covered(self.powers[e.u], self.powers[e.v]) {
            self.run(depth + 1, cost);
            return;
        }
        for (x, w) in [(e.u, e.w_uv), (e.v, e.w_vu)] {
            let old = self.powers[x];
            self.powers[x] = w;
            self.run(depth + 1, cost + w - old);
            self.powers[x] = old;
        }
    }
}

struct SupportSearch<'a> {
    inst: &'a DpvcInstance,
    used: Vec<bool>,
    best: usize,
    best_used: Vec<bool>,
}

impl SupportSearch<'_> {
    fn run(&mut self, i: usize, count: usize) {
        if count >= self.best {
            return;
        }
        if i == self.inst.num_edges() {
            self.best = count;
            self.best_used = self.used.clone();
            return;
        }
        let e = *self.inst.edge(i);
        if self.used[e.u] || self.used[e.v] {
            self.run(i + 1, count);
            return;
        }
        for x in [e.u, e.v] {
            self.used[x] = true;
            self.run(i + 1, count + 1);
            self.used[x] = false;
        }
    }
}

/// Minimum power, default limit.
pub fn brute_force_opt(inst: &DpvcInstance) -> Result<OracleResult, OracleError> {
    Oracle::default().solve(inst)
}

/// Minimum support, default limit.
pub fn brute_force_min_support(inst: &DpvcInstance) -> Result<usize, OracleError> {
    Oracle::default().min_support(inst)
}

/// Minimum vertex cover size of a simple graph by subset enumeration.
pub fn min_vertex_cover_by_subsets(n: usize, edges: &[(usize, usize)]) -> usize {
    assert!(n < 31, "subset enumeration is for small graphs");
    (0u32..(1 << n))
        .filter(|mask| {
            edges
                .iter()
                .all(|&(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(0)
}
