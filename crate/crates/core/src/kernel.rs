//! Quadratic vertex kernel for the support-size parameter.
//!
//! Rules, applied to a fixpoint: a vertex of degree at least `k+1` is
//! adjusted to its `(k+1)`-th largest demand and marked; a vertex of degree
//! 0 is removed, decrementing `k` when marked. A YES instance then has a
//! vertex cover of size at most `k` with every degree at most `k`, so more
//! than `k(k+1)` surviving vertices means NO.

use std::sync::Arc;

use crate::branching::{high_degree, solve_dpvc_k_from, SolveError, SolveOutcome};
use crate::instance::{DpvcInstance, PowerAssignment, VertexId};
use crate::state::{BranchState, BudgetMode, Op};

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum KernelOutcome {
    No,
    Reduced(Kernel),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub instance: DpvcInstance,
    pub k_remaining: i64,
    /// Reduced vertices that already hold power; each one counts against
    /// `k_remaining` whatever the reduced solution gives it.
    pub marked: Vec<VertexId>,
    /// Original id of every reduced vertex.
    pub map: Vec<VertexId>,
    /// Power committed to original vertices by the rules.
    pub forced: Vec<u64>,
    pub trace: Vec<Op>,
}

impl Kernel {
    /// Support-mode search state on the reduced instance, marks included.
    pub fn state(&self) -> BranchState {
        let mut s = BranchState::new(Arc::new(self.instance.clone()), BudgetMode::Support, self.k_remaining);
        for &v in &self.marked {
            s.mark(v);
        }
        s
    }

    /// Line-oriented lifting data, ids 1-based: `k <k_remaining>`, then
    /// `m <reduced> <original>` per reduced vertex, `x <reduced>` per marked
    /// vertex, `f <original> <power>` per forced power, and the operations as
    /// `a <v> <amount>` (adjust) or `r <v>` (prune).
    pub fn trace_text(&self) -> String {
        let mut out = format!("k {}\n", self.k_remaining);
        for (i, &v) in self.map.iter().enumerate() {
            out.push_str(&format!("m {} {}\n", i + 1, v + 1));
        }
        for &i in &self.marked {
            out.push_str(&format!("x {}\n", i + 1));
        }
        for (v, &p) in self.forced.iter().enumerate().filter(|(_, &p)| p > 0) {
            out.push_str(&format!("f {} {}\n", v + 1, p));
        }
        for op in &self.trace {
            match op {
                Op::Adjust { v, amount } => out.push_str(&format!("a {} {}\n", v + 1, amount)),
                Op::Prune { v } => out.push_str(&format!("r {}\n", v + 1)),
                Op::Set { v, power } => out.push_str(&format!("s {} {}\n", v + 1, power)),
                Op::Relax { edge, amount, .. } => out.push_str(&format!("l {} {}\n", edge + 1, amount)),
            }
        }
        out
    }

    /// Maps a solution of the reduced instance back to the original one.
    pub fn lift(&self, reduced: &PowerAssignment) -> PowerAssignment {
        let mut p = PowerAssignment::from_vec(self.forced.clone());
        for (i, &v) in self.map.iter().enumerate() {
            p.add(v, reduced.get(i));
        }
        p
    }
}

pub fn kernelize(inst: &DpvcInstance, k: i64) -> Result<KernelOutcome, SolveError> {
    if k < 0 {
        return Err(SolveError::NegativeBudget);
    }
    let mut s = BranchState::from_instance(inst, BudgetMode::Support, k);
    loop {
        s.prune_isolated();
        if s.budget() < 0 {
            return Ok(KernelOutcome::No);
        }
        if !high_degree(&mut s) {
            break;
        }
    }
    let k_remaining = s.budget();
    let n = s.num_live_vertices() as i64;
    if n > k_remaining * (k_remaining + 1) {
        return Ok(KernelOutcome::No);
    }
    let (instance, map) = s.residual_instance();
    let marked = map
        .iter()
        .enumerate()
        .filter(|&(_, &v)| s.is_marked(v))
        .map(|(i, _)| i)
        .collect();
    Ok(KernelOutcome::Reduced(Kernel {
        instance,
        k_remaining,
        marked,
        map,
        forced: s.forced().to_vec(),
        trace: s.trace().to_vec(),
    }))
}

/// Kernelizes, solves the kernel with the support branching, and lifts.
pub fn kernel_then_solve(inst: &DpvcInstance, k: i64) -> Result<SolveOutcome, SolveError> {
    match kernelize(inst, k)? {
        KernelOutcome::No => Ok(SolveOutcome {
            answer: false,
            witness: None,
            stats: Default::default(),
        }),
        KernelOutcome::Reduced(kernel) => {
            let mut out = solve_dpvc_k_from(kernel.state())?;
            out.witness = out.witness.map(|w| kernel.lift(&w));
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> DpvcInstance {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i, 1)).collect();
        DpvcInstance::pvc(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn star_collapses() {
        match kernelize(&star(2), 1).unwrap() {
            KernelOutcome::Reduced(kr) => {
                assert_eq!(kr.instance.num_vertices(), 0);
                assert_eq!(kr.k_remaining, 0);
                assert_eq!(kr.forced[0], 1);
            }
            KernelOutcome::No => panic!("star with k=1 is a YES instance"),
        }
    }

    #[test]
    fn matching_is_untouched() {
        let k = 3;
        let edges: Vec<_> = (0..k + 2).map(|i| (2 * i, 2 * i + 1, 1)).collect();
        let inst = DpvcInstance::pvc(2 * (k + 2), &edges).unwrap();
        let KernelOutcome::Reduced(kr) = kernelize(&inst, k as i64).unwrap() else {
            panic!("10 vertices fit the bound 12");
        };
        assert_eq!(kr.instance.num_vertices(), 10);
        assert_eq!(kr.k_remaining, 3);
        assert!(!kernel_then_solve(&inst, k as i64).unwrap().answer);
    }

    #[test]
    fn size_bound_rejects() {
        let edges: Vec<_> = (0..4).map(|i| (2 * i, 2 * i + 1, 1)).collect();
        let inst = DpvcInstance::pvc(8, &edges).unwrap();
        assert_eq!(kernelize(&inst, 2).unwrap(), KernelOutcome::No);
    }

    #[test]
    fn marks_survive() {
        // center 0 is adjusted to 1 but keeps its demand-3 edges
        let inst = DpvcInstance::dpvc(4, &[(0, 1, 3, 3), (0, 2, 3, 3), (0, 3, 1, 1)]).unwrap();
        let KernelOutcome::Reduced(kr) = kernelize(&inst, 2).unwrap() else {
            panic!();
        };
        assert_eq!(kr.marked, vec![0]);
        assert_eq!(kr.forced[0], 1);
        let text = kr.trace_text();
        assert!(text.starts_with("k 2\n"));
        assert!(text.contains("x 1\n") && text.contains("f 1 1\n") && text.contains("a 1 1\n"));
        let out = kernel_then_solve(&inst, 1).unwrap();
        assert!(out.answer);
        let w = out.witness.unwrap();
        assert!(inst.is_feasible(&w));
        assert_eq!(w.support(), 1);
    }
}
