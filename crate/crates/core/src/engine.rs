//! Uniform entry points over every solver.
//!
//! Power engines minimise the total power, support engines the number of
//! vertices with positive power. The branching engines are decision
//! procedures; [`optimize`] turns them into optimisers by raising the budget
//! one step at a time, starting from the LP bound for power and from 0 for
//! support.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::branching::{
    algorithm1_solve, algorithm2_solve, hybrid_k_solve, solve_dpvc_k, solve_pvc_k, SearchStats, SolveError, SolveOutcome,
};
use crate::instance::{DpvcInstance, PowerAssignment};
use crate::kernel::kernel_then_solve;
use crate::lp::lp_lower_bound;
use crate::oracle::{Oracle, OracleError};
use crate::treewidth::{
    fptas_solve, min_fill_decomposition, solve_tw_degree, solve_tw_exact, solve_tw_maxweight, NiceTreeDecomposition,
    TwError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Brute,
    BruteSupport,
    BranchP,
    BranchK,
    HybridK,
    KernelBranchK,
    TwExact,
    TwMaxWeight,
    TwDegree,
    TwApprox,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Power,
    Support,
}

impl Engine {
    pub const ALL: [Engine; 10] = [
        Engine::Brute,
        Engine::BruteSupport,
        Engine::BranchP,
        Engine::BranchK,
        Engine::HybridK,
        Engine::KernelBranchK,
        Engine::TwExact,
        Engine::TwMaxWeight,
        Engine::TwDegree,
        Engine::TwApprox,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Brute => "brute",
            Engine::BruteSupport => "brute-support",
            Engine::BranchP => "branch-p",
            Engine::BranchK => "branch-k",
            Engine::HybridK => "hybrid-k",
            Engine::KernelBranchK => "kernel-branch-k",
            Engine::TwExact => "tw-exact",
            Engine::TwMaxWeight => "tw-maxweight",
            Engine::TwDegree => "tw-degree",
            Engine::TwApprox => "tw-approx",
        }
    }

    pub fn objective(self) -> Objective {
        match self {
            Engine::BruteSupport | Engine::BranchK | Engine::HybridK | Engine::KernelBranchK => Objective::Support,
            _ => Objective::Power,
        }
    }

    /// Whether the engine answers budget questions directly.
    pub fn is_decision(self) -> bool {
        matches!(
            self,
            Engine::BranchP | Engine::BranchK | Engine::HybridK | Engine::KernelBranchK
        )
    }

    pub fn is_exact(self) -> bool {
        self != Engine::TwApprox
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown engine `{0}`")]
pub struct UnknownEngine(pub String);

impl FromStr for Engine {
    type Err = UnknownEngine;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| UnknownEngine(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Treewidth(#[from] TwError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("engine {0} needs --eps")]
    MissingEpsilon(Engine),
    #[error("`{0}` is not a positive rational")]
    BadEpsilon(String),
    #[error("engine {0} has no decision mode")]
    NotDecision(Engine),
}

/// Parses a positive rational such as `1/2` or `3`.
pub fn parse_epsilon(s: &str) -> Result<BigRational, EngineError> {
    let eps: BigRational = s.trim().parse().map_err(|_| EngineError::BadEpsilon(s.to_string()))?;
    if eps <= BigRational::zero() {
        return Err(EngineError::BadEpsilon(s.to_string()));
    }
    Ok(eps)
}

/// `value ≤ (1+ε+1/n)·opt`, the guarantee of `tw-approx` on any input.
pub fn within_approx_bound(value: u64, opt: u64, n: usize, eps: &BigRational) -> bool {
    let int = |v: u64| BigRational::from_integer(v.into());
    let slack = if n == 0 { BigRational::zero() } else { BigRational::new(1.into(), n.into()) };
    int(value) <= (BigRational::one() + eps + slack) * int(opt)
}

/// Shared inputs for the non-branching engines.
#[derive(Clone, Debug, Default)]
pub struct EngineConfig {
    pub oracle: Oracle,
    /// Decomposition for the treewidth engines; min-fill when absent.
    pub td: Option<NiceTreeDecomposition>,
    pub eps: Option<BigRational>,
}

impl EngineConfig {
    fn decomposition(&self, inst: &DpvcInstance) -> NiceTreeDecomposition {
        self.td.clone().unwrap_or_else(|| min_fill_decomposition(inst))
    }
}

/// One decision question: is there a solution within `budget`?
pub fn decide(engine: Engine, inst: &DpvcInstance, budget: i64) -> Result<SolveOutcome, EngineError> {
    let symmetric = inst.is_symmetric();
    let out = match engine {
        Engine::BranchP if symmetric => algorithm1_solve(inst, budget)?,
        Engine::BranchP => algorithm2_solve(inst, budget)?,
        Engine::BranchK if symmetric => solve_pvc_k(inst, budget)?,
        Engine::BranchK => solve_dpvc_k(inst, budget)?,
        Engine::HybridK => hybrid_k_solve(inst, budget)?,
        Engine::KernelBranchK => kernel_then_solve(inst, budget)?,
        other => return Err(EngineError::NotDecision(other)),
    };
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    /// Total power or support, depending on the engine's objective.
    pub value: u64,
    pub witness: PowerAssignment,
    /// Search counters summed over all decision calls.
    pub stats: SearchStats,
    pub decision_calls: u64,
}

fn measure(objective: Objective, p: &PowerAssignment) -> u64 {
    match objective {
        Objective::Power => p.value(),
        Objective::Support => p.support() as u64,
    }
}

/// Optimum value and a witness; for `tw-approx` a `(1+ε)`-approximation.
pub fn optimize(engine: Engine, inst: &DpvcInstance, cfg: &EngineConfig) -> Result<Optimum, EngineError> {
    let direct = |value: u64, witness: PowerAssignment| Optimum {
        value,
        witness,
        stats: SearchStats::default(),
        decision_calls: 0,
    };
    match engine {
        Engine::Brute => {
            let (v, w) = cfg.oracle.min_power(inst)?;
            Ok(direct(v, w))
        }
        Engine::BruteSupport => {
            let (v, w) = cfg.oracle.min_support_assignment(inst)?;
            Ok(direct(v as u64, w))
        }
        Engine::TwExact | Engine::TwMaxWeight | Engine::TwDegree => {
            let td = cfg.decomposition(inst);
            let (v, w) = match engine {
                Engine::TwMaxWeight => solve_tw_maxweight(inst, &td)?,
                Engine::TwDegree => solve_tw_degree(inst, &td)?,
                _ => solve_tw_exact(inst, &td)?,
            };
            Ok(direct(v, w))
        }
        Engine::TwApprox => {
            let eps = cfg.eps.as_ref().ok_or(EngineError::MissingEpsilon(engine))?;
            let w = fptas_solve(inst, &cfg.decomposition(inst), eps)?;
            Ok(direct(w.value(), w))
        }
        _ => {
            let start = match engine.objective() {
                Objective::Power => lp_lower_bound(inst) as i64,
                Objective::Support => 0,
            };
            let mut stats = SearchStats::default();
            let mut budget = start;
            loop {
                let out = decide(engine, inst, budget)?;
                stats.merge(&out.stats);
                if let Some(w) = out.witness {
                    return Ok(Optimum {
                        value: measure(engine.objective(), &w),
                        witness: w,
                        stats,
                        decision_calls: (budget - start + 1) as u64,
                    });
                }
                budget += 1;
            }
        }
    }
}
