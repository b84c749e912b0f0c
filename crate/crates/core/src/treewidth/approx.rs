//! `(1+ε)`-approximation by geometric power lists.
//!
//! For each guess `M` of the largest power in an optimal solution, edges
//! demanding more than `M` from one side are forced onto the other side,
//! large residual demands are scaled down to at most `n²`, and the list DP
//! runs with the levels `{0} ∪ {⌈(1+ε)^i⌉}`. The best lifted solution over
//! all guesses is returned.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::instance::{DpvcInstance, Edge, PowerAssignment};

use super::decomposition::NiceTreeDecomposition;
use super::dp::{ldpvc_dp, DpOutcome, ListInstance};
use super::TwError;

/// Residual instance after forcing, on the same vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forced {
    pub residual: DpvcInstance,
    pub forced: PowerAssignment,
}

/// Forces every edge with a demand above `m_guess` onto its other
/// endpoint. Returns `None` when both demands of some edge exceed the guess.
pub fn fptas_guess_and_force(inst: &DpvcInstance, m_guess: u64) -> Option<Forced> {
    let mut forced = PowerAssignment::zeros(inst.num_vertices());
    for e in inst.edges() {
        match (e.w_uv > m_guess, e.w_vu > m_guess) {
            (true, true) => return None,
            (true, false) => forced.set(e.v, forced.get(e.v).max(e.w_vu)),
            (false, true) => forced.set(e.u, forced.get(e.u).max(e.w_uv)),
            (false, false) => {}
        }
    }
    let edges = inst
        .edges()
        .iter()
        .filter(|e| !e.is_covered(forced.get(e.u), forced.get(e.v)))
        .map(|e| Edge::new(e.u, e.v, e.w_uv - forced.get(e.u), e.w_vu - forced.get(e.v)))
        .collect();
    let residual = DpvcInstance::new(inst.num_vertices(), edges).expect("uncovered residual demands are positive");
    Some(Forced { residual, forced })
}

/// Demands scaled by `n²/M` and rounded down, or the identity when
/// `M ≤ n²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rounded {
    pub inst: DpvcInstance,
    /// `(M, n²)` when scaling happened.
    pub scale: Option<(u64, u64)>,
}

impl Rounded {
    /// `⌊(p'+1)·M/n²⌋` per vertex, which covers every original demand `w`
    /// whose rounded value `p'` covered.
    pub fn lift(&self, p: &PowerAssignment) -> PowerAssignment {
        match self.scale {
            None => p.clone(),
            Some((m, n2)) => {
                let n = self.inst.num_vertices();
                let v = (0..n)
                    .map(|i| ((p.get(i) as u128 + 1) * m as u128 / n2 as u128) as u64)
                    .collect();
                PowerAssignment::from_vec(v)
            }
        }
    }
}

pub fn fptas_round_weights(inst: &DpvcInstance) -> Rounded {
    let n2 = (inst.num_vertices() as u64).pow(2);
    let m = inst.max_demand();
    if m <= n2 {
        return Rounded {
            inst: inst.clone(),
            scale: None,
        };
    }
    let r = |w: u64| (w as u128 * n2 as u128 / m as u128) as u64;
    // a side rounded to 0 is covered by power 0, so the edge disappears
    let edges = inst
        .edges()
        .iter()
        .filter(|e| r(e.w_uv) > 0 && r(e.w_vu) > 0)
        .map(|e| Edge::new(e.u, e.v, r(e.w_uv), r(e.w_vu)))
        .collect();
    Rounded {
        inst: DpvcInstance::new(inst.num_vertices(), edges).expect("rounding keeps validity"),
        scale: Some((m, n2)),
    }
}

/// `{0} ∪ {min(⌈(1+ε)^i⌉, top)}` for `i = 0, 1, …` until `top` is reached.
/// The smallest element at least `p` is at most `(1+ε)p` for every integer
/// `1 ≤ p ≤ top`.
pub fn geometric_levels(eps: &BigRational, top: u64) -> Vec<u64> {
    assert!(eps > &BigRational::zero(), "ε must be positive");
    let mut out = vec![0];
    if top == 0 {
        return out;
    }
    let base = BigRational::one() + eps;
    let top_r = BigRational::from_integer(BigInt::from(top));
    let mut x = BigRational::one();
    loop {
        if x >= top_r {
            out.push(top);
            break;
        }
        let c: u64 = x.ceil().to_integer().try_into().expect("below top");
        if out.last() != Some(&c) {
            out.push(c);
        }
        x *= &base;
    }
    out.dedup();
    out
}

/// Smallest element of the sorted `levels` at least `p`.
pub fn round_up(levels: &[u64], p: u64) -> Option<u64> {
    levels.iter().copied().find(|&l| l >= p)
}

/// Feasible assignment of value at most `(1+ε)·OPT` when no demand
/// exceeds `n²`, and at most `(1+ε+1/n)·OPT` in general.
pub fn fptas_solve(inst: &DpvcInstance, td: &NiceTreeDecomposition, eps: &BigRational) -> Result<PowerAssignment, TwError> {
    if eps <= &BigRational::zero() {
        return Err(TwError::BadEpsilon);
    }
    let n = inst.num_vertices();
    let mut best: Option<PowerAssignment> = None;
    for guess in inst.distinct_demands() {
        let Some(f) = fptas_guess_and_force(inst, guess) else {
            continue;
        };
        let rounded = fptas_round_weights(&f.residual);
        let lists = (0..n)
            .map(|v| geometric_levels(eps, rounded.inst.max_demand_from(v)))
            .collect();
        let li = ListInstance::new(rounded.inst.clone(), lists)?;
        let DpOutcome::Optimal { witness, .. } = ldpvc_dp(&li, td)? else {
            unreachable!("each list tops out at the vertex's largest demand");
        };
        let mut p = rounded.lift(&witness);
        for v in 0..n {
            p.add(v, f.forced.get(v));
        }
        let p = inst.trim(&p);
        debug_assert!(inst.is_feasible(&p));
        if best.as_ref().is_none_or(|b| p.value() < b.value()) {
            best = Some(p);
        }
    }
    Ok(best.unwrap_or_else(|| PowerAssignment::zeros(n)))
}
