mod common;

use common::RuleChecker;
use pvc_core::branching::{
    algorithm1_solve, algorithm1_solve_observed, algorithm2_solve, algorithm2_solve_observed, hybrid_k_solve,
    solve_dpvc_k, solve_pvc_k, Rule,
};
use pvc_core::generators::gen_random;
use pvc_core::oracle::{brute_force_min_support, brute_force_opt};
use pvc_core::DpvcInstance;

fn params(seed: u64) -> (usize, usize, u64) {
    let n = 4 + (seed % 6) as usize;
    let max_m = (n * (n - 1) / 2).min(14);
    let m = 2 + (seed as usize * 5) % (max_m - 1);
    let w = 1 + seed % 5;
    (n, m, w)
}

fn check_power_threshold(inst: &DpvcInstance, opt: u64, solve: impl Fn(&DpvcInstance, i64) -> bool) {
    assert!(!solve(inst, opt as i64 - 1), "{inst}");
    assert!(solve(inst, opt as i64), "{inst}");
}

#[test]
fn algorithm2_threshold_matches_oracle() {
    for seed in 0..300 {
        let (n, m, w) = params(seed);
        let inst = gen_random(n, m, w, true, seed).unwrap();
        let opt = brute_force_opt(&inst).unwrap().opt_value;
        check_power_threshold(&inst, opt, |i, p| {
            let out = algorithm2_solve(i, p).unwrap();
            if let Some(wit) = &out.witness {
                assert!(i.is_feasible(wit));
                assert!(wit.value() as i64 <= p);
            }
            out.answer
        });
    }
}

#[test]
fn algorithm1_threshold_matches_oracle() {
    for seed in 0..300 {
        let (n, m, w) = params(seed);
        let inst = gen_random(n, m, w, false, seed).unwrap();
        let opt = brute_force_opt(&inst).unwrap().opt_value;
        check_power_threshold(&inst, opt, |i, p| {
            let out = algorithm1_solve(i, p).unwrap();
            if let Some(wit) = &out.witness {
                assert!(i.is_feasible(wit));
                assert!(wit.value() as i64 <= p);
            }
            out.answer
        });
    }
}

#[test]
fn support_solvers_match_oracle() {
    for seed in 0..200 {
        let (n, m, w) = params(seed);
        let sym = gen_random(n, m, w, false, seed).unwrap();
        let k = brute_force_min_support(&sym).unwrap() as i64;
        assert!(solve_pvc_k(&sym, k).unwrap().answer);
        assert!(k == 0 || !solve_pvc_k(&sym, k - 1).unwrap().answer);

        let dir = gen_random(n, m, w, true, seed).unwrap();
        let k = brute_force_min_support(&dir).unwrap() as i64;
        for solve in [solve_dpvc_k, hybrid_k_solve] {
            let yes = solve(&dir, k).unwrap();
            assert!(yes.answer);
            let wit = yes.witness.unwrap();
            assert!(dir.is_feasible(&wit) && wit.support() as i64 <= k);
            if k > 0 {
                assert!(!solve(&dir, k - 1).unwrap().answer);
            }
        }
        let h = hybrid_k_solve(&dir, k).unwrap();
        assert!(h.stats.leaves <= 4u64.pow(k as u32));
    }
}

#[test]
fn every_rule_preserves_the_optimum() {
    let mut checker = RuleChecker::default();
    for seed in 0..150 {
        let (n, m, w) = params(seed);
        let dir = gen_random(n, m, w, true, seed).unwrap();
        let opt = brute_force_opt(&dir).unwrap().opt_value as i64;
        algorithm2_solve_observed(&dir, opt, &mut checker).unwrap();
        algorithm2_solve_observed(&dir, opt - 1, &mut checker).unwrap();
        let sym = gen_random(n, m, w, false, seed).unwrap();
        let opt = brute_force_opt(&sym).unwrap().opt_value as i64;
        algorithm1_solve_observed(&sym, opt - 1, &mut checker).unwrap();
    }
    assert!(checker.violations.is_empty(), "{:?}", checker.violations);
    assert!(checker.factor_violations.is_empty(), "{:?}", checker.factor_violations);
    assert_eq!(checker.fallbacks, 0);
    assert!(checker.reductions > 0 && checker.branchings > 0);
}

#[test]
fn weight_two_sweep_matches_oracle() {
    let mut seen = std::collections::BTreeSet::new();
    for seed in 0..500 {
        let (n, m, _) = params(seed);
        let inst = gen_random(n, m, 2, true, seed + 10_000).unwrap();
        let opt = brute_force_opt(&inst).unwrap().opt_value as i64;
        let out = algorithm2_solve(&inst, opt).unwrap();
        assert!(out.answer);
        assert!(!algorithm2_solve(&inst, opt - 1).unwrap().answer);
        assert_eq!(out.stats.applied(Rule::Fallback), 0);
        seen.extend(out.stats.rules.keys().copied());
    }
    assert!(seen.iter().any(|r| matches!(r, Rule::W2Case(..))), "{seen:?}");
}
