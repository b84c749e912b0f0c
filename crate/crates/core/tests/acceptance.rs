mod common;

use num_rational::BigRational;
use num_traits::Zero;

use common::RuleChecker;
use pvc_core::branching::{algorithm1_solve_observed, algorithm2_solve_observed, hybrid_k_solve};
use pvc_core::engine::{decide, within_approx_bound, Engine};
use pvc_core::generators::{
    all_labeled_graphs, gen_clique_reduction, gen_lp_gap, gen_random, gen_random_graph, gen_tw_hardness,
    gen_tw_hardness_repaired, gen_zero_vertex, McisInstance, TwHardness,
};
use pvc_core::kernel::{kernelize, KernelOutcome};
use pvc_core::lp::{check_semi_integrality, solve_rpvc, Rational};
use pvc_core::oracle::{brute_force_min_support, brute_force_opt, Oracle};
use pvc_core::treewidth::{fptas_solve, min_fill_decomposition, solve_tw_degree, solve_tw_exact, solve_tw_maxweight};
use pvc_core::DpvcInstance;

struct Report {
    lines: Vec<(usize, bool, String)>,
}

impl Report {
    fn record(&mut self, id: usize, failures: &[String], detail: String) {
        let ok = failures.is_empty();
        let mut line = detail;
        if let Some(first) = failures.first() {
            line.push_str(&format!("; {} failures, first: {first}", failures.len()));
        }
        println!("criterion {id}: {} ({line})", if ok { "PASS" } else { "FAIL" });
        self.lines.push((id, ok, line));
    }
}

/// Criterion 1 corpus: 500 symmetric then 500 asymmetric instances.
fn corpus() -> Vec<DpvcInstance> {
    let mut out = Vec::new();
    for seed in 0..500u64 {
        let n = 2 + (seed % 9) as usize;
        let cap = (n * (n - 1) / 2).min(16);
        let m = (seed as usize * 7 + 3) % (cap + 1);
        out.push(gen_random(n, m, 1 + seed % 5, false, seed).unwrap());
    }
    for seed in 0..500u64 {
        let n = 2 + (seed % 8) as usize;
        let cap = (n * (n - 1) / 2).min(14);
        let m = (seed as usize * 5 + 2) % (cap + 1);
        out.push(gen_random(n, m, 1 + (seed / 3) % 5, true, 10_000 + seed).unwrap());
    }
    out
}

#[derive(Default)]
struct SweepLog {
    oracle: Vec<String>,
    checker: RuleChecker,
    kernel_outcomes: usize,
    kernel: Vec<String>,
    hybrid_runs: usize,
    max_leaf_ratio: f64,
    leaves: Vec<String>,
}

fn sweep(log: &mut SweepLog) {
    for (idx, inst) in corpus().iter().enumerate() {
        let tag = |what: &str| format!("instance {idx} ({inst}): {what}");
        let opt = brute_force_opt(inst).unwrap().opt_value;
        let support = brute_force_min_support(inst).unwrap() as i64;

        // branch-p at every threshold from 0 to opt, observed for criterion 2
        for p in 0..=opt as i64 {
            let out = if inst.is_symmetric() {
                algorithm1_solve_observed(inst, p, &mut log.checker)
            } else {
                algorithm2_solve_observed(inst, p, &mut log.checker)
            }
            .unwrap();
            if out.answer != (p >= opt as i64) {
                log.oracle.push(tag(&format!("branch-p says {} at P={p}, optimum {opt}", out.answer)));
            }
            if let Some(w) = &out.witness {
                if !inst.is_feasible(w) || w.value() as i64 > p {
                    log.oracle.push(tag("branch-p witness invalid"));
                }
            }
        }

        let td = min_fill_decomposition(inst);
        for (name, solve) in [
            ("tw-maxweight", solve_tw_maxweight as fn(_, _) -> _),
            ("tw-degree", solve_tw_degree),
            ("tw-exact", solve_tw_exact),
        ] {
            let (v, w) = solve(inst, &td).unwrap();
            if v != opt || !inst.is_feasible(&w) || w.value() != v {
                log.oracle.push(tag(&format!("{name} gives {v}, optimum {opt}")));
            }
        }

        for k in 0..=support + 1 {
            let want = k >= support;
            let mut direct = None;
            for engine in [Engine::BranchK, Engine::HybridK, Engine::KernelBranchK] {
                let out = decide(engine, inst, k).unwrap();
                if out.answer != want {
                    log.oracle.push(tag(&format!("{engine} says {} at k={k}, min support {support}", out.answer)));
                }
                if let Some(w) = &out.witness {
                    if !inst.is_feasible(w) || w.support() as i64 > k {
                        log.oracle.push(tag(&format!("{engine} witness invalid at k={k}")));
                    }
                }
                match engine {
                    Engine::BranchK => direct = Some(out.answer),
                    Engine::KernelBranchK if Some(out.answer) != direct => {
                        log.kernel.push(tag(&format!("kernel-then-solve {} vs direct {direct:?} at k={k}", out.answer)));
                    }
                    _ => {}
                }
            }

            let hybrid = hybrid_k_solve(inst, k).unwrap();
            log.hybrid_runs += 1;
            let bound = 4u64.pow(k as u32);
            log.max_leaf_ratio = log.max_leaf_ratio.max(hybrid.stats.leaves as f64 / bound as f64);
            if hybrid.stats.leaves > bound {
                log.leaves.push(tag(&format!("{} leaves at k={k}", hybrid.stats.leaves)));
            }

            if let KernelOutcome::Reduced(kr) = kernelize(inst, k).unwrap() {
                log.kernel_outcomes += 1;
                let n = kr.instance.num_vertices() as i64;
                if n > kr.k_remaining * (kr.k_remaining + 1) {
                    log.kernel.push(tag(&format!("kernel has {n} vertices with k'={}", kr.k_remaining)));
                }
            }
        }
    }
}

fn criterion_3() -> (Vec<String>, String) {
    let mut f = Vec::new();
    let inst = gen_lp_gap();
    let apex = 4;
    let lp = solve_rpvc(&inst).unwrap();
    if lp.value != Rational::from_integer(4.into()) {
        f.push(format!("LP value {}", lp.value));
    }
    if !lp.x[apex].is_zero() {
        f.push(format!("apex LP value {}", lp.x[apex]));
    }
    if check_semi_integrality(&lp) != Ok(true) {
        f.push("LP optimum not half-integral".into());
    }
    let exact = brute_force_opt(&inst).unwrap();
    let (tw, tw_w) = solve_tw_exact(&inst, &min_fill_decomposition(&inst)).unwrap();
    if exact.opt_value != 5 || tw != 5 {
        f.push(format!("integral optimum {} / {tw}", exact.opt_value));
    }
    if exact.witness.get(apex) == 0 || tw_w.get(apex) == 0 {
        f.push("integral witness leaves the apex at 0".into());
    }
    (f, format!("LP {}, integral {}", lp.value, exact.opt_value))
}

fn criterion_5() -> (Vec<String>, String) {
    let mut f = Vec::new();
    let eps: Vec<BigRational> = [(1, 10), (1, 2), (1, 1)]
        .iter()
        .map(|&(a, b)| BigRational::new(a.into(), b.into()))
        .collect();
    let mut checked = 0;
    for seed in 0..200u64 {
        let n = 3 + (seed % 6) as usize;
        let cap = (n * (n - 1) / 2).min(12);
        let m = 1 + (seed as usize * 3) % cap;
        let w = ((n * n) as u64).min(1 + seed % 25);
        let inst = gen_random(n, m, w, seed % 2 == 1, 20_000 + seed).unwrap();
        assert!(inst.max_demand() <= (n * n) as u64);
        let opt = brute_force_opt(&inst).unwrap().opt_value;
        let td = min_fill_decomposition(&inst);
        for e in &eps {
            let p = fptas_solve(&inst, &td, e).unwrap();
            checked += 1;
            let bound = (BigRational::from_integer(1.into()) + e) * BigRational::from_integer(opt.into());
            if !inst.is_feasible(&p) || BigRational::from_integer(p.value().into()) > bound {
                f.push(format!("seed {seed} eps {e}: value {} optimum {opt}", p.value()));
            }
        }
    }
    let mut large = 0;
    for seed in 0..60u64 {
        let n = 3 + (seed % 4) as usize;
        // sparse, so the geometric lists stay within the table limit
        let m = (2 + seed as usize % n).min(n * (n - 1) / 2);
        let inst = gen_random(n, m, 500, seed % 2 == 0, 30_000 + seed).unwrap();
        if inst.max_demand() <= (n * n) as u64 {
            continue;
        }
        large += 1;
        let opt = brute_force_opt(&inst).unwrap().opt_value;
        let td = min_fill_decomposition(&inst);
        for e in &eps {
            let p = fptas_solve(&inst, &td, e).unwrap();
            if !inst.is_feasible(&p) || !within_approx_bound(p.value(), opt, n, e) {
                f.push(format!("large seed {seed} eps {e}: value {} optimum {opt}", p.value()));
            }
        }
    }
    (f, format!("{checked} small-weight runs, {large} large-weight instances x 3"))
}

fn criterion_6() -> (Vec<String>, String) {
    let mut f = Vec::new();
    let mut graphs: Vec<_> = (0..=4).flat_map(all_labeled_graphs).collect();
    for seed in 0..100u64 {
        graphs.push(gen_random_graph(5, (seed % 11) as usize, seed).unwrap());
    }
    for g in &graphs {
        let inst = gen_clique_reduction(g, 2).unwrap();
        let opt = brute_force_opt(&inst).unwrap().opt_value;
        let want = (g.n + g.min_vertex_cover()) as u64;
        if opt != want {
            f.push(format!("graph {:?} on {}: optimum {opt}, |V|+VC {want}", g.edges, g.n));
        }
    }
    (f, format!("{} graphs", graphs.len()))
}

fn mcis_family() -> Vec<McisInstance> {
    let cross: Vec<_> = (1..=2).flat_map(|i| (1..=2).map(move |j| ((0, i), (1, j)))).collect();
    let mut out: Vec<McisInstance> = (0..16u32)
        .map(|mask| {
            let edges = cross.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            McisInstance::new(2, 2, edges).unwrap()
        })
        .collect();
    for n in 1..=3 {
        out.push(McisInstance::new(1, n, vec![]).unwrap());
    }
    out
}

fn correspondence(h: &TwHardness, mcis: &McisInstance) -> Option<String> {
    let (opt, _) = solve_tw_exact(&h.instance, &min_fill_decomposition(&h.instance)).unwrap();
    let exists = mcis.has_multicolored_independent_set();
    ((opt == h.target) != exists).then(|| {
        format!(
            "k={} n={} cross {:?}: optimum {opt}, target {}, independent set {}",
            mcis.k, mcis.n, mcis.edges, h.target, exists
        )
    })
}

fn criterion_7() -> (Vec<String>, String) {
    let family = mcis_family();
    let f: Vec<String> = family.iter().filter_map(|m| correspondence(&gen_tw_hardness(m), m)).collect();
    let repaired = family
        .iter()
        .filter(|m| correspondence(&gen_tw_hardness_repaired(m), m).is_some())
        .count();
    (
        f,
        format!("{} instances; repaired construction {repaired} mismatches", family.len()),
    )
}

fn criterion_8() -> (Vec<String>, String) {
    let mut f = Vec::new();
    let mut count = 0;
    for n in 0..=5 {
        for g in all_labeled_graphs(n).filter(|g| g.edges.len() <= 4) {
            count += 1;
            let inst = gen_zero_vertex(&g);
            let opt = brute_force_opt(&inst).unwrap().opt_value;
            let want = (2 * g.edges.len() + g.min_vertex_cover()) as u64;
            if opt != want {
                f.push(format!("graph {:?} on {n}: optimum {opt}, want {want}", g.edges));
            }
            let lp = solve_rpvc(&inst).unwrap();
            if let Some(v) = (0..n).find(|&v| !lp.x[v].is_zero()) {
                f.push(format!("graph {:?} on {n}: LP gives original vertex {v} value {}", g.edges, lp.x[v]));
            }
        }
    }
    (f, format!("{count} graphs"))
}

fn criterion_10() -> (Vec<String>, String) {
    let mut f = Vec::new();
    for seed in 0..500u64 {
        let n = 2 + (seed % 11) as usize;
        let cap = (n * (n - 1) / 2).min(24);
        let m = (seed as usize * 11 + 1) % (cap + 1);
        let inst = gen_random(n, m, 1 + seed % 7, false, 40_000 + seed).unwrap();
        let lp = solve_rpvc(&inst).unwrap();
        if check_semi_integrality(&lp) != Ok(true) {
            let xs: Vec<String> = lp.x.iter().map(|x| x.to_string()).collect();
            f.push(format!("finding: {inst} has basic optimum [{}]", xs.join(", ")));
        }
    }
    (f, "500 instances".into())
}

#[test]
fn acceptance() {
    assert!(Oracle::default().edge_limit >= 16);
    let mut report = Report { lines: Vec::new() };
    let mut log = SweepLog::default();
    sweep(&mut log);

    report.record(1, &log.oracle, "1000 instances, all thresholds".into());
    let mut rule_failures = log.checker.violations.clone();
    rule_failures.extend(log.checker.factor_violations.iter().cloned());
    report.record(
        2,
        &rule_failures,
        format!(
            "{} reductions, {} branchings, {} fallbacks",
            log.checker.reductions, log.checker.branchings, log.checker.fallbacks
        ),
    );
    let (f, d) = criterion_3();
    report.record(3, &f, d);
    report.record(4, &log.kernel, format!("{} reduced outcomes", log.kernel_outcomes));
    let (f, d) = criterion_5();
    report.record(5, &f, d);
    let (f, d) = criterion_6();
    report.record(6, &f, d);
    let (f, d) = criterion_7();
    report.record(7, &f, d);
    let (f, d) = criterion_8();
    report.record(8, &f, d);
    report.record(
        9,
        &log.leaves,
        format!("{} runs, largest leaves/4^k {:.3}", log.hybrid_runs, log.max_leaf_ratio),
    );
    let (f, d) = criterion_10();
    report.record(10, &f, d);

    let failed: Vec<usize> = report.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
