use std::collections::BTreeMap;

use anyhow::{bail, Result};
use clap::Args;
use rayon::prelude::*;

use pvc_core::engine::{optimize, parse_epsilon, within_approx_bound, Engine, EngineConfig, Objective};
use pvc_core::format::write_instance;
use pvc_core::generators::gen_random;
use pvc_core::oracle::Oracle;
use pvc_core::DpvcInstance;

use crate::{DISAGREE, OK};

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Largest vertex count; instance `i` has `2 + i mod (n-1)` vertices.
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Largest edge count.
    #[arg(long, default_value_t = 12)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    w: u64,
    #[arg(long)]
    directed: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated engine names.
    #[arg(long, value_delimiter = ',', default_value = "brute,branch-p,tw-exact")]
    engines: Vec<Engine>,
    #[arg(long)]
    eps: Option<String>,
}

fn corpus_instance(args: &SweepArgs, i: usize) -> Result<DpvcInstance> {
    let n = 2 + i % args.n.saturating_sub(1).max(1);
    let total = n * (n - 1) / 2;
    let m = (i * 7 + 1) % (args.m + 1);
    Ok(gen_random(n, m.min(total), args.w, args.directed, args.seed + i as u64)?)
}

enum Verdict {
    Agree(Vec<(Engine, u64)>),
    Disagree { instance: DpvcInstance, detail: String },
}

fn check(args: &SweepArgs, cfg: &EngineConfig, i: usize) -> Result<Verdict> {
    let inst = corpus_instance(args, i)?;
    let mut values = Vec::new();
    for &e in &args.engines {
        let o = optimize(e, &inst, cfg)?;
        if let Some(edge) = inst.first_uncovered(&o.witness) {
            return Ok(Verdict::Disagree {
                instance: inst.clone(),
                detail: format!("{e} leaves edge ({} {}) uncovered", edge.u + 1, edge.v + 1),
            });
        }
        values.push((e, o.value));
    }
    for objective in [Objective::Power, Objective::Support] {
        let exact: Vec<_> = values
            .iter()
            .filter(|(e, _)| e.objective() == objective && e.is_exact())
            .collect();
        if let Some(&&(first, v)) = exact.first() {
            if let Some(&&(other, w)) = exact.iter().find(|(_, w)| *w != v) {
                return Ok(Verdict::Disagree {
                    instance: inst,
                    detail: format!("{first}={v} but {other}={w}"),
                });
            }
            if let (Some(eps), Objective::Power) = (&cfg.eps, objective) {
                for &(e, a) in values.iter().filter(|(e, _)| !e.is_exact()) {
                    if !within_approx_bound(a, v, inst.num_vertices(), eps) {
                        return Ok(Verdict::Disagree {
                            instance: inst,
                            detail: format!("{e}={a} exceeds the bound over optimum {v}"),
                        });
                    }
                }
            }
        }
    }
    Ok(Verdict::Agree(values))
}

pub fn run(args: SweepArgs, oracle: Oracle, pretty: bool) -> Result<u8> {
    if args.engines.is_empty() {
        bail!("no engines given");
    }
    let eps = args.eps.as_deref().map(parse_epsilon).transpose()?;
    if args.engines.contains(&Engine::TwApprox) && eps.is_none() {
        bail!("tw-approx needs --eps");
    }
    let cfg = EngineConfig {
        oracle,
        td: None,
        eps,
    };
    let verdicts: Vec<Result<Verdict>> = (0..args.count).into_par_iter().map(|i| check(&args, &cfg, i)).collect();
    let mut solved: BTreeMap<Engine, usize> = BTreeMap::new();
    let mut total_value: BTreeMap<Engine, u64> = BTreeMap::new();
    let mut failures = Vec::new();
    for (i, v) in verdicts.into_iter().enumerate() {
        match v? {
            Verdict::Agree(values) => {
                for (e, val) in values {
                    *solved.entry(e).or_default() += 1;
                    *total_value.entry(e).or_default() += val;
                }
            }
            Verdict::Disagree { instance, detail } => failures.push((i, instance, detail)),
        }
    }
    if pretty {
        println!("{:<16} {:>8} {:>12}", "engine", "agreed", "sum of values");
        for e in &args.engines {
            println!(
                "{:<16} {:>8} {:>12}",
                e.name(),
                solved.get(e).copied().unwrap_or(0),
                total_value.get(e).copied().unwrap_or(0)
            );
        }
        println!("{} instances, {} disagreements", args.count, failures.len());
    } else {
        println!("instances={}", args.count);
        for e in &args.engines {
            println!(
                "engine={} agreed={} value_sum={}",
                e.name(),
                solved.get(e).copied().unwrap_or(0),
                total_value.get(e).copied().unwrap_or(0)
            );
        }
        println!("disagreements={}", failures.len());
    }
    for (i, inst, detail) in &failures {
        eprintln!("disagreement on instance {i}: {detail}");
        eprint!("{}", write_instance(inst));
    }
    Ok(if failures.is_empty() { OK } else { DISAGREE })
}
