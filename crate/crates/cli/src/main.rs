use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use pvc_core::engine::{decide, optimize, parse_epsilon, Engine, EngineConfig, Objective};
use pvc_core::format::{parse_instance, parse_solution, write_instance, write_solution};
use pvc_core::kernel::{kernelize, KernelOutcome};
use pvc_core::lp::{check_semi_integrality, solve_rpvc};
use pvc_core::oracle::{Oracle, DEFAULT_EDGE_LIMIT};
use pvc_core::treewidth::parse_td;
use pvc_core::DpvcInstance;

mod gen;
mod sweep;

const OK: u8 = 0;
const NO: u8 = 1;
const USAGE: u8 = 2;
const DISAGREE: u8 = 3;

/// Overrides the brute-force oracle's edge limit.
const ORACLE_ENV: &str = "PVC_ORACLE_EDGE_LIMIT";

#[derive(Parser)]
#[command(name = "pvc", version, about = "Power Vertex Cover solvers")]
struct Cli {
    /// Human-readable tables instead of key=value lines.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance, or decide it when --P or --k is given.
    Solve(SolveArgs),
    /// Check a solution against an instance.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Kernelize for support parameter k.
    Kernel {
        instance: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// Reduced instance path (default: <instance>.kernel).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trace path (default: <out>.trace).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Solve the fractional relaxation exactly.
    Lp {
        instance: PathBuf,
        #[arg(long)]
        check_half: bool,
    },
    /// Generate an instance.
    Gen(gen::GenArgs),
    /// Cross-check engines on a random corpus.
    Sweep(sweep::SweepArgs),
}

#[derive(clap::Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value = "branch-p")]
    engine: Engine,
    /// Total power budget.
    #[arg(long = "P", allow_negative_numbers = true, conflicts_with = "k")]
    p: Option<i64>,
    /// Support budget.
    #[arg(long, allow_negative_numbers = true)]
    k: Option<i64>,
    /// Tree decomposition in PACE .td format.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Approximation parameter as a rational, e.g. 1/2.
    #[arg(long)]
    eps: Option<String>,
    /// Write the witness here instead of stdout.
    #[arg(long)]
    witness: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Solve(args) => cmd_solve(args, cli.pretty),
        Cmd::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Cmd::Kernel { instance, k, out, trace } => cmd_kernel(&instance, k, out, trace),
        Cmd::Lp { instance, check_half } => cmd_lp(&instance, check_half),
        Cmd::Gen(args) => gen::run(args),
        Cmd::Sweep(args) => sweep::run(args, oracle_from_env(), cli.pretty),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn oracle_from_env() -> Oracle {
    std::env::var(ORACLE_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .map_or(Oracle::new(DEFAULT_EDGE_LIMIT), Oracle::new)
}

fn read_instance(path: &Path) -> Result<DpvcInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_solve(args: SolveArgs, pretty: bool) -> Result<u8> {
    let inst = read_instance(&args.instance)?;
    let engine = args.engine;
    let mut cfg = EngineConfig {
        oracle: oracle_from_env(),
        ..EngineConfig::default()
    };
    if let Some(path) = &args.td {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let td = parse_td(&text)?;
        td.validate(&inst)?;
        cfg.td = Some(td.to_nice());
    }
    if let Some(e) = &args.eps {
        cfg.eps = Some(parse_epsilon(e)?);
    }
    let budget = match (args.p, args.k, engine.objective()) {
        (Some(p), None, Objective::Power) => Some(("P", p)),
        (None, Some(k), Objective::Support) => Some(("k", k)),
        (None, None, _) => None,
        (Some(_), None, Objective::Support) => bail!("engine {engine} takes --k, not --P"),
        (None, Some(_), Objective::Power) => bail!("engine {engine} takes --P, not --k"),
        (Some(_), Some(_), _) => unreachable!("clap rejects both"),
    };
    if budget.is_some() && !engine.is_exact() {
        bail!("engine {engine} has no decision mode");
    }
    let start = Instant::now();
    let (answer, witness, stats, calls) = match budget {
        Some((_, b)) if engine.is_decision() => {
            let out = decide(engine, &inst, b)?;
            (Some(out.answer), out.witness, Some(out.stats), 1)
        }
        Some((_, b)) => {
            let o = optimize(engine, &inst, &cfg)?;
            let yes = (o.value as i128) <= b as i128;
            (Some(yes), yes.then_some(o.witness), None, 0)
        }
        None => {
            let o = optimize(engine, &inst, &cfg)?;
            (None, Some(o.witness), Some(o.stats), o.decision_calls)
        }
    };
    let elapsed = start.elapsed();
    if let Some(w) = &witness {
        if let Some(e) = inst.first_uncovered(w) {
            eprintln!("internal error: {engine} returned a witness leaving edge ({} {}) uncovered", e.u + 1, e.v + 1);
            return Ok(DISAGREE);
        }
    }
    let parameter = match (budget, &args.eps) {
        (Some((name, b)), _) => format!("{name}={b}"),
        (None, Some(e)) if engine == Engine::TwApprox => format!("eps={e}"),
        _ => "none".to_string(),
    };
    let mut rows: Vec<(&str, String)> = vec![
        ("instance", args.instance.display().to_string()),
        ("engine", engine.to_string()),
        ("mode", if budget.is_some() { "decision" } else { "optimization" }.to_string()),
        ("parameter", parameter),
    ];
    if let Some(a) = answer {
        rows.push(("answer", if a { "YES" } else { "NO" }.to_string()));
    }
    if let Some(w) = &witness {
        rows.push(("value", w.value().to_string()));
        rows.push(("support", w.support().to_string()));
    }
    if let Some(s) = &stats {
        rows.push(("nodes", s.nodes.to_string()));
        rows.push(("leaves", s.leaves.to_string()));
    }
    if calls > 0 {
        rows.push(("decision_calls", calls.to_string()));
    }
    if let (Some(w), Some(path)) = (&witness, &args.witness) {
        fs::write(path, write_solution(w)).with_context(|| format!("writing {}", path.display()))?;
        rows.push(("witness", path.display().to_string()));
    }
    if pretty {
        rows.push(("wall time", format!("{:.3} ms", elapsed.as_secs_f64() * 1e3)));
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &rows {
            println!("{k:<width$}  {v}");
        }
    } else {
        for (k, v) in &rows {
            println!("{k}={v}");
        }
    }
    if let (Some(w), None) = (&witness, &args.witness) {
        print!("{}", write_solution(w));
    }
    Ok(if answer == Some(false) { NO } else { OK })
}

fn cmd_verify(instance: &Path, solution: &Path) -> Result<u8> {
    let inst = read_instance(instance)?;
    let text = fs::read_to_string(solution).with_context(|| format!("reading {}", solution.display()))?;
    let sol = parse_solution(&text, inst.num_vertices()).with_context(|| format!("parsing {}", solution.display()))?;
    println!("value={}", sol.value());
    println!("support={}", sol.support());
    match inst.first_uncovered(&sol) {
        None => {
            println!("feasible=true");
            Ok(OK)
        }
        Some(e) => {
            println!("feasible=false");
            println!("uncovered={} {} {} {}", e.u + 1, e.v + 1, e.w_uv, e.w_vu);
            Ok(NO)
        }
    }
}

fn cmd_kernel(instance: &Path, k: i64, out: Option<PathBuf>, trace: Option<PathBuf>) -> Result<u8> {
    let inst = read_instance(instance)?;
    let kernel = match kernelize(&inst, k)? {
        KernelOutcome::No => {
            println!("answer=NO");
            return Ok(NO);
        }
        KernelOutcome::Reduced(kr) => kr,
    };
    let out = out.unwrap_or_else(|| {
        let mut p = instance.as_os_str().to_owned();
        p.push(".kernel");
        p.into()
    });
    let trace = trace.unwrap_or_else(|| {
        let mut p = out.as_os_str().to_owned();
        p.push(".trace");
        p.into()
    });
    fs::write(&out, write_instance(&kernel.instance)).with_context(|| format!("writing {}", out.display()))?;
    fs::write(&trace, kernel.trace_text()).with_context(|| format!("writing {}", trace.display()))?;
    println!("answer=REDUCED");
    println!("n={}", kernel.instance.num_vertices());
    println!("m={}", kernel.instance.num_edges());
    println!("k_remaining={}", kernel.k_remaining);
    println!("out={}", out.display());
    println!("trace={}", trace.display());
    Ok(OK)
}

fn cmd_lp(instance: &Path, check_half: bool) -> Result<u8> {
    let inst = read_instance(instance)?;
    let sol = solve_rpvc(&inst)?;
    println!("value={}", sol.value);
    for (v, x) in sol.x.iter().enumerate() {
        println!("x {} {}", v + 1, x);
    }
    if check_half {
        let ok = check_semi_integrality(&sol)?;
        println!("semi_integral={ok}");
        if !ok {
            return Ok(DISAGREE);
        }
    }
    Ok(OK)
}
