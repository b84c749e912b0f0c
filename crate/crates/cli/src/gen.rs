use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand};

use pvc_core::format::write_instance;
use pvc_core::generators::{
    clique_reduction_value, gen_clique_reduction, gen_lp_gap, gen_random, gen_random_graph, gen_random_mcis,
    gen_tw_hardness, gen_tw_hardness_repaired, gen_zero_vertex,
};

#[derive(Args)]
pub struct GenArgs {
    #[command(subcommand)]
    family: Family,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    /// Uniform random graph with random demands.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        w: u64,
        #[arg(long)]
        directed: bool,
    },
    /// The five-vertex integrality-gap instance.
    LpGap,
    /// Complete-graph reduction of a random graph.
    CliqueReduction {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        big: u64,
    },
    /// Zero-vertex gadget of a random graph.
    ZeroVertex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Choice/checker construction of a random multicolored independent
    /// set instance.
    TwHardness {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Number of cross edges.
        #[arg(long)]
        m: usize,
        /// Checker cliques of demand n+1 plus guard triangles.
        #[arg(long)]
        repaired: bool,
    },
}

pub fn run(args: GenArgs) -> Result<u8> {
    let seed = args.seed;
    let mut header = Vec::new();
    let inst = match args.family {
        Family::Random { n, m, w, directed } => gen_random(n, m, w, directed, seed)?,
        Family::LpGap => gen_lp_gap(),
        Family::CliqueReduction { n, m, big } => {
            let g = gen_random_graph(n, m, seed)?;
            let vc = g.min_vertex_cover();
            header.push(format!("target {}", clique_reduction_value(n, vc, big)));
            gen_clique_reduction(&g, big)?
        }
        Family::ZeroVertex { n, m } => {
            let g = gen_random_graph(n, m, seed)?;
            header.push(format!("target {}", 2 * g.edges.len() + g.min_vertex_cover()));
            gen_zero_vertex(&g)
        }
        Family::TwHardness { k, n, m, repaired } => {
            let mcis = gen_random_mcis(k, n, m, seed)?;
            let tw = if repaired {
                gen_tw_hardness_repaired(&mcis)
            } else {
                gen_tw_hardness(&mcis)
            };
            header.push(format!("target {}", tw.target));
            header.push(format!(
                "independent_set {}",
                if mcis.has_multicolored_independent_set() { "yes" } else { "no" }
            ));
            tw.instance
        }
    };
    let mut text: String = header.iter().map(|h| format!("c {h}\n")).collect();
    text.push_str(&write_instance(&inst));
    match args.out {
        Some(path) => {
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            for h in &header {
                let (k, v) = h.split_once(' ').expect("key value");
                println!("{k}={v}");
            }
        }
        None => print!("{text}"),
    }
    Ok(0)
}
