//! Tree decompositions and the dynamic programs that run on them.

use thiserror::Error;

mod approx;
mod decomposition;
mod dp;
mod td_format;

pub use approx::{
    fptas_guess_and_force, fptas_round_weights, fptas_solve, geometric_levels, round_up, Forced, Rounded,
};
pub use decomposition::{
    min_fill_decomposition, min_fill_tree_decomposition, NiceNode, NiceTreeDecomposition, NodeKind,
    TreeDecomposition,
};
pub use dp::{
    ldpvc_dp, ldpvc_dp_limited, solve_tw_degree, solve_tw_exact, solve_tw_maxweight, DpOutcome, ListInstance,
    DEFAULT_TABLE_LIMIT,
};
pub use td_format::{parse_td, write_td};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwError {
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid power lists: {0}")]
    BadLists(String),
    #[error("a DP table would need {entries} entries (limit {limit})")]
    TableTooLarge { entries: usize, limit: usize },
    #[error("ε must be positive")]
    BadEpsilon,
}
