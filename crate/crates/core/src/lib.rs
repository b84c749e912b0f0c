//! Exact, parameterized and approximate solvers for Power Vertex Cover and
//! its directed variant.

pub mod branching;
pub mod engine;
pub mod format;
pub mod generators;
pub mod instance;
pub mod kernel;
pub mod lp;
pub mod oracle;
pub mod state;
pub mod treewidth;

pub use instance::{DpvcInstance, Edge, InstanceError, PowerAssignment, VertexId};
