//! NAS-Bench-style benchmark: a node/edge search space with a synthetic
//! reward and a tabular reward format.

mod nasbench;
mod table;

use thiserror::Error;

use crate::abstraction::AbstractionError;
use crate::flows::OracleError;

pub use nasbench::{build_nasbench_space, edge_list, SplitMix64, SyntheticNasOracle};
pub use table::TableOracle;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("need at least 2 nodes and 2 ops, got {nodes} nodes and {ops} ops")]
    BadDimensions { nodes: usize, ops: usize },
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Abstraction(#[from] AbstractionError),
}
