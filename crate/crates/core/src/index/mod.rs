//! Finite-index decisions, coset representatives, joins and level-0
//! commensurator tests.

mod decide;
mod level0;

use thiserror::Error;

use crate::graph::GraphError;
use crate::types::TypesError;

pub use decide::{
    check_subgroup, coset_reps, decide_index, join_and_decide, IndexOptions, IndexVerdict,
    InfiniteWitness, Strategy, DEFAULT_LASSO_BUDGET,
};
pub use level0::{comm_contains_level0, conjugate_graph, free_intersection};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Types(#[from] TypesError),
    #[error("graphs must be U-folded")]
    NotFolded,
    #[error("{0} does not lie in the group")]
    NotSubgroup(String),
    #[error("more than {0} coset representatives")]
    RepBound(usize),
    #[error("only towers without roots are supported here")]
    NotLevelZero,
    #[error("unsupported input: {0}")]
    Unsupported(String),
}
