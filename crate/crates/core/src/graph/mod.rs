//! `(Z[t], X)`-labelled graphs: folding, `u`-components and reading.

mod check;
mod fold;
mod labeled;

use thiserror::Error;

use crate::words::WordsError;

pub use check::{
    assert_u_folded, assert_u_folded_with, default_assert_len, FoldCertificate, FoldViolation,
};
pub use fold::{
    free_fold, graph_from_words, make_u_folded, wedge, FoldOptions, DEFAULT_CLOSURE_POWER,
    DEFAULT_MOVE_BUDGET, DEFAULT_PATH_BUDGET,
};
pub use labeled::{Edge, LabeledGraph, Step, UComponent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error("folding gave up after {moves} moves")]
    Budget { moves: usize },
    #[error("graph is not U-folded")]
    NotFolded,
    #[error("folding certificate failed: {0}")]
    NotUFolded(String),
    #[error("graph dump line {line}: {msg}")]
    Format { line: usize, msg: String },
}
