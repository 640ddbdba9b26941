//! Towers of roots, standard words over `X^±1 ∪ {u^α}`, and the finite
//! partition of infinite exponents used by types.

mod classes;
mod standard;
mod tower;
mod word;

use thiserror::Error;

use crate::zt_poly::ZtError;

pub use classes::{class_index, class_of, critical_exponents, equiv_classes};
pub use standard::{find_hazard, validate_standard};
pub use tower::{validate_tower, Root, Tower, TowerViolation, DEFAULT_DEGREE_BOUND};
pub use word::{invert_word, parse_letters, parse_word, Letter, StandardWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("bad word {text:?} at byte {pos}: {msg}")]
    Syntax {
        text: String,
        pos: usize,
        msg: String,
    },
    #[error("unknown symbol {name:?}")]
    UnknownSymbol { name: String },
    #[error("{name:?} is declared twice")]
    Duplicate { name: String },
    #[error(transparent)]
    Poly(#[from] ZtError),
    #[error("{0}")]
    Format(String),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        source: Box<WordsError>,
    },
    #[error("exponent {exp} is an integer")]
    IntegerExponent { exp: String },
}
