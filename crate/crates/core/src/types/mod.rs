//! Type alphabets, type automata, periodic types and doubling.

mod automaton;
mod doubling;
mod lasso;

use thiserror::Error;

pub use automaton::{
    build_automaton, concat_admissible, type_alphabet, Last, LetterLabel, State, TypeAutomaton,
    TypeLetter, TypeWord,
};
pub use doubling::{is_doubled, read_type_letter, DoublingReport};
pub use lasso::{enumerate_periodic, Lassos, PeriodicType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypesError {
    #[error("path is not special")]
    NotSpecial,
    #[error("letter {0} is not in the alphabet")]
    UnknownLetter(TypeLetter),
    #[error("periodic type has an empty cycle")]
    EmptyCycle,
    #[error("cannot parse type text {0:?}")]
    Syntax(String),
}
