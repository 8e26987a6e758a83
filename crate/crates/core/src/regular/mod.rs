//! Automata, length-preserving transducers, transition monoids and the
//! witness models built from them.

mod automata;
mod least;
mod monoid;
mod regex;
mod transducer;
mod witness;

pub use automata::{
    determinize, is_subset, language_equal, minimal_dfa, product, union, upward_closure_nfa, Dfa, Letter, Nfa,
    ProductMode,
};
pub use least::least_interpretation;
pub use monoid::{syntactic_monoid, Monoid};
pub use regex::Regex;
pub use transducer::{forward_iterate, image, ForwardOutcome, Transducer};
pub use witness::{witness_from_rmc, witness_from_unsafe_cone};

use thiserror::Error;

use crate::logic::LogicError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegularError {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("alphabet mismatch: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Vec<String>, right: Vec<String> },
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("clause `{0}` is not Horn in the defined relations")]
    NotHorn(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("witness model fails clause `{clause}` under {assignment}")]
    Validation { clause: String, assignment: String },
    #[error("witness model satisfies the goal under {0}")]
    GoalSatisfied(String),
    #[error("encoding failed: {0}")]
    Encoding(String),
}
