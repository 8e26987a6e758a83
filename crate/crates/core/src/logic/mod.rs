//! Vocabularies, clauses, finite models and exhaustive satisfaction checking.

mod eval;
mod model;
mod syntax;

pub use eval::{
    atom_holds, check_model, evaluate_term, falsifying_assignment, holds, literal_holds, negate_goal, Assignment,
    Verdict,
};
pub(crate) use eval::CompiledClause;
pub use model::{index_tuple, tuple_index, Element, FiniteModel, FunctionTable, RelationTable};
pub use syntax::{Atom, Clause, ClauseSet, GoalFormula, Literal, Symbol, SymbolKind, Term, Vocabulary};

use thiserror::Error;

/// Upper bound on the number of variables in a clause handed to grounding.
pub const DEFAULT_MAX_CLAUSE_VARS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("symbol `{0}` declared more than once")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` must have positive arity")]
    ZeroArity(String),
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("symbol `{0}` has no interpretation")]
    Uninterpreted(String),
    #[error("`{symbol}` expects {expected} arguments, found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("variable `{0}` is unassigned")]
    UnassignedVariable(String),
    #[error("empty clause")]
    EmptyClause,
    #[error("goal has an empty conjunction")]
    TrivialGoal,
    #[error("model domain must be nonempty")]
    EmptyDomain,
    #[error("malformed model: {0}")]
    MalformedModel(String),
}
