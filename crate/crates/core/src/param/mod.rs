//! Parameterized linear arrays of finite-state processes.

mod backward;
mod semantics;
mod subword;
mod system;

pub use backward::{abstract_pre, backward_reach, BackwardOutcome, BackwardVerdict, DEFAULT_ITERATION_CAP};
pub use semantics::{bounded_bad_search, condition_holds, reachable_bounded, step, BoundedResult};
pub use subword::{minimize_antichain, subword, UpwardClosedSet};
pub use system::{Condition, Context, ParamSystem, Quantifier, StateId, TransitionRule, Word};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("a system needs at least one local state")]
    NoStates,
    #[error("local state names must be distinct")]
    DuplicateState,
    #[error("state index {0} is not declared")]
    UnknownState(usize),
    #[error("unknown state `{0}`")]
    UnknownStateName(String),
    #[error("condition sets must be nonempty")]
    EmptyConditionSet,
    #[error("bad-set generators must be nonempty words")]
    EmptyGenerator,
    #[error("no bad-set generators given")]
    NoBadGenerators,
    #[error("position {position} outside a configuration of length {length}")]
    PositionOutOfRange { position: usize, length: usize },
    #[error("explicit-state exploration exceeded {0} configurations")]
    NodeCapExceeded(usize),
    #[error("backward reachability did not stabilize within {0} iterations")]
    IterationCapExceeded(usize),
}
