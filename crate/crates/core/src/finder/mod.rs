//! MACE-style finite model search.
//!
//! Clauses are flattened so that every literal mentions at most one table
//! cell, wide clauses are split with fresh predicates, and each domain size
//! becomes a propositional problem over the cells that is solved by
//! conflict-driven search. Clauses with too many ground instances are
//! instantiated lazily: only instances falsified by a candidate model are
//! added, until a candidate satisfies them all. Every model returned has been
//! re-checked clause by clause.

mod flatten;
mod ground;
mod sat;
mod search;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{FiniteModel, LogicError, Vocabulary};

pub use search::{find_countermodel, find_model, ground, instance_count, GroundLiteral, Grounding, ModelFinder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinderError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("inconsistent signature: {0}")]
    Signature(String),
    #[error("grounding needs {instances} instances, over the cap of {cap}")]
    GroundingTooLarge { instances: u128, cap: u128 },
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("search produced a model that fails validation: {0}")]
    Unsound(String),
}

/// Limits for a search. Time limits apply to each domain size and to the
/// whole run; the node limit bounds branching decisions per size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_size: usize,
    pub per_size: Option<Duration>,
    pub total: Option<Duration>,
    pub node_limit: Option<u64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_size: 12, per_size: None, total: Some(Duration::from_secs(300)), node_limit: None }
    }
}

impl SearchBudget {
    pub fn new(max_size: usize) -> Self {
        SearchBudget { max_size, ..SearchBudget::default() }
    }

    pub fn with_total(mut self, d: Duration) -> Self {
        self.total = Some(d);
        self
    }

    pub fn with_per_size(mut self, d: Duration) -> Self {
        self.per_size = Some(d);
        self
    }

    pub fn with_node_limit(mut self, n: u64) -> Self {
        self.node_limit = Some(n);
        self
    }

    pub fn validate(&self) -> Result<(), FinderError> {
        if self.max_size == 0 {
            return Err(FinderError::InvalidBudget("max size must be positive".into()));
        }
        if self.per_size.is_some_and(|d| d.is_zero()) || self.total.is_some_and(|d| d.is_zero()) {
            return Err(FinderError::InvalidBudget("time limits must be positive".into()));
        }
        if self.node_limit == Some(0) {
            return Err(FinderError::InvalidBudget("node limit must be positive".into()));
        }
        Ok(())
    }
}

/// Search configuration independent of the budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinderOptions {
    /// Least-number symmetry breaking over the constants.
    pub symmetry_breaking: bool,
    /// Perturbs the initial branching order.
    pub seed: Option<u64>,
    /// Worker threads; more than one searches several sizes at once.
    pub threads: usize,
    pub split_clauses: bool,
    /// Symbols to interpret besides those occurring in the clauses.
    pub vocabulary: Option<Vocabulary>,
}

impl Default for FinderOptions {
    fn default() -> Self {
        FinderOptions { symmetry_breaking: true, seed: None, threads: 1, split_clauses: true, vocabulary: None }
    }
}

impl FinderOptions {
    /// Defaults with the seed taken from `FCMV_SEED` when set.
    pub fn from_env() -> Self {
        FinderOptions {
            seed: std::env::var("FCMV_SEED").ok().and_then(|s| s.trim().parse().ok()),
            ..FinderOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeResult {
    ModelFound,
    Exhausted,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeStats {
    pub size: usize,
    pub result: SizeResult,
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub ground_clauses: u64,
    pub lazy_instances: u64,
    pub refinements: u64,
    pub millis: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub sizes: Vec<SizeStats>,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    ModelFound { model: FiniteModel, size: usize, stats: SearchStats },
    /// No model exists at any size searched, up to and including `size`.
    Exhausted { size: usize, stats: SearchStats },
    BudgetExceeded { stats: SearchStats },
}

impl SearchOutcome {
    pub fn model(&self) -> Option<&FiniteModel> {
        match self {
            SearchOutcome::ModelFound { model, .. } => Some(model),
            _ => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::ModelFound { stats, .. }
            | SearchOutcome::Exhausted { stats, .. }
            | SearchOutcome::BudgetExceeded { stats } => stats,
        }
    }
}
