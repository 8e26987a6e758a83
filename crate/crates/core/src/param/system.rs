use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ParamError;

pub type StateId = usize;
/// A configuration: one local state per process, left to right.
pub type Word = Vec<StateId>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Context {
    L,
    R,
    LR,
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Context::L => "L",
            Context::R => "R",
            Context::LR => "LR",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// `forall_I J` or `exists_I J`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Condition {
    pub quantifier: Quantifier,
    pub context: Context,
    pub set: BTreeSet<StateId>,
}

impl Condition {
    pub fn forall(context: Context, set: impl IntoIterator<Item = StateId>) -> Self {
        Condition { quantifier: Quantifier::Forall, context, set: set.into_iter().collect() }
    }

    pub fn exists(context: Context, set: impl IntoIterator<Item = StateId>) -> Self {
        Condition { quantifier: Quantifier::Exists, context, set: set.into_iter().collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionRule {
    pub name: Option<String>,
    pub guard: Option<Condition>,
    pub from: StateId,
    pub to: StateId,
}

impl TransitionRule {
    pub fn unconditional(from: StateId, to: StateId) -> Self {
        TransitionRule { name: None, guard: None, from, to }
    }

    pub fn guarded(guard: Condition, from: StateId, to: StateId) -> Self {
        TransitionRule { name: None, guard: Some(guard), from, to }
    }
}

/// A parameterized linear array: local states, the initial local state,
/// transition rules and the generators of the upward-closed bad set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSystem {
    pub name: String,
    pub states: Vec<String>,
    pub initial: StateId,
    pub rules: Vec<TransitionRule>,
    pub bad: Vec<Word>,
}

impl ParamSystem {
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        initial: StateId,
        rules: Vec<TransitionRule>,
        bad: Vec<Word>,
    ) -> Result<Self, ParamError> {
        let sys = ParamSystem { name: name.into(), states, initial, rules, bad };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.states.is_empty() {
            return Err(ParamError::NoStates);
        }
        let distinct: BTreeSet<_> = self.states.iter().collect();
        if distinct.len() != self.states.len() {
            return Err(ParamError::DuplicateState);
        }
        let n = self.states.len();
        let check = |s: StateId| if s < n { Ok(()) } else { Err(ParamError::UnknownState(s)) };
        check(self.initial)?;
        for r in &self.rules {
            check(r.from)?;
            check(r.to)?;
            if let Some(g) = &r.guard {
                if g.set.is_empty() {
                    return Err(ParamError::EmptyConditionSet);
                }
                g.set.iter().try_for_each(|&s| check(s))?;
            }
        }
        for w in &self.bad {
            if w.is_empty() {
                return Err(ParamError::EmptyGenerator);
            }
            w.iter().try_for_each(|&s| check(s))?;
        }
        Ok(())
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn word_from_names(&self, names: &[&str]) -> Result<Word, ParamError> {
        names
            .iter()
            .map(|n| self.state_id(n).ok_or_else(|| ParamError::UnknownStateName(n.to_string())))
            .collect()
    }

    pub fn format_word(&self, w: &[StateId]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.iter().map(|&s| self.states[s].as_str()).collect::<Vec<_>>().join("·")
    }

    /// Is the word a configuration of the initial set `q0*`?
    pub fn is_initial(&self, w: &[StateId]) -> bool {
        w.iter().all(|&s| s == self.initial)
    }

    /// Distinct condition sets of universal guards, in order of first use.
    pub fn forall_sets(&self) -> Vec<BTreeSet<StateId>> {
        let mut out: Vec<BTreeSet<StateId>> = Vec::new();
        for r in &self.rules {
            if let Some(g) = &r.guard {
                if g.quantifier == Quantifier::Forall && !out.contains(&g.set) {
                    out.push(g.set.clone());
                }
            }
        }
        out
    }

    pub fn describe_rule(&self, r: &TransitionRule) -> String {
        let guard = match &r.guard {
            None => String::new(),
            Some(g) => {
                let q = match g.quantifier {
                    Quantifier::Forall => "forall",
                    Quantifier::Exists => "exists",
                };
                let set: Vec<_> = g.set.iter().map(|&s| self.states[s].as_str()).collect();
                format!("{q} {} {{{}}} ", g.context, set.join(", "))
            }
        };
        format!("{guard}{} -> {}", self.states[r.from], self.states[r.to])
    }
}
