use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::system::{Condition, Context, ParamSystem, Quantifier, StateId, Word};
use super::ParamError;

/// `(c, i) |= cond` for a 1-based position `i`, over the strict left/right contexts.
pub fn condition_holds(c: &[StateId], i: usize, cond: &Condition) -> Result<bool, ParamError> {
    if i == 0 || i > c.len() {
        return Err(ParamError::PositionOutOfRange { position: i, length: c.len() });
    }
    let left = &c[..i - 1];
    let right = &c[i..];
    let in_set = |s: &StateId| cond.set.contains(s);
    Ok(match (cond.quantifier, cond.context) {
        (Quantifier::Forall, Context::L) => left.iter().all(in_set),
        (Quantifier::Forall, Context::R) => right.iter().all(in_set),
        (Quantifier::Forall, Context::LR) => left.iter().all(in_set) && right.iter().all(in_set),
        (Quantifier::Exists, Context::L) => left.iter().any(in_set),
        (Quantifier::Exists, Context::R) => right.iter().any(in_set),
        (Quantifier::Exists, Context::LR) => left.iter().any(in_set) || right.iter().any(in_set),
    })
}

/// All one-step successors of `c`.
pub fn step(sys: &ParamSystem, c: &[StateId]) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for rule in &sys.rules {
        for (idx, &s) in c.iter().enumerate() {
            if s != rule.from {
                continue;
            }
            let enabled = match &rule.guard {
                None => true,
                Some(g) => condition_holds(c, idx + 1, g).expect("position in range"),
            };
            if enabled {
                let mut next = c.to_vec();
                next[idx] = rule.to;
                out.insert(next);
            }
        }
    }
    out
}

/// Exact set of configurations reachable from `q0^length`.
pub fn reachable_bounded(sys: &ParamSystem, length: usize, node_cap: usize) -> Result<BTreeSet<Word>, ParamError> {
    Ok(explore(sys, length, node_cap)?.into_keys().collect())
}

/// Breadth-first exploration from `q0^length`, keeping BFS parents.
fn explore(sys: &ParamSystem, length: usize, node_cap: usize) -> Result<BTreeMap<Word, Option<Word>>, ParamError> {
    let start = vec![sys.initial; length];
    let mut parent: BTreeMap<Word, Option<Word>> = BTreeMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for next in step(sys, &c) {
            if !parent.contains_key(&next) {
                if parent.len() >= node_cap {
                    return Err(ParamError::NodeCapExceeded(node_cap));
                }
                parent.insert(next.clone(), Some(c.clone()));
                queue.push_back(next);
            }
        }
    }
    Ok(parent)
}

fn is_bad(sys: &ParamSystem, c: &[StateId]) -> bool {
    sys.bad.iter().any(|g| super::subword(g, c))
}

/// Result of a bounded explicit-state search for a bad configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundedResult {
    /// A shortest path from an initial configuration to a bad one.
    BadReachable { trace: Vec<Word> },
    /// No bad configuration of length at most `max_length` is reachable.
    NoBadUpTo { max_length: usize, explored: usize },
}

pub fn bounded_bad_search(sys: &ParamSystem, max_length: usize, node_cap: usize) -> Result<BoundedResult, ParamError> {
    let mut explored = 0;
    for length in 0..=max_length {
        let parents = explore(sys, length, node_cap)?;
        explored += parents.len();
        // BTreeMap order is deterministic; prefer the shortest trace within a length.
        let mut best: Option<Vec<Word>> = None;
        for c in parents.keys().filter(|c| is_bad(sys, c)) {
            let mut trace = vec![c.clone()];
            let mut cur = c;
            while let Some(Some(p)) = parents.get(cur) {
                trace.push(p.clone());
                cur = p;
            }
            trace.reverse();
            if best.as_ref().is_none_or(|b| trace.len() < b.len()) {
                best = Some(trace);
            }
        }
        if let Some(trace) = best {
            return Ok(BoundedResult::BadReachable { trace });
        }
    }
    Ok(BoundedResult::NoBadUpTo { max_length, explored })
}
