//! Symbolic backward reachability under monotonic abstraction.
//!
//! `c ->A c'` holds when some subword of `c` makes a concrete step to `c'`.
//! The abstract predecessors of an upward-closed set are again upward closed,
//! and their minimal elements are computed generator by generator and rule by
//! rule: the rewritten cell of the successor either takes part in the
//! embedding of the generator or it does not, and in both cases the minimal
//! predecessor is the generator itself with at most one letter rewritten or
//! inserted, plus at most one inserted witness for an existential guard.

use serde::{Deserialize, Serialize};

use super::subword::{minimize_antichain, UpwardClosedSet};
use super::system::{Condition, Context, ParamSystem, Quantifier, StateId, TransitionRule, Word};
use super::ParamError;

fn with_inserted(word: &[StateId], pos: usize, letter: StateId) -> Word {
    let mut w = Vec::with_capacity(word.len() + 1);
    w.extend_from_slice(&word[..pos]);
    w.push(letter);
    w.extend_from_slice(&word[pos..]);
    w
}

fn assemble(left: &[StateId], q: StateId, right: &[StateId]) -> Word {
    let mut w = Vec::with_capacity(left.len() + right.len() + 1);
    w.extend_from_slice(left);
    w.push(q);
    w.extend_from_slice(right);
    w
}

/// Minimal `left' q right'` with `left ⪯ left'`, `right ⪯ right'` satisfying the guard at `q`.
fn complete(guard: Option<&Condition>, left: &[StateId], q: StateId, right: &[StateId], out: &mut Vec<Word>) {
    let Some(g) = guard else {
        out.push(assemble(left, q, right));
        return;
    };
    let in_set = |s: &StateId| g.set.contains(s);
    let (use_left, use_right) = match g.context {
        Context::L => (true, false),
        Context::R => (false, true),
        Context::LR => (true, true),
    };
    match g.quantifier {
        Quantifier::Forall => {
            let ok = (!use_left || left.iter().all(in_set)) && (!use_right || right.iter().all(in_set));
            if ok {
                out.push(assemble(left, q, right));
            }
        }
        Quantifier::Exists => {
            let present = (use_left && left.iter().any(in_set)) || (use_right && right.iter().any(in_set));
            if present {
                out.push(assemble(left, q, right));
                return;
            }
            for &j in &g.set {
                if use_left {
                    for pos in 0..=left.len() {
                        out.push(assemble(&with_inserted(left, pos, j), q, right));
                    }
                }
                if use_right {
                    for pos in 0..=right.len() {
                        out.push(assemble(left, q, &with_inserted(right, pos, j)));
                    }
                }
            }
        }
    }
}

/// Candidate minimal predecessors of `↑w` for one rule (not yet minimized).
pub(crate) fn rule_predecessors(rule: &TransitionRule, w: &[StateId], out: &mut Vec<Word>) {
    // The rewritten cell is used by the embedding: it carries `to` in `w`.
    for (j, &s) in w.iter().enumerate() {
        if s == rule.to {
            complete(rule.guard.as_ref(), &w[..j], rule.from, &w[j + 1..], out);
        }
    }
    // The rewritten cell is not used: `from` is inserted somewhere into `w`.
    for k in 0..=w.len() {
        complete(rule.guard.as_ref(), &w[..k], rule.from, &w[k..], out);
    }
}

/// Minimal elements of the abstract predecessors of `u`.
pub fn abstract_pre(sys: &ParamSystem, u: &UpwardClosedSet) -> UpwardClosedSet {
    let mut candidates = Vec::new();
    for w in u.generators() {
        for rule in &sys.rules {
            rule_predecessors(rule, w, &mut candidates);
        }
    }
    minimize_antichain(candidates)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BackwardVerdict {
    /// No initial configuration lies in the fixpoint.
    Safe,
    /// The fixpoint contains an initial configuration; monotonic abstraction
    /// cannot establish safety. The witness is a generator in `q0*`.
    Inconclusive { witness: Word },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackwardOutcome {
    pub verdict: BackwardVerdict,
    /// The stabilized set `U` of configurations that may reach a bad one.
    pub fixpoint: UpwardClosedSet,
    /// Number of predecessor computations until `U_{i+1} = U_i`.
    pub iterations: usize,
}

impl BackwardOutcome {
    pub fn is_safe(&self) -> bool {
        self.verdict == BackwardVerdict::Safe
    }
}

pub const DEFAULT_ITERATION_CAP: usize = 10_000;

/// `U_0 = ↑F`, `U_{i+1} = U_i ∪ Pre(U_i)` until stable, then test `Init ∩ U`.
pub fn backward_reach(sys: &ParamSystem, iteration_cap: usize) -> Result<BackwardOutcome, ParamError> {
    if sys.bad.is_empty() {
        return Err(ParamError::NoBadGenerators);
    }
    let mut current = minimize_antichain(sys.bad.iter().cloned());
    let mut iterations = 0;
    loop {
        if iterations >= iteration_cap {
            return Err(ParamError::IterationCapExceeded(iteration_cap));
        }
        iterations += 1;
        let pre = abstract_pre(sys, &current);
        let next = current.union(pre.generators().iter().cloned());
        if next == current {
            break;
        }
        current = next;
    }
    let verdict = match current.generators().iter().find(|g| sys.is_initial(g)) {
        Some(w) => BackwardVerdict::Inconclusive { witness: w.clone() },
        None => BackwardVerdict::Safe,
    };
    Ok(BackwardOutcome { verdict, fixpoint: current, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_letter(rule: TransitionRule, bad: Vec<Word>) -> ParamSystem {
        ParamSystem::new("t", vec!["a".into(), "b".into()], 0, vec![rule], bad).unwrap()
    }

    #[test]
    fn unconditional_minimal_predecessors() {
        // a -> b with generator b: {a, ab, ba} minimizes to {a}.
        let sys = two_letter(TransitionRule::unconditional(0, 1), vec![vec![1]]);
        let pre = abstract_pre(&sys, &minimize_antichain(vec![vec![1]]));
        assert_eq!(pre.generators(), &[vec![0]]);
    }

    #[test]
    fn empty_set_has_no_predecessors() {
        let sys = two_letter(TransitionRule::unconditional(0, 1), vec![vec![1]]);
        assert!(abstract_pre(&sys, &UpwardClosedSet::empty()).is_empty());
    }

    #[test]
    fn rules_not_touching_bad_letters_stabilize_at_once() {
        // No rule produces c, the only bad letter.
        let sys = ParamSystem::new(
            "t",
            vec!["a".into(), "b".into(), "c".into()],
            0,
            vec![TransitionRule::unconditional(0, 1), TransitionRule::unconditional(1, 0)],
            vec![vec![2, 2]],
        )
        .unwrap();
        let out = backward_reach(&sys, 100).unwrap();
        assert!(out.is_safe());
        assert_eq!(out.iterations, 1);
        assert_eq!(out.fixpoint.generators(), &[vec![2, 2]]);
    }

    #[test]
    fn missing_generators_rejected() {
        let mut sys = two_letter(TransitionRule::unconditional(0, 1), vec![vec![1]]);
        sys.bad.clear();
        assert!(matches!(backward_reach(&sys, 10), Err(ParamError::NoBadGenerators)));
    }
}
