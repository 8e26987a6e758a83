//! Finite models built from regular separating sets.
//!
//! Both constructions interpret words in the transition monoid of a minimal
//! automaton, so that a word's membership is decided by its image. The
//! remaining relations are least fixpoints of their defining clauses, and the
//! result is always re-checked against the full encoding.

use crate::encoder::{encode_param, encode_rmc, EncodedProblem, RmcNames, BAD, INIT, REACH, STAR, T3, T4, TRANS, UNIT};
use crate::logic::{check_model, FiniteModel, RelationTable, Verdict};
use crate::param::ParamSystem;

use super::automata::{minimal_dfa, Nfa};
use super::least::least_interpretation;
use super::monoid::{syntactic_monoid, Monoid};
use super::transducer::Transducer;
use super::RegularError;

fn validate(model: &FiniteModel, problem: &EncodedProblem) -> Result<(), RegularError> {
    match check_model(model, &problem.axioms, &problem.goal)? {
        Verdict::ValidCertificate => Ok(()),
        Verdict::FailingInstance { clause, assignment, .. } => {
            Err(RegularError::Validation { clause: clause.to_string(), assignment: format!("{assignment:?}") })
        }
        Verdict::GoalSatisfied { witness, .. } => Err(RegularError::GoalSatisfied(format!("{witness:?}"))),
    }
}

fn aligned(nfa: &Nfa, alphabet: &[String]) -> Result<Nfa, RegularError> {
    let same_letters = nfa.alphabet.len() == alphabet.len() && nfa.alphabet.iter().all(|a| alphabet.contains(a));
    if !same_letters {
        return Err(RegularError::AlphabetMismatch { left: nfa.alphabet.clone(), right: alphabet.to_vec() });
    }
    nfa.reindex(alphabet)
}

fn monoid_model(m: &Monoid, size: usize, letters: &[String]) -> FiniteModel {
    let mut model = FiniteModel::new(size);
    model.set_constant(UNIT, m.unit);
    for (l, name) in letters.iter().enumerate() {
        model.set_constant(name.clone(), m.letter_map[l]);
    }
    let k = m.size();
    model.set_function(STAR, 2, |a| if a[0] < k && a[1] < k { m.table[a[0]][a[1]] } else { m.unit });
    model
}

fn defining(problem: &EncodedProblem, prefixes: &[&str]) -> Vec<crate::logic::Clause> {
    problem
        .axioms
        .iter()
        .zip(&problem.provenance)
        .filter(|(_, tag)| prefixes.iter().any(|p| tag.starts_with(p)))
        .map(|(c, _)| c.clone())
        .collect()
}

/// Model of the system's encoding built from its unsafe cone `u`, the set of
/// configurations from which a bad one is reachable under monotonic
/// abstraction.
///
/// The domain is the transition monoid of the minimal automaton for `u`,
/// `[R]` is the complement of the image of `u`, and `[In]` and the condition
/// predicates are least fixpoints. Fails with the violated clause if `u` is
/// not closed under abstract predecessors or meets the initial set.
pub fn witness_from_unsafe_cone(sys: &ParamSystem, u: &Nfa) -> Result<FiniteModel, RegularError> {
    let problem = encode_param(sys).map_err(|e| RegularError::Encoding(e.to_string()))?;
    let u = aligned(u, &sys.states)?;
    let m = syntactic_monoid(&minimal_dfa(&u));
    let mut model = monoid_model(&m, m.size(), &problem.letters);
    model.set_relation(
        REACH,
        RelationTable::from_fn(1, m.size(), |a| !m.accepting.contains(&a[0])),
    );
    let targets: Vec<(String, usize)> = problem
        .vocabulary
        .relations
        .iter()
        .filter(|r| r.name != REACH)
        .map(|r| (r.name.clone(), r.arity))
        .collect();
    let target_refs: Vec<(&str, usize)> = targets.iter().map(|(n, a)| (n.as_str(), *a)).collect();
    let clauses = defining(&problem, &["in: base", "in: step", "condition "]);
    for (name, table) in least_interpretation(&clauses, &model, &target_refs)? {
        model.set_relation(name, table);
    }
    validate(&model, &problem)?;
    Ok(model)
}

/// Model of the regular model checking encoding from an inductive invariant
/// `r`: a regular set containing the initial words, closed under the
/// transducer and disjoint from the bad words.
///
/// The domain is the transition monoid of the minimal automaton for `r`
/// followed by one element per state of `m1`, `m2` and `tau` and a zero. `[R]`
/// is the accepting subset; `T3`, `T4`, `Init`, `Bad` and `Trans` are least
/// fixpoints; `*` returns the zero whenever an argument is a state or the
/// zero, which keeps it associative.
pub fn witness_from_rmc(m1: &Nfa, m2: &Nfa, tau: &Transducer, r: &Nfa) -> Result<FiniteModel, RegularError> {
    let problem = encode_rmc(m1, m2, tau).map_err(|e| RegularError::Encoding(e.to_string()))?;
    let names = RmcNames::new(m1, m2, tau);
    let r = aligned(r, &m1.alphabet)?;
    let m = syntactic_monoid(&minimal_dfa(&r));
    let k = m.size();
    let zero = k + names.init_states.len() + names.bad_states.len() + names.trans_states.len();
    let size = zero + 1;
    let mut model = monoid_model(&m, size, &names.letters);
    model.set_function(STAR, 2, |a| if a[0] < k && a[1] < k { m.table[a[0]][a[1]] } else { zero });
    let states = names.init_states.iter().chain(&names.bad_states).chain(&names.trans_states);
    for (i, s) in states.enumerate() {
        model.set_constant(s.clone(), k + i);
    }
    model.set_relation(REACH, RelationTable::from_fn(1, size, |a| m.accepting.contains(&a[0])));
    let clauses = defining(&problem, &["rmc 2", "rmc 3", "rmc 4", "rmc 5", "rmc 6", "rmc 7", "rmc 8", "rmc 9", "rmc 10: transition (if)"]);
    let targets = [(T3, 3), (T4, 4), (INIT, 1), (BAD, 1), (TRANS, 2)];
    for (name, table) in least_interpretation(&clauses, &model, &targets)? {
        model.set_relation(name, table);
    }
    validate(&model, &problem)?;
    Ok(model)
}
