use std::collections::{BTreeMap, BTreeSet};

use crate::logic::{Atom, Clause, GoalFormula, Term, Vocabulary};
use crate::param::{Context, ParamSystem, Quantifier, StateId};

use super::{fresh_name, monoid_axioms, pattern_var, rel1, star, unit, var, word_term, EncodeError, EncodedProblem, IN, REACH, STAR, UNIT};

/// Relation symbol for the `∀` condition set `set`: `P_` followed by the
/// sorted member names.
pub fn condition_relation(sys: &ParamSystem, set: &BTreeSet<StateId>) -> String {
    let mut names: Vec<&str> = set.iter().map(|&s| sys.states[s].as_str()).collect();
    names.sort_unstable();
    format!("P_{}", names.join("_"))
}

/// The first-order encoding `Φ_P` of a parameterized system with goal `Ψ_F`.
///
/// Reachable configurations `c` satisfy `R(t_c)` in every model of the axioms;
/// `Ψ_F` says some `R`-element has a bad generator as a subword.
pub fn encode_param(sys: &ParamSystem) -> Result<EncodedProblem, EncodeError> {
    if sys.states.is_empty() {
        return Err(EncodeError::NoStates);
    }
    sys.validate().map_err(|e| EncodeError::Unsupported(e.to_string()))?;

    let sets = sys.forall_sets();
    let mut relations = vec![REACH.to_string(), IN.to_string()];
    relations.extend(sets.iter().map(|j| condition_relation(sys, j)));
    let mut taken: BTreeSet<String> = relations.iter().cloned().collect();
    taken.insert(UNIT.into());
    taken.insert(STAR.into());

    let mut notes = Vec::new();
    let mut letters = Vec::with_capacity(sys.states.len());
    for s in &sys.states {
        let name = fresh_name(s, &taken);
        if &name != s {
            notes.push(format!("state `{s}` is the constant `{name}`"));
        }
        taken.insert(name.clone());
        letters.push(name);
    }

    let mut vocab = Vocabulary::new();
    vocab.add_constant(UNIT);
    for l in &letters {
        vocab.add_constant(l.clone());
    }
    vocab.add_function(STAR, 2);
    for r in &relations {
        vocab.add_relation(r.clone(), 1);
    }

    let mut p = EncodedProblem::new(vocab, letters.clone());
    p.notes = notes;
    let q = |s: StateId| Term::constant(&letters[s]);
    let (x, y, z, w) = (var("x"), var("y"), var("z"), var("w"));

    monoid_axioms(&mut p, true);

    p.push("in: base", Clause::fact(rel1(IN, unit())));
    p.push(
        "in: step",
        Clause::implication(vec![rel1(IN, x.clone())], Some(rel1(IN, star(x.clone(), q(sys.initial))))),
    );
    p.push("in: reach", Clause::implication(vec![rel1(IN, x.clone())], Some(rel1(REACH, x.clone()))));

    let set_names: BTreeMap<&BTreeSet<StateId>, String> =
        sets.iter().map(|j| (j, condition_relation(sys, j))).collect();
    for j in &sets {
        let name = &set_names[j];
        p.push(format!("condition {name}: base"), Clause::fact(rel1(name, unit())));
        for &s in j {
            p.push(
                format!("condition {name}: step {}", letters[s]),
                Clause::implication(vec![rel1(name, x.clone())], Some(rel1(name, star(x.clone(), q(s))))),
            );
        }
    }

    for (k, rule) in sys.rules.iter().enumerate() {
        let tag = format!("rule {}: {}", k + 1, sys.describe_rule(rule));
        let before = rel1(REACH, star(star(x.clone(), q(rule.from)), y.clone()));
        let after = rel1(REACH, star(star(x.clone(), q(rule.to)), y.clone()));
        match &rule.guard {
            None => p.push(tag, Clause::implication(vec![before], Some(after))),
            Some(g) if g.quantifier == Quantifier::Forall => {
                let name = &set_names[&g.set];
                let mut body = vec![before];
                if matches!(g.context, Context::L | Context::LR) {
                    body.push(rel1(name, x.clone()));
                }
                if matches!(g.context, Context::R | Context::LR) {
                    body.push(rel1(name, y.clone()));
                }
                p.push(tag, Clause::implication(body, Some(after)));
            }
            Some(g) => {
                for &s in &g.set {
                    let witness = star(star(z.clone(), q(s)), w.clone());
                    let mut sides = Vec::new();
                    if matches!(g.context, Context::L | Context::LR) {
                        sides.push(("left", x.clone()));
                    }
                    if matches!(g.context, Context::R | Context::LR) {
                        sides.push(("right", y.clone()));
                    }
                    for (side, ctx) in sides {
                        p.push(
                            format!("{tag} [witness {} on the {side}]", letters[s]),
                            Clause::implication(
                                vec![before.clone(), Atom::Eq(ctx, witness.clone())],
                                Some(after.clone()),
                            ),
                        );
                    }
                }
            }
        }
    }

    p.goal = bad_goal(&sys.bad, &letters);
    p.validate()?;
    p.rename_clashing_vars();
    Ok(p)
}

/// `∃x0 ... xn. R(x0 * w1 * x1 * ... * wn * xn)` for each generator.
pub(crate) fn bad_goal(bad: &[Vec<StateId>], letters: &[String]) -> GoalFormula {
    GoalFormula::new(
        bad.iter()
            .map(|g| {
                let mut items = vec![Term::var(pattern_var(0))];
                for (i, &s) in g.iter().enumerate() {
                    items.push(Term::constant(&letters[s]));
                    items.push(Term::var(pattern_var(i + 1)));
                }
                vec![rel1(REACH, word_term(items))]
            })
            .collect(),
    )
}
