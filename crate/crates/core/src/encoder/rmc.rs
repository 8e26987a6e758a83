use std::collections::BTreeSet;

use crate::logic::{Atom, Clause, GoalFormula, Literal, Term, Vocabulary};
use crate::regular::{Nfa, Transducer};

use super::{fresh_name, monoid_axioms, rel1, star, unit, var, EncodeError, EncodedProblem, BAD, INIT, REACH, STAR, T3, T4, TRANS, UNIT};

/// Constant names chosen for letters and for the states of the two automata
/// and the transducer, disjoint from each other and from the other symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RmcNames {
    pub letters: Vec<String>,
    pub init_states: Vec<String>,
    pub bad_states: Vec<String>,
    pub trans_states: Vec<String>,
    pub renamed: Vec<String>,
}

impl RmcNames {
    pub fn new(m1: &Nfa, m2: &Nfa, tau: &Transducer) -> RmcNames {
        let mut taken: BTreeSet<String> =
            [UNIT, STAR, REACH, INIT, BAD, TRANS, T3, T4].into_iter().map(String::from).collect();
        let mut renamed = Vec::new();
        let mut pick = |names: &[String], what: &str, taken: &mut BTreeSet<String>| -> Vec<String> {
            names
                .iter()
                .map(|n| {
                    let name = fresh_name(n, taken);
                    if &name != n {
                        renamed.push(format!("{what} `{n}` is the constant `{name}`"));
                    }
                    taken.insert(name.clone());
                    name
                })
                .collect()
        };
        let letters = pick(&m1.alphabet, "letter", &mut taken);
        let init_states = pick(&m1.state_names, "initial-set state", &mut taken);
        let bad_states = pick(&m2.state_names, "bad-set state", &mut taken);
        let trans_states = pick(&tau.state_names, "transducer state", &mut taken);
        RmcNames { letters, init_states, bad_states, trans_states, renamed }
    }
}

fn check_alphabets(m1: &Nfa, m2: &Nfa, tau: &Transducer) -> Result<(), EncodeError> {
    for other in [&m2.alphabet, &tau.alphabet] {
        if other != &m1.alphabet {
            return Err(EncodeError::AlphabetMismatch(m1.alphabet.clone(), other.clone()));
        }
    }
    m1.validate().map_err(|e| EncodeError::Unsupported(e.to_string()))?;
    m2.validate().map_err(|e| EncodeError::Unsupported(e.to_string()))?;
    tau.validate().map_err(|e| EncodeError::Unsupported(e.to_string()))?;
    Ok(())
}

/// Clauses 1 to 12 for initial set `L(m1)`, bad set `L(m2)` and transition
/// relation `r_tau`, with goal `∃x (R(x) ∧ Bad(x))`.
///
/// The disjunctive bodies of clauses 5, 6 and 10 become one clause per
/// accepting state; the `→` half of clause 10 is the only non-Horn clause.
pub fn encode_rmc(m1: &Nfa, m2: &Nfa, tau: &Transducer) -> Result<EncodedProblem, EncodeError> {
    check_alphabets(m1, m2, tau)?;
    let names = RmcNames::new(m1, m2, tau);

    let mut vocab = Vocabulary::new();
    vocab.add_constant(UNIT);
    for n in names.letters.iter().chain(&names.init_states).chain(&names.bad_states).chain(&names.trans_states) {
        vocab.add_constant(n.clone());
    }
    vocab.add_function(STAR, 2);
    for r in [REACH, INIT, BAD] {
        vocab.add_relation(r, 1);
    }
    vocab.add_relation(TRANS, 2);
    vocab.add_relation(T3, 3);
    vocab.add_relation(T4, 4);

    let mut p = EncodedProblem::new(vocab, names.letters.clone());
    p.notes = names.renamed.clone();
    let c = |n: &str| Term::constant(n);
    let t3 = |a: Term, b: Term, d: Term| Atom::rel(T3, vec![a, b, d]);
    let t4 = |a: Term, b: Term, d: Term, f: Term| Atom::rel(T4, vec![a, b, d, f]);
    let (x, y, z, v, w) = (var("x"), var("y"), var("z"), var("v"), var("w"));

    monoid_axioms(&mut p, false);

    for q in names.init_states.iter().chain(&names.bad_states) {
        p.push("rmc 2: empty run", Clause::fact(t3(c(q), unit(), c(q))));
    }
    for (aut, states) in [(m1, &names.init_states), (m2, &names.bad_states)] {
        for &(s, a, s2) in &aut.transitions {
            p.push(
                "rmc 3: automaton step",
                Clause::fact(t3(c(&states[s]), c(&names.letters[a]), c(&states[s2]))),
            );
        }
    }
    p.push(
        "rmc 4: run composition",
        Clause::implication(
            vec![t3(x.clone(), y.clone(), z.clone()), t3(z.clone(), v.clone(), w.clone())],
            Some(t3(x.clone(), star(y.clone(), v.clone()), w.clone())),
        ),
    );
    for &f in &m1.accepting {
        p.push(
            "rmc 5: initial words",
            Clause::implication(
                vec![t3(c(&names.init_states[m1.initial]), x.clone(), c(&names.init_states[f]))],
                Some(rel1(INIT, x.clone())),
            ),
        );
    }
    for &f in &m2.accepting {
        p.push(
            "rmc 6: bad words",
            Clause::implication(
                vec![t3(c(&names.bad_states[m2.initial]), x.clone(), c(&names.bad_states[f]))],
                Some(rel1(BAD, x.clone())),
            ),
        );
    }
    p.push("rmc 7: empty transduction", Clause::fact(t4(x.clone(), unit(), unit(), x.clone())));
    for &(s, a, b, s2) in &tau.transitions {
        p.push(
            "rmc 8: transducer step",
            Clause::fact(t4(
                c(&names.trans_states[s]),
                c(&names.letters[a]),
                c(&names.letters[b]),
                c(&names.trans_states[s2]),
            )),
        );
    }
    let (y1, z1) = (var("y1"), var("z1"));
    p.push(
        "rmc 9: transduction composition",
        Clause::implication(
            vec![
                t4(x.clone(), y.clone(), z.clone(), v.clone()),
                t4(v.clone(), y1.clone(), z1.clone(), w.clone()),
            ],
            Some(t4(x.clone(), star(y.clone(), y1), star(z.clone(), z1), w.clone())),
        ),
    );
    let q0 = c(&names.trans_states[tau.initial]);
    let trans = Atom::rel(TRANS, vec![x.clone(), y.clone()]);
    for &f in &tau.accepting {
        p.push(
            "rmc 10: transition (if)",
            Clause::implication(
                vec![t4(q0.clone(), x.clone(), y.clone(), c(&names.trans_states[f]))],
                Some(trans.clone()),
            ),
        );
    }
    let mut only_if = vec![Literal::neg(trans.clone())];
    only_if.extend(
        tau.accepting
            .iter()
            .map(|&f| Literal::pos(t4(q0.clone(), x.clone(), y.clone(), c(&names.trans_states[f])))),
    );
    p.push("rmc 10: transition (only if)", Clause::new(only_if));
    p.push("rmc 11: initial reach", Clause::implication(vec![rel1(INIT, x.clone())], Some(rel1(REACH, x.clone()))));
    p.push(
        "rmc 12: reach step",
        Clause::implication(vec![rel1(REACH, x.clone()), trans], Some(rel1(REACH, y.clone()))),
    );

    p.goal = GoalFormula::new(vec![vec![rel1(REACH, x.clone()), rel1(BAD, x)]]);
    p.validate()?;
    p.rename_clashing_vars();
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_state(alphabet: &[&str]) -> Nfa {
        let mut n = Nfa::new(alphabet.iter().map(|s| s.to_string()).collect(), 1);
        n.accepting.insert(0);
        n
    }

    #[test]
    fn clause_count_follows_the_families() {
        let m1 = single_state(&["a"]);
        let m2 = single_state(&["a"]);
        let tau = Transducer::identity(vec!["a".into()]);
        let p = encode_rmc(&m1, &m2, &tau).unwrap();
        // 1 + |Q1 ∪ Q2| + |δ1| + |δ2| + 1 + |F1| + |F2| + 1 + |δ| + 1 + (|F| + 1) + 1 + 1
        let expected = 1 + 2 + 0 + 1 + 1 + 1 + 1 + 1 + 1 + (1 + 1) + 1 + 1;
        assert_eq!(p.axioms.len(), expected);
        assert_eq!(p.count_family("rmc 10"), 2);
    }

    #[test]
    fn shared_state_names_are_renamed() {
        let m1 = single_state(&["a"]);
        let m2 = single_state(&["a"]);
        let tau = Transducer::identity(vec!["a".into()]);
        let names = RmcNames::new(&m1, &m2, &tau);
        assert_eq!(names.init_states, vec!["s0".to_string()]);
        assert_eq!(names.bad_states, vec!["s0_1".to_string()]);
        assert_eq!(names.renamed.len(), 1);
        let p = encode_rmc(&m1, &m2, &tau).unwrap();
        assert_eq!(p.notes, names.renamed);
    }

    #[test]
    fn alphabet_mismatch_rejected() {
        let m1 = single_state(&["a"]);
        let m2 = single_state(&["b"]);
        let tau = Transducer::identity(vec!["a".into()]);
        assert!(matches!(encode_rmc(&m1, &m2, &tau), Err(EncodeError::AlphabetMismatch(..))));
    }

    #[test]
    fn letters_named_like_variables_survive_the_text_format() {
        let m1 = single_state(&["w", "x"]);
        let m2 = single_state(&["w", "x"]);
        let tau = Transducer::identity(vec!["w".into(), "x".into()]);
        let p = encode_rmc(&m1, &m2, &tau).unwrap();
        for c in &p.axioms {
            assert!(c.vars().iter().all(|v| *v != "w" && *v != "x"), "{c}");
        }
        let text = crate::encoder::emit_native(&p);
        assert_eq!(crate::encoder::parse_native(&text).unwrap(), p);
    }
}
