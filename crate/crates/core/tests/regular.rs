mod common;

use std::collections::BTreeSet;

use common::{rng, subword_dp};
use fcmv::encoder::{encode_param, REACH};
use fcmv::frontend::{parse_automaton, SpecBody};
use fcmv::logic::{check_model, evaluate_term, Assignment, Atom, Clause, FiniteModel, RelationTable, Term, Verdict};
use fcmv::param::{backward_reach, step, ParamSystem, DEFAULT_ITERATION_CAP};
use fcmv::regular::{
    determinize, forward_iterate, image, language_equal, least_interpretation, minimal_dfa, product,
    syntactic_monoid, upward_closure_nfa, witness_from_rmc, witness_from_unsafe_cone, ForwardOutcome, Nfa,
    ProductMode, RegularError, Transducer,
};
use proptest::prelude::*;
use rand::Rng;

fn letters(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("l{i}")).collect()
}

/// Membership by direct subset simulation.
fn member(n: &Nfa, w: &[usize]) -> bool {
    let mut cur = BTreeSet::from([n.initial]);
    for &a in w {
        cur = n.transitions.iter().filter(|(p, b, _)| *b == a && cur.contains(p)).map(|t| t.2).collect();
    }
    cur.iter().any(|s| n.accepting.contains(s))
}

fn related(t: &Transducer, w: &[usize], u: &[usize]) -> bool {
    let mut cur = BTreeSet::from([t.initial]);
    for (&a, &b) in w.iter().zip(u) {
        cur = t.transitions.iter().filter(|(p, x, y, _)| *x == a && *y == b && cur.contains(p)).map(|t| t.3).collect();
    }
    w.len() == u.len() && cur.iter().any(|s| t.accepting.contains(s))
}

fn random_nfa(r: &mut rand_chacha::ChaCha8Rng, k: usize) -> Nfa {
    let states = r.gen_range(1..=4);
    let mut n = Nfa::new(letters(k), states);
    for p in 0..states {
        for a in 0..k {
            for q in 0..states {
                if r.gen_bool(0.3) {
                    n.add_transition(p, a, q);
                }
            }
        }
        if r.gen_bool(0.4) {
            n.accepting.insert(p);
        }
    }
    n
}

fn all_words(k: usize, max: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..=max).flat_map(move |len| Nfa::words_of_length(k, len))
}

proptest! {
    #[test]
    fn minimal_dfa_preserves_the_language(seed in any::<u64>(), k in 1usize..=3) {
        let n = random_nfa(&mut rng(seed), k);
        let d = determinize(&n);
        let m = minimal_dfa(&n);
        prop_assert!(m.num_states() <= d.num_states());
        prop_assert_eq!(m.minimize(), m.clone());
        for w in all_words(k, 6) {
            prop_assert_eq!(m.accepts(&w), member(&n, &w));
            prop_assert_eq!(d.accepts(&w), member(&n, &w));
        }
    }

    #[test]
    fn products_follow_set_operations(seed in any::<u64>(), k in 1usize..=3) {
        let mut r = rng(seed);
        let (a, b) = (random_nfa(&mut r, k), random_nfa(&mut r, k));
        let meet = product(&a, &b, ProductMode::Intersection).unwrap();
        let minus = product(&a, &b, ProductMode::Difference).unwrap();
        for w in all_words(k, 5) {
            prop_assert_eq!(meet.accepts(&w), member(&a, &w) && member(&b, &w));
            prop_assert_eq!(minus.accepts(&w), member(&a, &w) && !member(&b, &w));
        }
        prop_assert!(product(&a, &a, ProductMode::Difference).unwrap().is_empty());
        let co = minimal_dfa(&a).complement().to_nfa();
        prop_assert!(product(&a, &co, ProductMode::Intersection).unwrap().is_empty());
    }

    #[test]
    fn upward_closure_is_subword_membership(
        gens in proptest::collection::vec(proptest::collection::vec(0usize..3, 0..=3), 0..4),
    ) {
        let n = upward_closure_nfa(&gens, letters(3));
        for w in all_words(3, 6) {
            prop_assert_eq!(n.accepts(&w), gens.iter().any(|g| subword_dp(g, &w)));
        }
    }

    #[test]
    fn transition_monoid_recognizes_and_is_a_homomorphism(seed in any::<u64>(), k in 1usize..=3) {
        let mut r = rng(seed);
        let n = random_nfa(&mut r, k);
        let d = minimal_dfa(&n);
        let m = syntactic_monoid(&d);
        prop_assert!(m.check_laws().is_ok());
        for w in all_words(k, 6) {
            prop_assert_eq!(m.accepts(&w), d.accepts(&w));
        }
        for _ in 0..50 {
            let u: Vec<usize> = (0..r.gen_range(0..6)).map(|_| r.gen_range(0..k)).collect();
            let v: Vec<usize> = (0..r.gen_range(0..6)).map(|_| r.gen_range(0..k)).collect();
            let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
            prop_assert_eq!(m.eval_word(&uv), m.mul(m.eval_word(&u), m.eval_word(&v)));
        }
    }

    #[test]
    fn image_matches_pair_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = random_nfa(&mut r, 2);
        let mut t = Transducer::new(letters(2), r.gen_range(1..=3));
        for p in 0..t.num_states() {
            for a in 0..2 {
                for b in 0..2 {
                    for q in 0..t.num_states() {
                        if r.gen_bool(0.25) {
                            t.add_transition(p, a, b, q);
                        }
                    }
                }
            }
            if r.gen_bool(0.5) {
                t.accepting.insert(p);
            }
        }
        let img = image(&t, &l).unwrap();
        for len in 0..=5 {
            let words: Vec<Vec<usize>> = Nfa::words_of_length(2, len).collect();
            for u in &words {
                let expected = words.iter().any(|w| member(&l, w) && related(&t, w, u));
                prop_assert_eq!(img.accepts(u), expected);
            }
        }
    }
}

/// Moves the single token one position to the right.
fn shift_by_one() -> Transducer {
    let mut t = Transducer::new(vec!["n".into(), "t".into()], 3);
    t.add_transition(0, 0, 0, 0);
    t.add_transition(0, 1, 0, 1);
    t.add_transition(1, 0, 1, 2);
    t.add_transition(2, 0, 0, 2);
    t.accepting.insert(2);
    t
}

#[test]
fn shifting_a_token_from_the_left_end() {
    let init = parse_automaton(&std::fs::read_to_string(common::spec_path("token_init.aut")).unwrap()).unwrap();
    let img = image(&shift_by_one(), &init).unwrap();
    for len in 0..=6 {
        for u in Nfa::words_of_length(2, len) {
            let expected = len >= 2 && u[1] == 1 && u.iter().filter(|&&x| x == 1).count() == 1;
            assert_eq!(img.accepts(&u), expected, "{u:?}");
        }
    }
}

fn rmc(name: &str) -> fcmv::frontend::RmcSpec {
    match common::spec(name).body {
        SpecBody::Rmc(r) => r,
        _ => unreachable!(),
    }
}

#[test]
fn token_passing_converges_to_exactly_one_token() {
    let r = rmc("token");
    let exactly_one = parse_automaton(&std::fs::read_to_string(common::spec_path("token_invariant.aut")).unwrap()).unwrap();
    match forward_iterate(&r.trans, &r.init, 20).unwrap() {
        ForwardOutcome::Fixpoint { language, .. } => {
            let l = language.to_nfa();
            assert!(language_equal(&l, &exactly_one).unwrap());
            assert!(fcmv::regular::is_subset(&image(&r.trans, &l).unwrap(), &l).unwrap());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn cycling_relabelling_converges_within_the_alphabet_size() {
    let k = 4;
    let mut t = Transducer::new(letters(k), 1);
    for a in 0..k {
        t.add_transition(0, a, (a + 1) % k, 0);
    }
    t.accepting.insert(0);
    let mut init = Nfa::new(letters(k), 1);
    init.add_transition(0, 0, 0);
    init.accepting.insert(0);
    match forward_iterate(&t, &init, 20).unwrap() {
        ForwardOutcome::Fixpoint { iterations, .. } => assert!(iterations <= k + 1, "{iterations}"),
        other => panic!("{other:?}"),
    }
}

fn system(name: &str) -> ParamSystem {
    match common::spec(name).body {
        SpecBody::System(s) => s,
        _ => unreachable!(),
    }
}

fn unsafe_cone(sys: &ParamSystem) -> Nfa {
    let out = backward_reach(sys, DEFAULT_ITERATION_CAP).unwrap();
    upward_closure_nfa(out.fixpoint.generators(), sys.states.clone())
}

#[test]
fn me1_witness_from_the_unsafe_cone() {
    let sys = system("me1");
    let model = witness_from_unsafe_cone(&sys, &unsafe_cone(&sys)).unwrap();
    let p = encode_param(&sys).unwrap();
    assert_eq!(check_model(&model, &p.axioms, &p.goal).unwrap(), Verdict::ValidCertificate);
}

/// Is a bad configuration reachable from `w` when steps may first drop letters?
fn abstractly_unsafe(sys: &ParamSystem, w: &[usize]) -> bool {
    let bad = |c: &[usize]| sys.bad.iter().any(|g| subword_dp(g, c));
    let mut seen = BTreeSet::from([w.to_vec()]);
    let mut todo = vec![w.to_vec()];
    while let Some(c) = todo.pop() {
        if bad(&c) {
            return true;
        }
        for mask in 0..1u32 << c.len() {
            let sub: Vec<usize> = c.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s).collect();
            for d in step(sys, &sub).into_iter().chain(std::iter::once(sub.clone())) {
                if seen.insert(d.clone()) {
                    todo.push(d);
                }
            }
        }
    }
    false
}

#[test]
fn witness_reach_relation_is_abstract_safety() {
    let sys = system("me1");
    let model = witness_from_unsafe_cone(&sys, &unsafe_cone(&sys)).unwrap();
    let p = encode_param(&sys).unwrap();
    let reach = model.relation(REACH).unwrap();
    for len in 0..=5 {
        for w in Nfa::words_of_length(sys.states.len(), len) {
            let v = evaluate_term(&model, &p.word_term(&w), &Assignment::new()).unwrap();
            assert_eq!(reach.contains(&[v]), !abstractly_unsafe(&sys, &w), "{}", sys.format_word(&w));
        }
    }
}

#[test]
fn ruleless_system_witness() {
    let sys = ParamSystem::new("idle", vec!["q".into(), "p".into()], 1, vec![], vec![vec![0, 0]]).unwrap();
    let model = witness_from_unsafe_cone(&sys, &upward_closure_nfa(&[vec![0, 0]], sys.states.clone())).unwrap();
    let p = encode_param(&sys).unwrap();
    let reach = model.relation(REACH).unwrap();
    for len in 0..=5 {
        for w in Nfa::words_of_length(2, len) {
            let v = evaluate_term(&model, &p.word_term(&w), &Assignment::new()).unwrap();
            assert_eq!(reach.contains(&[v]), w.iter().filter(|&&s| s == 0).count() <= 1);
        }
    }
}

#[test]
fn cone_meeting_the_initial_set_is_rejected() {
    let sys = ParamSystem::new("idle", vec!["q".into()], 0, vec![], vec![vec![0, 0]]).unwrap();
    match witness_from_unsafe_cone(&sys, &upward_closure_nfa(&[vec![0, 0]], sys.states.clone())) {
        Err(RegularError::Validation { clause, .. }) => assert_eq!(clause, "~In(x) | R(x)"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn rmc_witnesses() {
    let r = rmc("token");
    let exactly_one = parse_automaton(&std::fs::read_to_string(common::spec_path("token_invariant.aut")).unwrap()).unwrap();
    let model = witness_from_rmc(&r.init, &r.bad, &r.trans, &exactly_one).unwrap();
    let p = fcmv::encoder::encode_rmc(&r.init, &r.bad, &r.trans).unwrap();
    assert!(check_model(&model, &p.axioms, &p.goal).unwrap().is_valid());
    let everything = Nfa::universal(r.init.alphabet.clone());
    assert!(matches!(witness_from_rmc(&r.init, &r.bad, &r.trans, &everything), Err(RegularError::GoalSatisfied(_))));
}

#[test]
fn least_interpretation_is_below_every_closed_set() {
    let e = Term::constant("e");
    let x = Term::var("x");
    let clauses = vec![
        Clause::fact(Atom::rel("In", vec![e.clone()])),
        Clause::implication(
            vec![Atom::rel("In", vec![x.clone()])],
            Some(Atom::rel("In", vec![Term::bin("*", x, Term::constant("g"))])),
        ),
    ];
    let mut r = rng(7);
    for n in 1..=4 {
        for _ in 0..20 {
            let table: Vec<usize> = (0..n * n).map(|_| r.gen_range(0..n)).collect();
            let mut base = FiniteModel::new(n);
            base.set_constant("e", r.gen_range(0..n));
            base.set_constant("g", r.gen_range(0..n));
            base.set_function("*", 2, |a| table[a[0] * n + a[1]]);
            let least = least_interpretation(&clauses, &base, &[("In", 1)]).unwrap().remove("In").unwrap();
            let mut with_least = base.clone();
            with_least.set_relation("In", least.clone());
            assert!(clauses.iter().all(|c| fcmv::logic::holds(&with_least, c).unwrap()));
            for bits in 0..1u32 << n {
                let candidate = RelationTable::from_fn(1, n, |a| bits >> a[0] & 1 == 1);
                let mut m = base.clone();
                m.set_relation("In", candidate.clone());
                if clauses.iter().all(|c| fcmv::logic::holds(&m, c).unwrap()) {
                    assert!(least.is_subset(&candidate));
                }
            }
        }
    }
}
