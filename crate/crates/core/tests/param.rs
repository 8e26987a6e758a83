mod common;

use std::collections::BTreeSet;

use common::{brute_force_pre, random_system, rng, subword_dp, words_up_to};
use fcmv::frontend::SpecBody;
use fcmv::param::{
    abstract_pre, backward_reach, minimize_antichain, reachable_bounded, step, subword, ParamSystem, TransitionRule,
    UpwardClosedSet, DEFAULT_ITERATION_CAP,
};
use proptest::prelude::*;
use rand::Rng;

fn system(name: &str) -> ParamSystem {
    match common::spec(name).body {
        SpecBody::System(s) => s,
        _ => unreachable!(),
    }
}

#[test]
fn shipped_specs_parse_to_the_case_studies() {
    let me1 = system("me1");
    assert_eq!((me1.states.len(), me1.rules.len()), (4, 6));
    assert_eq!(me1.bad, vec![me1.word_from_names(&["red", "red"]).unwrap()]);
    let me2 = system("me2");
    assert_eq!((me2.states.len(), me2.rules.len()), (5, 6));
    assert_eq!(me2.bad, vec![me2.word_from_names(&["q4", "q4"]).unwrap()]);
}

#[test]
fn unconditional_rule_predecessors_of_a_single_letter() {
    let sys = ParamSystem::new("ab", vec!["a".into(), "b".into()], 0, vec![TransitionRule::unconditional(0, 1)], vec![vec![1]])
        .unwrap();
    let pre = abstract_pre(&sys, &minimize_antichain([vec![1]]));
    assert_eq!(pre.generators(), &[vec![0]]);
    assert_eq!(brute_force_pre(&sys, &[1]), BTreeSet::from([vec![0]]));
}

#[test]
fn backward_verdicts_of_the_case_studies() {
    assert!(backward_reach(&system("me1"), DEFAULT_ITERATION_CAP).unwrap().is_safe());
    assert!(!backward_reach(&system("me2"), DEFAULT_ITERATION_CAP).unwrap().is_safe());
}

#[test]
fn me1_reachable_sets() {
    let sys = system("me1");
    assert_eq!(reachable_bounded(&sys, 0, 1000).unwrap(), BTreeSet::from([vec![]]));
    assert_eq!(reachable_bounded(&sys, 1, 1000).unwrap().len(), 4);
    let red = sys.state_id("red").unwrap();
    for n in 2..=6 {
        for c in reachable_bounded(&sys, n, 1_000_000).unwrap() {
            assert!(c.iter().filter(|&&s| s == red).count() <= 1, "{}", sys.format_word(&c));
        }
    }
}

proptest! {
    #[test]
    fn subword_agrees_with_dynamic_programming(
        u in proptest::collection::vec(0usize..3, 0..=12),
        v in proptest::collection::vec(0usize..3, 0..=12),
    ) {
        prop_assert_eq!(subword(&u, &v), subword_dp(&u, &v));
    }

    #[test]
    fn minimization_is_idempotent_and_keeps_the_denotation(
        words in proptest::collection::vec(proptest::collection::vec(0usize..3, 0..=4), 0..6),
    ) {
        let m = minimize_antichain(words.clone());
        prop_assert_eq!(minimize_antichain(m.generators().to_vec()), m.clone());
        for g in m.generators() {
            for h in m.generators() {
                prop_assert!(g == h || !subword(g, h));
            }
        }
        for c in words_up_to(3, 6) {
            prop_assert_eq!(m.contains(&c), words.iter().any(|w| subword_dp(w, &c)));
        }
    }

    #[test]
    fn steps_preserve_length_and_are_abstract_steps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = random_system(&mut r);
        let q = sys.states.len();
        let c: Vec<usize> = (0..r.gen_range(0..=5)).map(|_| r.gen_range(0..q)).collect();
        for d in step(&sys, &c) {
            prop_assert_eq!(d.len(), c.len());
            // Any c+ above c reaches d abstractly: d's minimal predecessors lie below c+.
            let mut bigger = c.clone();
            bigger.insert(r.gen_range(0..=c.len()), r.gen_range(0..q));
            prop_assert!(abstract_pre(&sys, &minimize_antichain([d.clone()])).contains(&bigger));
        }
    }

    #[test]
    fn abstract_pre_matches_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = random_system(&mut r);
        let q = sys.states.len();
        let w: Vec<usize> = (0..r.gen_range(0..=3)).map(|_| r.gen_range(0..q)).collect();
        let computed: BTreeSet<Vec<usize>> =
            abstract_pre(&sys, &minimize_antichain([w.clone()])).generators().iter().cloned().collect();
        prop_assert_eq!(computed, brute_force_pre(&sys, &w));
    }

    #[test]
    fn backward_iteration_is_monotone_and_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = random_system(&mut r);
        let out = backward_reach(&sys, DEFAULT_ITERATION_CAP).unwrap();
        let mut u = minimize_antichain(sys.bad.clone());
        let mut steps = 0;
        loop {
            let next = u.union(abstract_pre(&sys, &u).generators().to_vec());
            prop_assert!(u.is_subset(&next));
            steps += 1;
            if next == u {
                break;
            }
            u = next;
        }
        prop_assert_eq!(&u, &out.fixpoint);
        prop_assert_eq!(steps, out.iterations);
        if out.is_safe() {
            for n in 0..=5 {
                for c in reachable_bounded(&sys, n, 100_000).unwrap() {
                    prop_assert!(!out.fixpoint.contains(&c));
                }
            }
        }
    }
}

#[test]
fn empty_set_has_no_abstract_predecessors() {
    assert!(abstract_pre(&system("me1"), &UpwardClosedSet::empty()).is_empty());
}
