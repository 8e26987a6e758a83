mod common;

use common::{random_clause, random_clauses, random_goal, random_term, rng, Tiny};
use fcmv::logic::{
    atom_holds, check_model, evaluate_term, falsifying_assignment, holds, negate_goal, Assignment, Atom, Clause,
    FiniteModel, Term,
};
use proptest::prelude::*;

fn assignment(env: &[usize; 3]) -> Assignment {
    common::VARS.iter().zip(env).map(|(v, &e)| (v.to_string(), e)).collect()
}

#[test]
fn associativity_fails_in_a_non_associative_table() {
    // x * y = (x + 1) mod 3 ignores y: (0*0)*0 = 2 but 0*(0*0) = 1.
    let mut m = FiniteModel::new(3);
    m.set_function("*", 2, |a| (a[0] + 1) % 3);
    let (x, y, z) = (Term::var("x"), Term::var("y"), Term::var("z"));
    let assoc = Clause::fact(Atom::Eq(
        Term::bin("*", Term::bin("*", x.clone(), y.clone()), z.clone()),
        Term::bin("*", x, Term::bin("*", y, z)),
    ));
    assert!(!holds(&m, &assoc).unwrap());
    let bad = falsifying_assignment(&m, &assoc).unwrap().expect("a failing triple");
    let (a, b, c) = (bad["x"], bad["y"], bad["z"]);
    let op = |p: usize, _q: usize| (p + 1) % 3;
    assert_ne!(op(op(a, b), c), op(a, op(b, c)));
}

proptest! {
    #[test]
    fn holds_agrees_with_direct_evaluation(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let tiny = Tiny::random(&mut r, n, true);
        let model = tiny.to_model();
        for _ in 0..8 {
            let c = random_clause(&mut r, true);
            prop_assert_eq!(holds(&model, &c).unwrap(), tiny.clause(&c), "{}", c);
        }
    }

    #[test]
    fn equality_is_identity(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let tiny = Tiny::random(&mut r, n, true);
        let model = tiny.to_model();
        let (s, t) = (random_term(&mut r, 3, true), random_term(&mut r, 3, true));
        for env in tiny.envs() {
            let asg = assignment(&env);
            let same = evaluate_term(&model, &s, &asg).unwrap() == evaluate_term(&model, &t, &asg).unwrap();
            prop_assert_eq!(atom_holds(&model, &Atom::Eq(s.clone(), t.clone()), &asg).unwrap(), same);
            prop_assert_eq!(evaluate_term(&model, &s, &asg).unwrap(), tiny.term(&s, &env));
        }
    }

    #[test]
    fn negated_goal_holds_iff_goal_is_false(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let tiny = Tiny::random(&mut r, n, true);
        let model = tiny.to_model();
        let g = random_goal(&mut r, true);
        let negated = negate_goal(&g).unwrap();
        let all_hold = negated.iter().all(|c| holds(&model, c).unwrap());
        prop_assert_eq!(all_hold, !tiny.goal(&g));
    }

    #[test]
    fn check_model_matches_clause_checks(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let tiny = Tiny::random(&mut r, n, true);
        let model = tiny.to_model();
        let axioms = random_clauses(&mut r, true);
        let g = random_goal(&mut r, true);
        let expected = axioms.iter().all(|c| tiny.clause(c)) && !tiny.goal(&g);
        prop_assert_eq!(check_model(&model, &axioms, &g).unwrap().is_valid(), expected);
        let via_holds = axioms.iter().chain(&negate_goal(&g).unwrap()).all(|c| holds(&model, c).unwrap());
        prop_assert_eq!(via_holds, expected);
    }
}
