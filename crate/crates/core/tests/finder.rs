mod common;

use std::time::Duration;

use fcmv::finder::{
    find_countermodel, find_model, ground, instance_count, FinderOptions, GroundLiteral, ModelFinder, SearchBudget,
    SearchOutcome,
};
use fcmv::logic::{check_model, negate_goal, Atom, Clause, GoalFormula, Literal, Term, Verdict};

fn r(name: &str) -> Atom {
    Atom::rel("R", vec![Term::constant(name)])
}

fn budget(max: usize) -> SearchBudget {
    SearchBudget::new(max).with_total(Duration::from_secs(60))
}

#[test]
fn distinct_constants_need_two_elements() {
    let axioms = vec![Clause::fact(r("a"))];
    let negated = vec![Clause::new(vec![Literal::neg(r("b"))])];
    assert!(matches!(find_model(&axioms, &negated, 1, &budget(1)).unwrap(), SearchOutcome::Exhausted { size: 1, .. }));
    let out = find_model(&axioms, &negated, 2, &budget(2)).unwrap();
    let m = out.model().expect("model at size 2");
    assert_eq!(m.size, 2);
    assert_ne!(m.constants["a"], m.constants["b"]);
}

#[test]
fn consequence_goal_is_exhausted() {
    let axioms = vec![Clause::fact(r("a"))];
    let goal = GoalFormula::atom(Atom::rel("R", vec![Term::var("x")]));
    match find_countermodel(&axioms, &goal, &budget(4)).unwrap() {
        SearchOutcome::Exhausted { size, stats } => {
            assert_eq!(size, 4);
            assert_eq!(stats.sizes.len(), 4);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn ground_constant_fact() {
    let axioms = vec![Clause::fact(Atom::rel("P", vec![Term::constant("a")]))];
    let g = ground(&axioms, &[], 1, true, 1 << 20).unwrap();
    assert_eq!(g.cell_constraints, 1);
    let mentions_p0 = g.constraints.iter().flatten().any(|l| {
        matches!(l, GroundLiteral::Relation { name, args, positive: true } if name == "P" && args == &vec![0])
    });
    assert!(mentions_p0, "{:?}", g.constraints);
}

#[test]
fn ground_left_unit_has_two_instances_per_unit_value() {
    let unit = Clause::fact(Atom::Eq(Term::bin("*", Term::constant("e"), Term::var("x")), Term::var("x")));
    let g = ground(&[unit], &[], 2, true, 1 << 20).unwrap();
    assert_eq!(g.instances, 4);
    assert_eq!(g.constraints.len(), 4);
    for c in &g.constraints {
        assert!(c.iter().any(|l| matches!(l, GroundLiteral::Constant { name, positive: false, .. } if name == "e")));
    }
}

#[test]
fn grounding_cap_is_enforced() {
    let p = common::problem("me1");
    let negated = negate_goal(&p.goal).unwrap();
    assert!(ground(&p.axioms, &negated, 4, false, 1000).is_err());
}

// Frozen from an independent count over the emitted clauses: distinct
// non-variable subterms plus variables per clause, tautologies dropped.
#[test]
fn me1_instance_count_at_four() {
    let p = common::problem("me1");
    let negated = negate_goal(&p.goal).unwrap();
    assert_eq!(instance_count(&p.axioms, &negated, 4, false).unwrap(), 397_616);
}

fn countermodel(name: &str, max: usize) -> (usize, fcmv::logic::FiniteModel) {
    let p = common::problem(name);
    let options = FinderOptions { vocabulary: Some(p.vocabulary.clone()), ..FinderOptions::default() };
    match ModelFinder::new(options).find_countermodel(&p.axioms, &p.goal, &budget(max)).unwrap() {
        SearchOutcome::ModelFound { model, size, .. } => {
            assert_eq!(check_model(&model, &p.axioms, &p.goal).unwrap(), Verdict::ValidCertificate);
            (size, model)
        }
        other => panic!("{name}: {other:?}"),
    }
}

#[test]
fn case_study_countermodels() {
    assert!(countermodel("me1", 8).0 <= 8);
    assert!(countermodel("me2", 6).0 <= 6);
    assert!(countermodel("token", 8).0 <= 8);
    assert!(countermodel("bakery", 8).0 <= 8);
}

#[test]
fn single_threaded_search_is_deterministic() {
    assert_eq!(countermodel("me2", 6), countermodel("me2", 6));
}

#[test]
fn portfolio_finds_a_model_of_the_same_kind() {
    let p = common::problem("me1");
    let options = FinderOptions { vocabulary: Some(p.vocabulary.clone()), threads: 3, ..FinderOptions::default() };
    let out = ModelFinder::new(options).find_countermodel(&p.axioms, &p.goal, &budget(8)).unwrap();
    let model = out.model().expect("model");
    assert!(check_model(model, &p.axioms, &p.goal).unwrap().is_valid());
}

#[test]
fn invalid_budgets_are_rejected() {
    assert!(SearchBudget::new(0).validate().is_err());
    assert!(SearchBudget::new(3).with_node_limit(0).validate().is_err());
    let axioms = vec![Clause::fact(r("a"))];
    assert!(find_model(&axioms, &[], 0, &budget(1)).is_err());
}

mod tiny_scale {
    use super::*;
    use crate::common::{brute_force_sat, random_clauses, rng, tiny_vocab};
    use proptest::prelude::*;

    fn finder_sat(clauses: &[Clause], n: usize, symmetry_breaking: bool) -> bool {
        let options = FinderOptions { vocabulary: Some(tiny_vocab(false)), symmetry_breaking, ..FinderOptions::default() };
        match ModelFinder::new(options).find_model(clauses, &[], n, &budget(n)).unwrap() {
            SearchOutcome::ModelFound { model, .. } => {
                assert!(clauses.iter().all(|c| fcmv::logic::holds(&model, c).unwrap()));
                true
            }
            SearchOutcome::Exhausted { .. } => false,
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(seed in any::<u64>(), n in 1usize..=2) {
            let clauses = random_clauses(&mut rng(seed), false);
            prop_assert_eq!(finder_sat(&clauses, n, true), brute_force_sat(&clauses, n));
        }

        #[test]
        fn symmetry_breaking_preserves_satisfiability(seed in any::<u64>(), n in 1usize..=3) {
            let clauses = random_clauses(&mut rng(seed), false);
            prop_assert_eq!(finder_sat(&clauses, n, true), finder_sat(&clauses, n, false));
        }
    }
}
