//! Explicit-state search for a bad configuration, safe and unsafe.

use fcmv::param::{bounded_bad_search, Condition, Context, ParamSystem, TransitionRule};

fn main() {
    let states = vec!["idle".to_string(), "crit".to_string()];
    let guarded = TransitionRule::guarded(Condition::forall(Context::LR, [0]), 0, 1);
    let careless = TransitionRule::unconditional(0, 1);
    for (name, rule) in [("guarded", guarded), ("careless", careless)] {
        let sys = ParamSystem::new(name, states.clone(), 0, vec![rule], vec![vec![1, 1]]).unwrap();
        println!("{name}: {:?}", bounded_bad_search(&sys, 5, 100_000).unwrap());
    }
}
