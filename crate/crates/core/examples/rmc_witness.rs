//! Computes the forward fixpoint of the token-passing transducer and turns
//! it into a witness model from the transition monoid.

use std::path::Path;

use fcmv::encoder::encode_rmc;
use fcmv::frontend::{load_spec, SpecBody};
use fcmv::logic::check_model;
use fcmv::regular::{forward_iterate, syntactic_monoid, witness_from_rmc, ForwardOutcome};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("specs/token.spec");
    let SpecBody::Rmc(r) = load_spec(&path).unwrap().body else { unreachable!() };
    let ForwardOutcome::Fixpoint { language, iterations } = forward_iterate(&r.trans, &r.init, 100).unwrap() else {
        panic!("no fixpoint");
    };
    let invariant = language.to_nfa();
    println!("fixpoint after {iterations} iterations, monoid of size {}", syntactic_monoid(&language).elements.len());
    let model = witness_from_rmc(&r.init, &r.bad, &r.trans, &invariant).unwrap();
    let problem = encode_rmc(&r.init, &r.bad, &r.trans).unwrap();
    println!("witness of size {}: {:?}", model.size, check_model(&model, &problem.axioms, &problem.goal).unwrap());
}
