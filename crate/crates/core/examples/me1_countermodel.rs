//! Finds and prints a countermodel certifying mutual exclusion in ME-I.

use std::path::Path;
use std::time::Duration;

use fcmv::finder::{find_countermodel, SearchBudget, SearchOutcome};
use fcmv::frontend::{encode_spec, load_spec};
use fcmv::logic::check_model;

fn main() {
    let spec = load_spec(&Path::new(env!("CARGO_MANIFEST_DIR")).join("specs/me1.spec")).unwrap();
    let problem = encode_spec(&spec).unwrap();
    println!("{} clauses", problem.axioms.len());
    let budget = SearchBudget::new(8).with_total(Duration::from_secs(120));
    match find_countermodel(&problem.axioms, &problem.goal, &budget).unwrap() {
        SearchOutcome::ModelFound { model, size, .. } => {
            println!("countermodel of size {size}:\n{model}");
            println!("{:?}", check_model(&model, &problem.axioms, &problem.goal).unwrap());
        }
        other => println!("no countermodel: {other:?}"),
    }
}
