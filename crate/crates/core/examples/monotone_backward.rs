//! Backward reachability over upward-closed sets for ME-I and ME-II.

use std::path::Path;

use fcmv::frontend::{load_spec, SpecBody};
use fcmv::param::{backward_reach, DEFAULT_ITERATION_CAP};

fn main() {
    for name in ["me1", "me2"] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("specs/{name}.spec"));
        let SpecBody::System(sys) = load_spec(&path).unwrap().body else { unreachable!() };
        let out = backward_reach(&sys, DEFAULT_ITERATION_CAP).unwrap();
        println!("{name}: {:?} after {} iterations", out.verdict, out.iterations);
        for g in out.fixpoint.generators() {
            println!("  {}", sys.format_word(g));
        }
    }
}
