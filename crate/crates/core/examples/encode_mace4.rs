//! Prints the Paterson clause set without rule 3 in Mace4 syntax.

use std::path::Path;

use fcmv::frontend::{encode_cmd, load_spec, Format};

fn main() {
    let spec = load_spec(&Path::new(env!("CARGO_MANIFEST_DIR")).join("specs/paterson_minus.spec")).unwrap();
    print!("{}", encode_cmd(&spec, Format::Mace4).unwrap());
}
