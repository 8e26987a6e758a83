//! Safety verification of parameterized and infinite-state systems by
//! finite countermodel finding.
//!
//! A verification problem is translated into a set of first-order clauses
//! whose consequences over-approximate reachability, together with an
//! existential goal describing a bad state. A finite model of the clauses in
//! which the goal is false is a machine-checkable safety certificate.
//!
//! Layout:
//!
//! - [`logic`]: vocabularies, clauses, finite models and exhaustive checking.
//! - [`finder`]: MACE-style finite model search with iterative deepening.
//! - [`param`]: parameterized linear arrays, an explicit-state oracle and
//!   backward reachability under monotonic abstraction.
//! - [`regular`]: automata, transducers, transition monoids and constructive
//!   witness models.
//! - [`encoder`]: translations of verification problems into clause sets,
//!   plus native and Mace4 text emission.
//! - [`frontend`]: spec files, backend orchestration and JSON reports, as
//!   used by the `fcmv` binary.

pub mod encoder;
pub mod finder;
pub mod frontend;
pub mod logic;
pub mod param;
pub mod regular;
