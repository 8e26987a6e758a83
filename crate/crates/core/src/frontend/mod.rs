//! Spec files, backend orchestration and verification reports.
//!
//! [`verify`] runs one backend on a parsed [`SpecFile`] and returns a
//! [`Report`]. Reports serialize to JSON; [`Report::from_json`] re-checks an
//! embedded countermodel or witness model against the embedded clause set,
//! so a saved certificate cannot be loaded unless it is valid.

mod automaton;
mod report;
mod spec;
mod verify;

use thiserror::Error;

use crate::encoder::EncodeError;
use crate::finder::FinderError;
use crate::logic::LogicError;
use crate::param::ParamError;
use crate::regular::RegularError;

pub use automaton::{automaton_to_text, parse_automaton, parse_transducer, transducer_to_text};
pub use report::{CertificateKind, Report, Verdict, ORACLE_DISCLAIMER};
pub use spec::{load_spec, parse_spec, parse_spec_in, RmcSpec, SpecBody, SpecFile};
pub use verify::{
    encode_cmd, encode_spec, model_show, rmc_bounded_search, verify, witness_cmd, Backend, Format, VerifyOptions,
};

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{line}:{column}: {message}")]
    Semantic { line: usize, column: usize, message: String },
    #[error("{path}: {source}")]
    InFile { path: String, source: Box<FrontendError> },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("backend `{backend}` does not apply to {kind} specs")]
    Incompatible { backend: String, kind: String },
    #[error("invalid report: {0}")]
    InvalidReport(String),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Finder(#[from] FinderError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Regular(#[from] RegularError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl FrontendError {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        FrontendError::Parse { line, column, message: message.into() }
    }

    pub(crate) fn semantic(line: usize, column: usize, message: impl Into<String>) -> Self {
        FrontendError::Semantic { line, column, message: message.into() }
    }
}
