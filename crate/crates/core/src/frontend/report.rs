use std::fmt;

use serde::{Deserialize, Serialize};

use crate::encoder::parse_native;
use crate::finder::SearchStats;
use crate::logic::{check_model, FiniteModel};

use super::FrontendError;

pub const ORACLE_DISCLAIMER: &str = "bounded check, not a proof";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Countermodel,
    WitnessModel,
    BackwardAntichain,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::Countermodel => "countermodel",
            CertificateKind::WitnessModel => "witness-model",
            CertificateKind::BackwardAntichain => "backward-antichain",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Safe { certificate: CertificateKind },
    Inconclusive { reason: String },
    /// A run from an initial to a bad configuration, one word per step.
    UnsafeAtBound { trace: Vec<String> },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Safe { certificate } => write!(f, "SAFE ({certificate})"),
            Verdict::Inconclusive { reason } => write!(f, "INCONCLUSIVE ({reason})"),
            Verdict::UnsafeAtBound { trace } => write!(f, "UNSAFE-AT-BOUND ({} steps)", trace.len().saturating_sub(1)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub spec: String,
    pub kind: String,
    pub backend: String,
    pub verdict: Verdict,
    /// Clause set in the native format, present whenever `model` is.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<FiniteModel>,
    /// Minimal generators of the backward fixpoint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antichain: Option<Vec<String>>,
    /// Separating regular set in the automaton file format.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub millis: u64,
}

impl Report {
    pub(crate) fn new(spec: &str, kind: &str, backend: &str, verdict: Verdict) -> Report {
        Report {
            spec: spec.to_string(),
            kind: kind.to_string(),
            backend: backend.to_string(),
            verdict,
            problem: None,
            model: None,
            antichain: None,
            invariant: None,
            search: None,
            notes: Vec::new(),
            millis: 0,
        }
    }

    pub fn is_safe(&self) -> bool {
        matches!(self.verdict, Verdict::Safe { .. })
    }

    /// 0 safe, 1 inconclusive, 2 unsafe at the bound.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Safe { .. } => 0,
            Verdict::Inconclusive { .. } => 1,
            Verdict::UnsafeAtBound { .. } => 2,
        }
    }

    /// Re-checks an embedded model against the embedded clause set. Safe
    /// verdicts by countermodel or witness model must carry both.
    pub fn validate(&self) -> Result<(), FrontendError> {
        let needs_model = matches!(
            self.verdict,
            Verdict::Safe { certificate: CertificateKind::Countermodel | CertificateKind::WitnessModel }
        );
        match (&self.model, &self.problem) {
            (Some(model), Some(text)) => {
                let problem = parse_native(text)?;
                model.validate(&problem.vocabulary)?;
                let v = check_model(model, &problem.axioms, &problem.goal)?;
                if !v.is_valid() {
                    return Err(FrontendError::InvalidReport(format!("embedded model is not a certificate: {v:?}")));
                }
                Ok(())
            }
            (None, _) if !needs_model => Ok(()),
            _ => Err(FrontendError::InvalidReport("a model-based verdict needs both the model and the clause set".into())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Report, FrontendError> {
        let r: Report = serde_json::from_str(text)?;
        r.validate()?;
        Ok(r)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} spec, {} backend): {}", self.spec, self.kind, self.backend, self.verdict)?;
        if let Some(m) = &self.model {
            writeln!(f, "model of size {}", m.size)?;
        }
        if let Some(a) = &self.antichain {
            writeln!(f, "backward fixpoint generators: {}", a.join(", "))?;
        }
        if let Verdict::UnsafeAtBound { trace } = &self.verdict {
            for (i, w) in trace.iter().enumerate() {
                writeln!(f, "  {i}: {w}")?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        write!(f, "time: {} ms", self.millis)
    }
}
