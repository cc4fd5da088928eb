//! Machine checks of the weight theorems and supporting lemmas at small scale.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Display;
use core::time::Duration;

use crate::bounds::BoundsError;
use crate::classify::ClassifyError;
use crate::code::CodeError;
use crate::field::FieldError;
use crate::geometry::GeometryError;

mod appendix;
mod blocking;
mod lemmas;
mod spectrum;

pub use appendix::verify_appendix;
pub use blocking::{blocking_report, check_blocking_lemma, BlockingOutcome, Violation};
pub use lemmas::{lemma_suite, lemma_suite_with, LemmaOptions};
pub use spectrum::{exhaustive_spectrum, Spectrum, SpectrumConfig, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("{words} codewords exceed the budget of {budget}")]
    BudgetExceeded { words: u128, budget: u64 },
    #[error("q = {q}, n = {n}: {reason}")]
    BranchNotApplicable { q: u64, n: usize, reason: &'static str },
    #[error("weight {weight} exceeds floor(B) = {limit}")]
    WeightOutOfRange { weight: usize, limit: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Verified,
    /// The claim fails on a concrete object, described by `witness`.
    Falsified { witness: String },
    Skipped { reason: String },
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Falsified { .. } => "falsified",
            Status::Skipped { .. } => "skipped",
        }
    }
}

/// Outcome of one checked claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub claim_id: String,
    pub parameters: Vec<(String, String)>,
    pub status: Status,
    pub evidence: Vec<(String, String)>,
    pub runtime: Option<Duration>,
}

impl VerificationReport {
    pub fn new(claim_id: impl Into<String>) -> Self {
        VerificationReport {
            claim_id: claim_id.into(),
            parameters: Vec::new(),
            status: Status::Verified,
            evidence: Vec::new(),
            runtime: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Display) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn note(&mut self, key: &str, value: impl Display) {
        self.evidence.push((key.to_string(), value.to_string()));
    }

    pub fn falsify(&mut self, witness: impl Into<String>) {
        if !self.is_falsified() {
            self.status = Status::Falsified { witness: witness.into() };
        }
    }

    pub fn skip(&mut self, reason: impl Into<String>) {
        if self.status == Status::Verified {
            self.status = Status::Skipped { reason: reason.into() };
        }
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self.status, Status::Falsified { .. })
    }

    pub fn evidence_value(&self, key: &str) -> Option<&str> {
        self.evidence.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl core::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{} [{}]: {}", self.claim_id, params.join(", "), self.status.name())?;
        match &self.status {
            Status::Falsified { witness } => write!(f, " ({witness})"),
            Status::Skipped { reason } => write!(f, " ({reason})"),
            Status::Verified => Ok(()),
        }
    }
}

#[cfg(feature = "std")]
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, Option<Duration>) {
    let start = std::time::Instant::now();
    let out = f();
    (out, Some(start.elapsed()))
}

#[cfg(not(feature = "std"))]
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, Option<Duration>) {
    (f(), None)
}
