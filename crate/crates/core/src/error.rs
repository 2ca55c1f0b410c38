use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} has size {found}, expected {expected}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("contact rank must be at least 1")]
    ZeroRank,

    #[error("metric is singular")]
    SingularMetric,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("`{slot}` is not in its admissible subspace (relative violation {violation:.3e})")]
    Membership { slot: &'static str, violation: f64 },

    #[error("internal inconsistency in {check}: {detail}")]
    Inconsistent { check: &'static str, detail: String },

    #[error("no admissible model found after {attempts} attempts")]
    NotFound { attempts: usize },

    #[error("model or data file: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
