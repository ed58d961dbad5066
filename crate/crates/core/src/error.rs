use thiserror::Error;

use crate::category::CategoryId;

/// Errors raised by category operations, measures, the capacity solver and
/// the audit engine.
///
/// Undefined products and undefined measure values are *not* errors; they
/// are returned as `None`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("category mismatch: {left} vs {right}")]
    CategoryMismatch { left: CategoryId, right: CategoryId },

    #[error("object mismatch: {0}")]
    ObjectMismatch(String),

    #[error("morphisms do not share a domain: {0}")]
    DomainMismatch(String),

    #[error("invalid object: {0}")]
    InvalidObject(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),

    #[error("enumeration budget exceeded: {0}")]
    EnumerationBudgetExceeded(String),

    #[error("negative coefficient in measure combination: {0}")]
    NegativeCoefficient(f64),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("fiber over message {0} has zero mass")]
    ZeroMassFiber(usize),

    #[error("unknown measure `{measure}` for category {category}")]
    UnknownMeasure { category: CategoryId, measure: String },

    #[error("invalid audit configuration: {0}")]
    InvalidConfig(String),

    #[error("violation index {index} out of range ({len} recorded)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
