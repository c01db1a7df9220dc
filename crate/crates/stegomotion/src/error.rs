//! Crate-wide error type and result alias.

use std::collections::BTreeSet;

/// Errors produced anywhere in the pipeline.
///
/// Variants are grouped so the CLI can map them onto stable exit codes:
/// configuration, coverage timeout, validation, and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid scene, parameters, or command-line configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A trajectory component was NaN or infinite and cannot be serialized.
    #[error("serialization error: non-finite component at step {step}, index {index}")]
    NonFiniteComponent { step: usize, index: usize },

    /// A stimulus violates the scene's placement invariants.
    #[error("placement error: {0}")]
    Placement(String),

    /// The stimulus sampler rejected too many consecutive draws.
    #[error("stimulus region too constrained: {rejections} consecutive rejections")]
    RegionTooConstrained { rejections: u32 },

    /// Codebook construction ran out of trials before covering the message space.
    #[error(
        "coverage timeout: {covered}/{n} symbols after {trials_used} trials (missing {missing:?})"
    )]
    CoverageTimeout {
        n: u32,
        covered: u32,
        trials_used: u32,
        missing: BTreeSet<u32>,
    },

    /// The scene does not induce enough distinct trajectories.
    #[error("sensitivity error: {0}")]
    Sensitivity(String),

    /// An argument is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A message symbol is outside the message space.
    #[error("symbol {symbol} out of range for message space of size {n}")]
    SymbolOutOfRange { symbol: u32, n: u32 },

    /// A loaded or constructed artifact failed a consistency check.
    #[error("validation error: {0}")]
    Validation(String),

    /// A persisted file could not be parsed.
    #[error("parse error in {what} at line {line}: {message}")]
    Parse {
        what: String,
        line: usize,
        message: String,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable CLI exit codes: 2 configuration or feasibility, 3 coverage
    /// timeout, 4 validation or parse failure, 5 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Domain(_)
            | Error::Placement(_)
            | Error::RegionTooConstrained { .. }
            | Error::Sensitivity(_) => 2,
            Error::CoverageTimeout { .. } => 3,
            Error::Validation(_)
            | Error::Parse { .. }
            | Error::NonFiniteComponent { .. }
            | Error::SymbolOutOfRange { .. }
            | Error::Json(_) => 4,
            Error::Io(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
