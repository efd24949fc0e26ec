use thiserror::Error;

/// Errors raised by the geometric and topological routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A structural invariant failed; `what` names the offending bracket or check.
    #[error("{what} (residual {residual:.3e} exceeds tolerance {tol:.1e})")]
    Invariant { what: String, residual: f64, tol: f64 },

    /// A tensor fed to an invariant-only formula is not isotropy invariant.
    #[error("{what} is not isotropy invariant (residual {residual:.3e})")]
    NotInvariant { what: String, residual: f64 },

    #[error("no unique invariant cubic: invariant space has dimension {dim}")]
    NoUniqueInvariantCubic { dim: usize },

    #[error("no SO(3)_ir-compatible embedding: alpha = {alpha} < 12 gamma (gamma = {gamma})")]
    NoAdmissibleEmbedding { alpha: f64, gamma: f64 },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub(crate) fn invariant(what: impl Into<String>, residual: f64, tol: f64) -> Self {
        Error::Invariant {
            what: what.into(),
            residual,
            tol,
        }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by malformed or out-of-domain input, as opposed
    /// to a computed invariant that failed.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Invariant { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
