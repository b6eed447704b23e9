use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("signal needs at least 2 samples, got {0}")]
    TooShort(usize),

    #[error("signal has zero energy")]
    ZeroEnergy,

    #[error("degree {0} is outside the exact-integer coefficient range (max 64)")]
    DegreeOutOfRange(usize),

    #[error("quadrature under-resolved: step {step} exceeds {limit}")]
    UnderResolved { step: f64, limit: f64 },

    #[error("inadequate sampling: {0}")]
    InadequateSampling(String),

    #[error("grid has kind {found:?}, expected {expected:?}")]
    WrongKind {
        expected: crate::transform::GridKind,
        found: crate::transform::GridKind,
    },

    #[error("axis not resolvable: {0}")]
    Axis(String),

    #[error("window is not unit-normalized: integral of |g|^2 = {norm}")]
    UnnormalizedWindow { norm: f64 },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Non-fatal findings attached to results. Analyses still complete, but the
/// numbers may not meet the usual accuracy budget.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// Endpoint magnitude relative to the peak exceeds `1e-10`; the signal is
    /// not effectively supported inside its grid.
    Leakage { ratio: f64 },
    /// Sample step is coarser than the window adequacy rule allows.
    Undersampled { step: f64, limit: f64 },
    /// Boundary cells of a grid carry more than `1e-8` of the peak.
    Coverage { boundary_ratio: f64 },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::Leakage { ratio } => {
                write!(f, "leakage: endpoint/peak magnitude ratio {ratio:e}")
            }
            Diagnostic::Undersampled { step, limit } => {
                write!(f, "undersampled: step {step} exceeds {limit}")
            }
            Diagnostic::Coverage { boundary_ratio } => {
                write!(f, "coverage: boundary/peak ratio {boundary_ratio:e}")
            }
        }
    }
}
