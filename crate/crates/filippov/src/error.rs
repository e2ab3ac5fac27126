//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by the linear-algebra substrate, the algebra operations,
/// the constructors and the file format.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("arity must be at least {min}, got {found}")]
    ArityTooSmall { min: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("repeated index {index} in a bracket tuple with a nonzero coefficient")]
    RepeatedIndex { index: usize },

    #[error("invalid rational literal `{text}`")]
    InvalidRational { text: String },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("bilinear form is degenerate (radical dimension {radical})")]
    DegenerateForm { radical: usize },

    #[error("form is not positive-definite")]
    NotEuclidean,

    #[error("endomorphism is not skew relative to the form")]
    NotSkew,

    #[error("subspace is not an ideal ({witnesses} witnesses)")]
    NotIdeal { witnesses: usize },

    #[error("ideal is not coisotropic (its orthogonal complement is not contained in it)")]
    NotCoisotropic,

    #[error("quotient bracket is not well defined modulo the coisotropic radical")]
    QuotientIllDefined,

    #[error("inner subspace is not contained in the outer one")]
    NotContained,

    #[error("twist calibration failed: no scalar multiple of x reproduces the induced bracket")]
    CalibrationFailed,

    #[error("x is not central for the induced structure on the block")]
    NotCentral,

    #[error("{context}: {check} check failed with {witnesses} witnesses")]
    FailedCheck {
        context: &'static str,
        check: &'static str,
        witnesses: usize,
    },

    #[error("invalid construction input: {0}")]
    Construction(String),

    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
