//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix expected to be Hermitian failed the symmetry check.
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    /// A matrix expected to be unitary failed the U†U = I check.
    #[error("matrix is not unitary: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    /// The iterative eigensolver did not converge; the input is numerically
    /// pathological.
    #[error("eigensolver failed to converge")]
    NonConvergence,

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A dimension exceeds the supported bound for the requested code path.
    #[error("dimension {got} exceeds maximum {max} for this path{hint}")]
    DimensionTooLarge {
        got: usize,
        max: usize,
        hint: &'static str,
    },

    /// Dense unitary assembly was requested for too many qubits.
    #[error("too many qubits for dense unitary assembly: {got} > {max}")]
    TooManyQubits { got: usize, max: usize },

    /// A vector or label list has the wrong length.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Text input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    /// Post-selection removed (numerically) all probability weight.
    #[error("all weight outside the one-hot subspace: valid weight {valid:.3e}")]
    AllWeightDiscarded { valid: f64 },

    /// An operation that divides by the phase Ω·t received zero.
    #[error("evolution phase omega * t must be nonzero")]
    ZeroTime,

    /// A state vector was supplied with non-unit norm.
    #[error("state vector is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    /// A precondition on a plain argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
