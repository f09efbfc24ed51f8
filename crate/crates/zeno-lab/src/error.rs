//! Crate-wide error type.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry")]
    NonFiniteEntry,

    #[error("input is not Hermitian: |A - A*| = {defect:e} exceeds {allowed:e}")]
    NotHermitian { defect: f64, allowed: f64 },

    #[error("eigensolver failed to converge")]
    EigenConvergence,

    #[error("eigenvector matrix is not orthonormal: defect {defect:e}")]
    NotOrthonormal { defect: f64 },

    #[error("eigenvalues are not sorted in ascending order")]
    EigenvaluesUnsorted,

    #[error("operator has eigenvalue {value:e} below the clamping window {window:e}")]
    NegativeEigenvalue { value: f64, window: f64 },

    #[error("function not finite at spectral point {point:e}")]
    FunctionNotFinite { point: f64 },

    #[error("unknown function id `{0}`")]
    UnknownFunction(String),

    #[error("invalid interval union: {0}")]
    InvalidIntervals(String),

    #[error("cutoff set leaves the sign-condition region at x = {point:e}")]
    CutoffOutsideSignSet { point: f64 },

    #[error("sign condition Im(phi) <= 0 fails on the grid at x = {point:e}")]
    SignConditionViolated { point: f64 },

    #[error("sign condition Im(phi) <= 0 has not been verified for `{0}`")]
    SignConditionUnverified(String),

    #[error("Kato-part value {value} at x = {point:e} lies outside [0, 1]")]
    KatoPartOutOfRange { point: f64, value: f64 },

    #[error("|p_alpha| reaches {sup:e} on the grid; the power-law condition fails")]
    PAlphaUnbounded { sup: f64 },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("test vector {index} is not unit-normalized (|f| = {norm})")]
    TestVectorNotUnit { index: usize, norm: f64 },

    #[error("model `{id}` is not flagged non-negative; the operation requires H >= 0")]
    ModelNotNonNegative { id: String },

    #[error("model `{id}` is incompatible with the requested operation: {reason}")]
    ModelIncompatible { id: String, reason: String },

    #[error("resolvent inversion exceeds the conditioning guard: cond ~ {cond:e}")]
    IllConditioned { cond: f64 },

    #[error("translated window leaves the circle chart: {context}")]
    WindowWraparound { context: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization failure: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors raised by numerical guards (conditioning,
    /// eigensolver convergence) as opposed to input validation.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(self, Error::IllConditioned { .. } | Error::EigenConvergence)
    }
}
