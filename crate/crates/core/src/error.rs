//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The truncated Fock basis is too small to hold the requested coherent
    /// amplitude: the discarded probability mass exceeds the tolerance.
    #[error(
        "truncation tail mass {tail:.3e} exceeds tolerance {tol:.3e} \
         (|alpha| = {alpha_abs:.4}, dim = {dim})"
    )]
    Truncation {
        alpha_abs: f64,
        dim: usize,
        tail: f64,
        tol: f64,
    },

    /// The odd cat state vanishes identically at alpha = 0.
    #[error("odd cat state with alpha = 0 vanishes identically")]
    DegenerateCat,

    #[error("Fock dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("atomic basis mismatch: expected {expected}, found {found}")]
    BasisMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("level '{level}' is not part of the {basis} basis")]
    UnknownLevel { level: char, basis: &'static str },

    #[error("state norm^2 = {norm_sqr:.6e} is not acceptable here")]
    NormError { norm_sqr: f64 },

    #[error("rotation matrix is not unitary (max |M\u{2020}M - I| = {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    /// Post-selection on an outcome that carries (numerically) no weight.
    #[error("zero-probability branch: {context}")]
    ZeroProbability { context: String },

    #[error("screen grid too coarse: {samples} samples in the central fringe period (need >= {required})")]
    GridTooCoarse { samples: usize, required: usize },

    #[error("{0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn zero_probability(context: impl Into<String>) -> Self {
        Error::ZeroProbability {
            context: context.into(),
        }
    }
}
