use thiserror::Error;

/// Errors raised by the solver modules.
///
/// Numeric payloads are carried as `f64` regardless of the working precision
/// so the error type stays independent of the scalar.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inconsistent dimensions: {0}")]
    InconsistentDims(String),

    #[error("matrix is not Hermitian (‖W − W*‖ = {asymmetry:e}, allowed {bound:e})")]
    NotHermitian { asymmetry: f64, bound: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e}, allowed {bound:e})")]
    NotPsd { min_eigenvalue: f64, bound: f64 },

    #[error("matrix has non-finite entries: {0}")]
    NonFinite(String),

    #[error(
        "right-hand side is not in the range of the constraint operator (residual {residual:e})"
    )]
    NotInRange { residual: f64 },

    #[error("minimum is not attained: {0}")]
    NoMinimum(String),

    #[error("Schatten index p = {0} is not supported by this operation (requires p > 1)")]
    UnsupportedIndex(f64),

    #[error("invalid Schatten index p = {0} (requires 1 <= p < inf)")]
    InvalidIndex(f64),

    #[error("invalid tolerances: {0}")]
    InvalidTolerance(String),

    #[error("equivalence violation: {0}")]
    EquivalenceViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
