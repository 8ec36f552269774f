use thiserror::Error;

/// Errors raised by the geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (defect {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("matrix is not symmetric positive definite")]
    NotSpd,

    #[error("matrix is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },

    #[error("Sylvester system is singular (reciprocal condition {rcond:.3e})")]
    SingularSylvester { rcond: f64 },

    #[error("denominator cv + d is numerically singular")]
    SingularDenominator,

    #[error("matrix does not lie in the Jacobi algebra (residual {residual:.3e})")]
    ProjectionResidual { residual: f64 },

    #[error("commutator left the span of the basis (residual {residual:.3e})")]
    BasisClosureFailure { residual: f64 },

    #[error("point violates the contraction bound 1 - W conj(W) > 0")]
    ContractionViolation,

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("unsupported chart: {0}")]
    UnsupportedChart(String),
}

pub type Result<T> = std::result::Result<T, Error>;
