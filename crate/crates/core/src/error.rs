use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gram matrix is not Hermitian positive definite: {0}")]
    InvalidGram(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("relation is not selfadjoint (largest principal angle to its adjoint {defect:.3e})")]
    NotSelfadjoint { defect: f64 },

    #[error("relation is not monotone (smallest eigenvalue of the symmetrized form {min_eigenvalue:.3e})")]
    NotMonotone { min_eigenvalue: f64 },

    #[error("relation is not maximal monotone: {0}")]
    NotMaximalMonotone(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("malformed scenario: {0}")]
    MalformedScenario(String),

    #[error("discrete system is singular (reciprocal condition estimate {rcond:.3e})")]
    SingularSystem { rcond: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
