use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("index out of range or repeated: {0}")]
    Index(String),
    #[error("not a permutation of 1..={0}")]
    InvalidPermutation(usize),
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: String },
    #[error("moduli are not pairwise coprime: {0} and {1}")]
    InvalidModuli(String, String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("kappa = {0} is not an allowed parameter")]
    ConstraintViolation(String),
    #[error("matrix does not have determinant 1")]
    InvalidMatrix,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
