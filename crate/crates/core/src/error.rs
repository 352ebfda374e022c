use thiserror::Error;

use crate::poly::Var;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("variable mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: Var, found: Var },
    #[error("invalid rational {0:?}")]
    ParseRational(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("sequence undefined at index {0}")]
    UndefinedIndex(i64),
    #[error("degenerate parameters: tau vanishes at n = {0}")]
    Degenerate(i64),
    #[error("recurrence coefficients undefined at n = {0}")]
    SingularRecurrence(i64),
    #[error("polynomial is not invariant under the involution: {0}")]
    NotInvariant(String),
    #[error("beta mismatch between operators: {0} vs {1}")]
    BetaMismatch(String, String),
    #[error("f is not in the algebra: the fitting system is inconsistent")]
    NotInAlgebra,
    #[error("operator fit is under-determined at order {order}; kernel dimension {kernel_dim}")]
    OrderBound { order: usize, kernel_dim: usize },
    #[error("fitted operator fails verification at n = {0}")]
    FitVerification(usize),
    #[error("malformed matrix or system: {0}")]
    Malformed(String),
    #[error("recurrence fit failed at n = {0}")]
    RecurrenceFit(usize),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
