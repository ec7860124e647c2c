use thiserror::Error;

/// Errors raised across the library. `NeedsExtension` is a distinguished
/// outcome: the requested structure exists over the algebraic closure but
/// no rational witness was found.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("variable-count mismatch: {0} vs {1}")]
    VariableCount(usize, usize),
    #[error("symbolic size cap exceeded: {size} > {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("needs a field extension: {0}")]
    NeedsExtension(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// The message used whenever a polynomial with zero constant term is rejected.
    pub fn not_regular() -> Self {
        Error::Precondition(
            "f(0) = 0: the polynomial is not regular at the origin; translate the variables \
             x_j -> x_j + a_j by a scalar point with f(a) != 0 and retry"
                .into(),
        )
    }
}
