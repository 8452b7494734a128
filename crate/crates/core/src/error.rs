use thiserror::Error;

use crate::algebra::Algebra;

/// Failures that stop a computation. Semantic verdicts such as a failed
/// Leibniz check or an inconsistent extension are ordinary return values,
/// not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("elements belong to different algebras ({0} and {1})")]
    MixedAlgebras(Algebra, Algebra),

    #[error("index {index} is outside the index domain of {algebra}")]
    IndexOutOfDomain { algebra: Algebra, index: i64 },

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("unsupported algebra {algebra} for {operation}")]
    UnsupportedAlgebra { algebra: Algebra, operation: &'static str },

    #[error("not a derivation: {0}")]
    NotADerivation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
