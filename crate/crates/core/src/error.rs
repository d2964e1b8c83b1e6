use thiserror::Error;

/// Errors surfaced by the library.
///
/// `InsufficientPrecision` is reserved for situations where a quantity that
/// is known to be nonzero (or an identity known to hold) cannot be certified
/// at the working precision; the caller should retry with more digits rather
/// than conclude anything.
#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("insufficient p-adic precision: {0}")]
    InsufficientPrecision(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
