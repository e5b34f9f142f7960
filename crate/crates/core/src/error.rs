use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("field context mismatch: expected {expected}, found {found}")]
    ContextMismatch { expected: String, found: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("element has degree {found} over GF(q^n), expected {expected}")]
    RootDegree { expected: u32, found: u32 },

    #[error("invalid semiaffine map: {0}")]
    InvalidMap(String),

    #[error("incompatible quadruple: {0}")]
    Incompatible(String),

    #[error("falsification: {0}")]
    Falsification(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("decode error: {0}")]
    Decode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
