use thiserror::Error;

/// Errors raised by the library layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live over different fields: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("zero is not a unit")]
    ZeroUnit,

    #[error("cannot enumerate the units of the infinite field {0}")]
    UnsupportedEnumeration(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("expression is not homogeneous: found degrees {0} and {1}")]
    Inhomogeneous(i64, i64),

    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: String, found: i64 },

    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no derivation found within depth {0}")]
    SearchExhausted(usize),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
