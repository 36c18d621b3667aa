use std::fmt;

/// Errors produced by the quadrature and reduction layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violated its documented precondition.
    InvalidParameter(String),
    /// The integrand returned a non-finite value at the given abscissa.
    NonFiniteEvaluation { x: f64 },
    /// An integrand of arity `expected` was required but one of arity
    /// `got` was supplied.
    ArityMismatch { expected: usize, got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NonFiniteEvaluation { x } => {
                write!(f, "integrand returned a non-finite value at x = {x:e}")
            }
            Error::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected} variables, got {got}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
