use std::fmt;

/// Errors produced by exact-arithmetic and germ computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Division of a rational function by zero.
    DivisionByZero,
    /// A bivariate rational function has a pole at t = 1 of the given order.
    PoleAtTOne { order: usize },
    /// A computation would exceed the configured degree cap.
    DegreeCap { degree: usize, cap: usize },
    /// Two arguments must have the same size/degree but do not.
    SizeMismatch { left: usize, right: usize },
    /// A slope (m, n) was expected to be coprime.
    NonCoprime { m: usize, n: usize },
    /// `reverse_and_scale` was called with d smaller than the degree.
    ReverseDegree { degree: usize, bound: usize },
    /// The affine-Springer-fiber dimension came out non-integral.
    NonIntegerDim { value: String },
    /// Cross-branch contact data is required but missing for branches (i, j).
    MissingContact { i: usize, j: usize },
    /// Invalid input data (validation failure), with a description.
    Invalid(String),
    /// Malformed textual or JSON input.
    Parse(String),
    /// An internal invariant was breached; indicates a bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::PoleAtTOne { order } => {
                write!(f, "pole of order {order} at t = 1")
            }
            Error::DegreeCap { degree, cap } => {
                write!(f, "degree {degree} exceeds the configured cap {cap}")
            }
            Error::SizeMismatch { left, right } => {
                write!(f, "size mismatch: {left} vs {right}")
            }
            Error::NonCoprime { m, n } => {
                write!(f, "slope ({m}, {n}) is not coprime; factor out the gcd first")
            }
            Error::ReverseDegree { degree, bound } => {
                write!(f, "cannot reverse a degree-{degree} polynomial at d = {bound}")
            }
            Error::NonIntegerDim { value } => {
                write!(f, "non-integer dimension {value}; supply explicit contact data")
            }
            Error::MissingContact { i, j } => {
                write!(f, "missing contact valuation for branch pair ({i}, {j})")
            }
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
