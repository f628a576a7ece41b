use alloc::string::String;
use core::fmt;

/// Errors shared by all modules of the engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Mismatched fields, lengths, degrees or matrix shapes.
    Shape(String),
    /// A truncation parameter was exceeded (Witt length cap, F-degree cap,
    /// or a mod-p^m request without precision headroom).
    PrecisionLimit(String),
    /// Geometric-series inversion failed: the operator is not nilpotent at
    /// the working precision within the given bound.
    NotNilpotent(String),
    /// The variety kind is not part of the closed-form catalog.
    UnsupportedVariety(String),
    /// The enumeration oracle refuses inputs past its size bound.
    OracleBound(String),
    /// An internal cross-check failed (solver paths disagree, a constructed
    /// module violates the ring relations, ...). Drivers must abort loudly.
    InvariantViolation(String),
    /// A malformed table request.
    InvalidRequest(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(m) => write!(f, "shape error: {m}"),
            Error::PrecisionLimit(m) => write!(f, "precision limit: {m}"),
            Error::NotNilpotent(m) => write!(f, "not nilpotent: {m}"),
            Error::UnsupportedVariety(m) => write!(f, "unsupported variety: {m}"),
            Error::OracleBound(m) => write!(f, "oracle bound exceeded: {m}"),
            Error::InvariantViolation(m) => write!(f, "invariant violation: {m}"),
            Error::InvalidRequest(m) => write!(f, "invalid request: {m}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
