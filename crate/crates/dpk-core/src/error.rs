use core::fmt;

/// Errors shared by every analytic operation in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the mathematical domain of the operation.
    Domain(&'static str),
    /// Arguments are structurally inconsistent (sizes, ordering, coverage).
    Argument(&'static str),
    /// The result overflows the representable range.
    Range(&'static str),
    /// The requested size exceeds what the method supports.
    UnsupportedSize { limit: usize, got: usize },
    /// A series or quadrature could not certify the requested accuracy.
    Precision { achieved: f64, required: f64 },
    /// A quantity violated an identity it must satisfy (signals kernel misuse).
    NumericalConsistency(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Argument(msg) => write!(f, "argument error: {msg}"),
            Error::Range(msg) => write!(f, "range error: {msg}"),
            Error::UnsupportedSize { limit, got } => {
                write!(f, "unsupported size: got {got}, limit {limit}")
            }
            Error::Precision { achieved, required } => write!(
                f,
                "precision error: achieved bound {achieved:e}, required {required:e}"
            ),
            Error::NumericalConsistency(msg) => {
                write!(f, "numerical consistency error: {msg}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
