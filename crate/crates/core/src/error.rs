use thiserror::Error;

/// Errors raised by the library. Every variant maps to a short stable code
/// used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {p} exceeds the configured cap {cap}")]
    ModulusTooLarge { p: u64, cap: u64 },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("element {value} out of range for modulus {p}")]
    OutOfRange { value: u64, p: u64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("convolution output may exceed 64 bits (bound {0})")]
    Overflow(u128),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid set spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Machine-parsable identifier, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not-prime",
            Error::ModulusTooLarge { .. } => "modulus-too-large",
            Error::ModulusMismatch(..) => "modulus-mismatch",
            Error::OutOfRange { .. } => "out-of-range",
            Error::Empty(_) => "empty-input",
            Error::LengthMismatch(..) => "length-mismatch",
            Error::Overflow(_) => "overflow",
            Error::Precondition(_) => "precondition",
            Error::InvalidSpec { .. } => "invalid-spec",
            Error::Config(_) => "invalid-config",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn spec(spec: &str, reason: impl Into<String>) -> Self {
        Error::InvalidSpec {
            spec: spec.to_string(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
