use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("operation {0} is not a generator of the module")]
    MissingGenerator(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{0} does not lie in the subalgebra {1}")]
    NotInSubalgebra(String, String),

    #[error("subalgebra {0} is not closed under the antipode")]
    NotAntipodeClosed(String),

    #[error("degenerate Poincaré pairing in degree {0}")]
    DegeneratePairing(i32),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("module validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("inconsistent class degrees: {0}")]
    InconsistentDegrees(String),

    #[error("total class has a non-unit constant term")]
    NonUnitConstant,

    #[error("{family} is not supported at the prime {prime}")]
    UnsupportedPrime { family: String, prime: u32 },

    #[error("operation {0} is not available here")]
    UnsupportedOperation(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown space {0:?}")]
    UnknownSpace(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Error {
        Error::Parse { line, message: message.into() }
    }
}
