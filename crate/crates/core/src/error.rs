use thiserror::Error;

/// Errors raised by set construction, porosity checks and pretangent simulation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty set")]
    EmptySet,
    #[error("non-finite or nonpositive input: {0}")]
    NonFinite(String),
    #[error("nonpositive difference")]
    NonpositiveDifference,
    #[error("outside truncation window")]
    OutsideWindow,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("seed family is not self-stable: members {0} and {1} are not mutually stable")]
    SeedNotSelfStable(usize, usize),
    #[error("tolerance too coarse for quotient: classes {0} and {1}")]
    ToleranceTooCoarse(usize, usize),
    #[error("unrefinable pair ({0}, {1})")]
    UnrefinablePair(String, String),
    #[error("empty sample")]
    EmptySample,
    #[error("metric axiom violated: {0}")]
    MetricAxiom(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
