use thiserror::Error;

/// Errors raised by the simulator, the analyzers and the samplers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid vertex pair ({0}, {1}) for n = {2}")]
    InvalidPair(usize, usize, usize),

    #[error("target time {t_end} is before the current clock {clock}")]
    TimeReversal { t_end: f64, clock: f64 },

    #[error("predicate needs {needed} walkers but {registered} are registered")]
    PredicateArity { needed: usize, registered: usize },

    #[error("empty graph")]
    EmptyGraph,

    #[error("graph is not connected")]
    NotConnected,

    #[error("exact isoperimetric constant needs at most {max} vertices, got {got}")]
    TooLargeForExact { got: usize, max: usize },

    #[error("iterated logarithm depth {depth} is invalid for n = {n}")]
    InvalidLogDepth { depth: usize, n: usize },

    #[error("environments have different vertex counts ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("degree sequence has odd sum {0}")]
    OddDegreeSum(usize),

    #[error("degree condition violated: max degree {max_degree} exceeds M^(1/4) = {limit}")]
    DegreeCondition { max_degree: usize, limit: f64 },

    #[error("sampler exhausted {0} retries")]
    RetriesExhausted(usize),

    #[error("oracle supports n <= {max}, got {got}")]
    OracleTooLarge { got: usize, max: usize },

    #[error("{0}")]
    Domain(String),

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
