use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid bounds on coordinate {index}: [{low}, {high}]")]
    InvalidBounds { index: usize, low: f64, high: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("objective returned a non-finite value at {point:?}")]
    NumericalFailure { point: Vec<f64> },

    #[error("population is empty")]
    EmptyPopulation,

    #[error("member {index} has not been evaluated")]
    Unevaluated { index: usize },

    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),

    #[error("registry integrity check failed for {name}: deviation {deviation:e} exceeds {tolerance:e}")]
    RegistryIntegrity {
        name: String,
        deviation: f64,
        tolerance: f64,
    },

    #[error("infeasible schedule: {0}")]
    Infeasible(String),

    #[error("parse error in {source_name}: {message}")]
    Parse { source_name: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}
