use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {name} = {value} must lie strictly between 0 and 1")]
    ParameterOutOfRange { name: &'static str, value: String },

    #[error("gap condition violated at n = {n}: ({next} - {current}) * {min_param} = {product} is not > 1")]
    GapConditionViolated {
        n: usize,
        current: String,
        next: String,
        min_param: String,
        product: String,
    },

    #[error("schedule is not strictly increasing at index {index}")]
    NonIncreasingSchedule { index: usize },

    #[error("schedule must start with a positive integer")]
    NonPositiveSchedule,

    #[error("requested {what} exceeds the generated horizon ({horizon})")]
    DepthExceeded { what: String, horizon: String },

    #[error("{what} needs {needed} items, above the cap of {cap}")]
    CapExceeded { what: String, needed: String, cap: String },

    #[error("k = {k} is outside the envelope range [{low}, {high})")]
    OutOfEnvelopeRange { k: String, low: String, high: String },

    #[error("factors do not share a single schedule")]
    ScheduleMismatch,

    #[error("cube level {level} exceeds truncation level {truncation}")]
    LevelExceedsTruncation { level: usize, truncation: usize },

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("degenerate lambda: lambda = {lambda} <= gamma = {gamma}; the construction needs (lambda - gamma)/d > 0, and dim_P(E x F) >= dim_P E = gamma forces lambda >= gamma anyway")]
    DegenerateLambda { lambda: String, gamma: String },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn depth(what: impl Into<String>, horizon: impl ToString) -> Self {
        Error::DepthExceeded {
            what: what.into(),
            horizon: horizon.to_string(),
        }
    }
}
