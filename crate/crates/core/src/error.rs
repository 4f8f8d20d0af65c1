use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("index out of range: {what} = {value}, valid range is [1, {max}]")]
    OutOfRange { what: &'static str, value: usize, max: usize },

    #[error("solver did not converge after {iterations} iterations (optimality gap {gap:e})")]
    NotConverged { iterations: usize, gap: f64 },

    #[error("feedback payload does not match the learner's feedback mode")]
    PayloadMismatch,

    #[error("loss sequence has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("need {needed} examples, only {available} available")]
    InsufficientExamples { needed: usize, available: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
