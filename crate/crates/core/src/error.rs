use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// `m` lies in `(A0 - B0) ∪ (B0 - A0)`; `witness` is a pair `(a, b)` from
    /// `A0 × B0` with `|a - b| = m`.
    #[error("step translation {m} is a difference of the two sets (witness a={}, b={}){}",
        witness.0, witness.1, step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    PreconditionViolated {
        m: usize,
        witness: (usize, usize),
        step: Option<usize>,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("bound {bound} is too small: {reason}")]
    BoundTooSmall { bound: usize, reason: String },

    #[error("interval length {m} exceeds the supported maximum {max}")]
    BoundExceeded { m: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
