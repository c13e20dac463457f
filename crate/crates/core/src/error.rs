use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes via [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("n = {n} is out of range (need n >= {min})")]
    RankTooSmall { n: usize, min: usize },

    #[error("not a root: {0}")]
    NotARoot(String),

    #[error("vector is not orthogonal to the canonical vector")]
    NotOrthogonal,

    #[error("letter {letter} is not a generator index for n = {n}")]
    InvalidLetter { letter: usize, n: usize },

    #[error("matrix does not preserve the intersection form")]
    NotAnIsometry,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("undefined{}: {reason}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    Domain { step: Option<usize>, reason: String },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn domain(reason: impl Into<String>) -> Self {
        Error::Domain {
            step: None,
            reason: reason.into(),
        }
    }

    pub fn at_step(self, step: usize) -> Self {
        match self {
            Error::Domain { reason, .. } => Error::Domain {
                step: Some(step),
                reason,
            },
            other => other,
        }
    }

    /// 1 = usage, 2 = domain violation, 3 = inconclusive search.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Parse(_) | Error::DimensionMismatch { .. } => 1,
            Error::Inconclusive(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
