use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no exit before the guard horizon {horizon} (after {steps} steps)")]
    GuardExceeded { horizon: f64, steps: u64 },

    #[error(
        "rejection budget exceeded: {accepted} of {requested} accepted after {attempts} attempts \
         (cap {cap}); use the limit-law sampler for thresholds this large"
    )]
    BudgetExceeded {
        requested: usize,
        accepted: usize,
        attempts: u64,
        cap: u64,
    },

    #[error("tail of `{model}` underflows to zero at r = {r}")]
    ZeroTail { model: String, r: f64 },

    #[error("tail of `{model}` never reaches {target} on [{lo}, {hi}]")]
    NoBracket {
        model: String,
        target: f64,
        lo: f64,
        hi: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("empty sample")]
    EmptySample,

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed sample file: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::GuardExceeded { .. } => "guard_exceeded",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::ZeroTail { .. } => "zero_tail",
            Error::NoBracket { .. } => "no_bracket",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::EmptySample => "empty_sample",
            Error::Io(_) => "io",
            Error::Format(_) => "format",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
