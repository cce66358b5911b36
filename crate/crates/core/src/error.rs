use thiserror::Error;

/// Every failure the toolkit reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown token `{0}`")]
    UnknownToken(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("{what} too large: {detail}")]
    TooLarge { what: &'static str, detail: String },

    #[error("basis computation too large: exceeded budget of {budget} reductions")]
    BudgetExceeded { budget: u64 },

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eigen-decomposition did not converge within {0} iterations")]
    NonConvergence(usize),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Size guards and budgets are refusals, not input errors.
    pub fn is_size_refusal(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::BudgetExceeded { .. })
    }

    pub(crate) fn too_large(what: &'static str, detail: impl Into<String>) -> Self {
        Error::TooLarge {
            what,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(format!("json: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
