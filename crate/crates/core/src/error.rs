use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("register {register} out of range for a state with {count} registers")]
    RegisterOutOfRange { register: usize, count: usize },

    #[error("{what} = {value} out of range [0, {bound})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("malformed unitary set: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) => 3,
            Error::VerificationFailed(_) => 1,
            _ => 2,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn out_of_range(what: &'static str, value: usize, bound: usize) -> Self {
        Error::OutOfRange { what, value, bound }
    }
}
