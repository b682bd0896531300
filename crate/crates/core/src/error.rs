use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unsupported oracle: {0}")]
    UnsupportedOracle(String),

    /// A query needed data beyond what the ball (or another finite model) holds.
    #[error("range error: {what} (lower bound {lower_bound})")]
    Range { what: String, lower_bound: usize },

    #[error("budget exceeded after completing radius {completed_radius}")]
    BudgetExceeded { completed_radius: usize },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn range(what: impl Into<String>, lower_bound: usize) -> Self {
        Error::Range {
            what: what.into(),
            lower_bound,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
