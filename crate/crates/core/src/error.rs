use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Fock cutoff {requested} exceeds the hard cap {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("{what} did not converge within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("argument outside the guaranteed-accuracy region: {0}")]
    OutOfRegion(String),

    #[error("numeric overflow: {0}")]
    Overflow(String),

    #[error("outcome has zero probability")]
    ZeroProbability,

    #[error("no positive root: {0}")]
    NoRoot(String),

    #[error("malformed state data: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
