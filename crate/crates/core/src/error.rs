use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An input violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown project `{0}`")]
    UnknownProject(String),

    #[error("unknown voter {0}")]
    UnknownVoter(usize),

    #[error("invalid rational `{0}`")]
    ParseRational(String),

    /// Exhaustive search refused because the instance exceeds the configured cap.
    #[error("{what} = {actual} exceeds the exhaustive-search cap of {cap}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        cap: usize,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
