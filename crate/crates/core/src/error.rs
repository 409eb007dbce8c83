use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("subspace spanned by the given elements is linearly dependent")]
    DependentSubspace,

    #[error("invalid Jordan-Chevalley split: failed checks {0:?}")]
    InvalidSplit(Vec<String>),

    /// An exact internal consistency check failed. Indicates an arithmetic bug,
    /// never bad user input.
    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error("invalid input at {location}: {message}")]
    Input { location: String, message: String },
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }

    pub(crate) fn input(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input {
            location: location.into(),
            message: message.into(),
        }
    }
}
