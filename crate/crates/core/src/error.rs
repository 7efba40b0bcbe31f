use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("morphism not well-defined: {0}")]
    NotWellDefined(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ring mismatch: Z/{0} vs Z/{1}")]
    RingMismatch(u64, u64),
    #[error("domain mismatch: {0}")]
    Mismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for errors caused by bad input text or shapes, as opposed to
    /// well-formed input that fails a mathematical precondition.
    pub fn is_malformed(&self) -> bool {
        matches!(self, Error::Malformed(_) | Error::InvalidModule(_) | Error::NotWellDefined(_) | Error::Shape(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
