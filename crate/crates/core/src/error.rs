use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormationError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid formation spec: {0}")]
    InvalidSpec(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, FormationError>;

pub(crate) fn invalid_input(msg: impl Into<String>) -> FormationError {
    FormationError::InvalidInput(msg.into())
}
