use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid arrangement: {0}")]
    Arrangement(String),
    #[error("unknown flat {0}")]
    UnknownFlat(String),
    #[error("not an arrow: {0}")]
    NotAnArrow(String),
    #[error("degenerate reference form")]
    DegenerateForm,
    #[error("representations live on different graphs")]
    GraphMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("formula reading violated: {0}")]
    Reading(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
