//! Error type shared by constructors, file parsers and the validators.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid group family parameters: {0}")]
    BadFamily(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("linear algebra backend failure: {0}")]
    Linalg(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
