use thiserror::Error;

use crate::arg::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {0} not found")]
    VertexNotFound(VertexId),

    #[error("empty model: no stroke pixel lands on a region of the image")]
    EmptyModel,

    #[error("empty input: no region intersects the active rectangle")]
    EmptyInput,

    #[error("invalid placement: {0}")]
    InvalidPlacement(String),

    #[error("internal consistency: {0}")]
    Inconsistent(String),

    #[error("format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
