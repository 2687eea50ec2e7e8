use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;

/// An error response: status, message and, for request errors, the name of
/// the offending field.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct ApiError {
    pub status: StatusCode,
    pub field: Option<&'static str>,
    pub message: String,
}

impl ApiError {
    pub fn bad_field(field: &'static str, message: impl std::fmt::Display) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, field: Some(field), message: format!("{field}: {message}") }
    }

    pub fn not_found(id: &str) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, field: None, message: format!("unknown session {id}") }
    }

    pub fn too_large(width: u32, height: u32, max_dim: u32) -> Self {
        ApiError {
            status: StatusCode::PAYLOAD_TOO_LARGE,
            field: Some("image"),
            message: format!("image: {width}x{height} exceeds the {max_dim}x{max_dim} size cap"),
        }
    }

    /// Maps a pipeline error raised while handling `field`.
    pub fn pipeline(field: &'static str, err: argseg_core::Error) -> Self {
        use argseg_core::Error as E;
        let status = match err {
            E::EmptyModel | E::EmptyInput => StatusCode::UNPROCESSABLE_ENTITY,
            E::InvalidArgument(_) | E::InvalidPlacement(_) | E::Format(_) | E::Json(_) | E::Image(_) => {
                StatusCode::BAD_REQUEST
            }
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError { status, field: Some(field), message: format!("{field}: {err}") }
    }

    pub fn internal(err: impl std::fmt::Display) -> Self {
        ApiError { status: StatusCode::INTERNAL_SERVER_ERROR, field: None, message: err.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message, "field": self.field }))).into_response()
    }
}
