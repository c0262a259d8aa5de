use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;
use swift_core::{HintError, LookupError, SearchError, SignError, StoreError};

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    InvalidOp(String),
    #[error("{0}")]
    Storage(String),
}

impl ApiError {
    fn parts(&self) -> (StatusCode, &'static str) {
        match self {
            ApiError::NotFound(_) => (StatusCode::NOT_FOUND, "not_found"),
            ApiError::BadRequest(_) => (StatusCode::BAD_REQUEST, "bad_request"),
            ApiError::InvalidOp(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_op"),
            ApiError::Storage(_) => (StatusCode::INTERNAL_SERVER_ERROR, "storage"),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, code) = self.parts();
        let body = json!({ "error": { "code": code, "message": self.to_string() } });
        (status, Json(body)).into_response()
    }
}

impl From<LookupError> for ApiError {
    fn from(e: LookupError) -> Self {
        ApiError::NotFound(e.to_string())
    }
}

impl From<SearchError> for ApiError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Lookup(l) => l.into(),
            other => ApiError::BadRequest(other.to_string()),
        }
    }
}

impl From<HintError> for ApiError {
    fn from(e: HintError) -> Self {
        match e {
            HintError::Lookup(l) => ApiError::BadRequest(l.to_string()),
            other => ApiError::BadRequest(other.to_string()),
        }
    }
}

/// Editing failures are rejected operations, not missing resources.
impl From<SignError> for ApiError {
    fn from(e: SignError) -> Self {
        ApiError::InvalidOp(e.to_string())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(_) => ApiError::NotFound(e.to_string()),
            StoreError::InvalidSign(_) => ApiError::InvalidOp(e.to_string()),
            _ => ApiError::Storage(e.to_string()),
        }
    }
}
