use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

use codetutor_core::validate::ValidationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorCode {
    NotFound,
    EmptyCode,
    InvalidCode,
    Upstream,
    BadRequest,
}

/// Error body returned by every endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    /// Present exactly when `code` is `InvalidCode`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<ValidationReport>,
    #[serde(skip)]
    status: Option<StatusCode>,
}

impl ApiError {
    fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            details: None,
            status: None,
        }
    }

    pub fn not_found(what: impl Into<String>) -> Self {
        Self::new(ErrorCode::NotFound, what)
    }

    pub fn empty_code() -> Self {
        Self::new(ErrorCode::EmptyCode, "the submitted code is empty")
    }

    pub fn invalid_code(report: ValidationReport) -> Self {
        let message = report
            .findings
            .first()
            .map(|f| format!("line {}: {}", f.line, f.message))
            .unwrap_or_else(|| "the submitted code is not valid Python".to_string());
        Self {
            details: Some(report),
            ..Self::new(ErrorCode::InvalidCode, message)
        }
    }

    pub fn upstream(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::Upstream, message)
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::BadRequest, message)
    }

    /// Same body, different status; used for readiness and rate limiting.
    pub fn with_status(mut self, status: StatusCode) -> Self {
        self.status = Some(status);
        self
    }

    pub fn status(&self) -> StatusCode {
        self.status.unwrap_or(match self.code {
            ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::EmptyCode | ErrorCode::InvalidCode => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorCode::Upstream => StatusCode::BAD_GATEWAY,
            ErrorCode::BadRequest => StatusCode::BAD_REQUEST,
        })
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self)).into_response()
    }
}
