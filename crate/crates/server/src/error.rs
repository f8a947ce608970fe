use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use edupack_core::play::PlayError;
use edupack_core::store::StoreError;
use edupack_core::{CatalogError, PackError, ValidationReport};
use serde::Serialize;
use serde_json::json;

/// Every error body carries one of these codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    BadRequest,
    Unauthenticated,
    InvalidCredentials,
    Forbidden,
    NotFound,
    MethodNotAllowed,
    Conflict,
    ValidationFailed,
    NoQuiz,
    UnsupportedPackVersion,
    MalformedPack,
    ReadOnly,
    Internal,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 13] = [
        ErrorCode::BadRequest,
        ErrorCode::Unauthenticated,
        ErrorCode::InvalidCredentials,
        ErrorCode::Forbidden,
        ErrorCode::NotFound,
        ErrorCode::MethodNotAllowed,
        ErrorCode::Conflict,
        ErrorCode::ValidationFailed,
        ErrorCode::NoQuiz,
        ErrorCode::UnsupportedPackVersion,
        ErrorCode::MalformedPack,
        ErrorCode::ReadOnly,
        ErrorCode::Internal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::BadRequest => "BAD_REQUEST",
            ErrorCode::Unauthenticated => "UNAUTHENTICATED",
            ErrorCode::InvalidCredentials => "INVALID_CREDENTIALS",
            ErrorCode::Forbidden => "FORBIDDEN",
            ErrorCode::NotFound => "NOT_FOUND",
            ErrorCode::MethodNotAllowed => "METHOD_NOT_ALLOWED",
            ErrorCode::Conflict => "CONFLICT",
            ErrorCode::ValidationFailed => "VALIDATION_FAILED",
            ErrorCode::NoQuiz => "NO_QUIZ",
            ErrorCode::UnsupportedPackVersion => "UNSUPPORTED_PACK_VERSION",
            ErrorCode::MalformedPack => "MALFORMED_PACK",
            ErrorCode::ReadOnly => "READ_ONLY",
            ErrorCode::Internal => "INTERNAL",
        }
    }

    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::BadRequest | ErrorCode::MalformedPack => StatusCode::BAD_REQUEST,
            ErrorCode::Unauthenticated | ErrorCode::InvalidCredentials => StatusCode::UNAUTHORIZED,
            ErrorCode::Forbidden => StatusCode::FORBIDDEN,
            ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::MethodNotAllowed => StatusCode::METHOD_NOT_ALLOWED,
            ErrorCode::Conflict => StatusCode::CONFLICT,
            ErrorCode::ValidationFailed | ErrorCode::NoQuiz | ErrorCode::UnsupportedPackVersion => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            ErrorCode::ReadOnly => StatusCode::SERVICE_UNAVAILABLE,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    pub report: Option<ValidationReport>,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            report: None,
        }
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::NotFound, message)
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::BadRequest, message)
    }

    fn validation(report: &ValidationReport) -> Self {
        Self {
            code: ErrorCode::ValidationFailed,
            message: format!("validation failed with {} violation(s)", report.violations.len()),
            report: Some(report.clone()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut error = json!({ "code": self.code, "message": self.message });
        if let Some(report) = &self.report {
            error["report"] = serde_json::to_value(report).unwrap_or_default();
        }
        (self.code.status(), Json(json!({ "error": error }))).into_response()
    }
}

impl From<CatalogError> for ApiError {
    fn from(e: CatalogError) -> Self {
        let code = match &e {
            CatalogError::UnknownModule(_) | CatalogError::UnknownResource { .. } => ErrorCode::NotFound,
            CatalogError::Validation(report) => return ApiError::validation(report),
            CatalogError::UnknownLocale(_)
            | CatalogError::MalformedLanguageCode(_)
            | CatalogError::SourceLocale(_)
            | CatalogError::InvalidStatus(_) => ErrorCode::BadRequest,
            CatalogError::DuplicateLanguage(_) | CatalogError::SourceLocaleChange(_) => ErrorCode::Conflict,
        };
        ApiError::new(code, e.to_string())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        if let Some(report) = e.report() {
            return ApiError::validation(report);
        }
        let code = match &e {
            StoreError::Catalog(inner) => return inner.clone().into(),
            StoreError::Pack(PackError::VersionMismatch { .. }) => ErrorCode::UnsupportedPackVersion,
            StoreError::Pack(PackError::Parse(_)) => ErrorCode::MalformedPack,
            StoreError::DuplicateLogin(_) => ErrorCode::Conflict,
            StoreError::WeakPassword
            | StoreError::BlankLogin
            | StoreError::MissingGrants
            | StoreError::UnexpectedGrants => ErrorCode::BadRequest,
            StoreError::UnknownUser(_) => ErrorCode::NotFound,
            StoreError::ReadOnly | StoreError::Locked(_) => ErrorCode::ReadOnly,
            _ => ErrorCode::Internal,
        };
        ApiError::new(code, e.to_string())
    }
}

impl From<PlayError> for ApiError {
    fn from(e: PlayError) -> Self {
        let code = match e {
            PlayError::EmptyQuiz => ErrorCode::NoQuiz,
            PlayError::UnknownQuestion(_)
            | PlayError::UnknownProposition(_)
            | PlayError::UnknownCard(_)
            | PlayError::UnknownCategory(_) => ErrorCode::NotFound,
            _ => ErrorCode::BadRequest,
        };
        ApiError::new(code, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl From<PathRejection> for ApiError {
    fn from(e: PathRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}
