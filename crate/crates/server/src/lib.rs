//! HTTP facade over an edupack repository.
//!
//! The learner surface is open, pedagogical support needs the
//! `X-Teacher-Mode: true` header or a token, and authoring needs a bearer
//! token from `POST /api/v1/auth/login`, checked against [`RoleMatrix`].

pub mod access;
mod api;
pub mod config;
pub mod error;
pub mod scrub;
pub mod token;

pub use access::{Action, Decision, Principal, RoleMatrix};
pub use api::{router, AppState, TEACHER_MODE_HEADER};
pub use config::ServerConfig;
pub use error::{ApiError, ErrorCode};
pub use token::{Claims, TokenSigner};

use edupack_core::store::Repository;

/// Opens the repository and serves until the process stops.
pub async fn serve(config: ServerConfig) -> std::io::Result<()> {
    let repo = Repository::open(&config.data_dir).map_err(std::io::Error::other)?;
    let state = AppState::new(repo, TokenSigner::new(config.token_secret, config.token_ttl_secs));
    let listener = tokio::net::TcpListener::bind(config.bind).await?;
    axum::serve(listener, router(state)).await
}
