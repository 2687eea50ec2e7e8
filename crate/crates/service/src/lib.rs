//! HTTP session service for interactive segmentation.
//!
//! A session holds one uploaded image and its cached watershed partitions.
//! Requests on the same session are serialized; distinct sessions run
//! concurrently.

mod error;
mod routes;
mod session;

use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::extract::{DefaultBodyLimit, Request};
use axum::middleware::{self, Next};
use axum::response::Response;
use axum::routing::{get, post};
use axum::Router;

pub use error::ApiError;
pub use session::{Session, SessionStore};

pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";
pub const DEFAULT_MAX_DIM: u32 = 4096;
pub const DEFAULT_SESSION_TTL: Duration = Duration::from_secs(30 * 60);

#[derive(Debug, Clone)]
pub struct Config {
    /// Largest accepted image width or height.
    pub max_dim: u32,
    /// Idle time after which a session is dropped.
    pub session_ttl: Duration,
}

impl Default for Config {
    fn default() -> Self {
        Config { max_dim: DEFAULT_MAX_DIM, session_ttl: DEFAULT_SESSION_TTL }
    }
}

impl Config {
    /// Reads `ARGSEG_MAX_DIM` and `ARGSEG_SESSION_TTL_SECS`, falling back to
    /// the defaults when unset.
    pub fn from_env() -> Result<Config, String> {
        let mut config = Config::default();
        if let Ok(v) = std::env::var("ARGSEG_MAX_DIM") {
            config.max_dim = v.parse().ok().filter(|&d| d > 0).ok_or(format!("ARGSEG_MAX_DIM: not a positive integer: {v}"))?;
        }
        if let Ok(v) = std::env::var("ARGSEG_SESSION_TTL_SECS") {
            let secs: u64 = v.parse().map_err(|_| format!("ARGSEG_SESSION_TTL_SECS: not an integer: {v}"))?;
            config.session_ttl = Duration::from_secs(secs);
        }
        Ok(config)
    }

    /// Request body limit: a base64 PNG of the largest accepted image, with
    /// room for an incompressible encoding.
    fn body_limit(&self) -> usize {
        let raw = self.max_dim as usize * self.max_dim as usize * 3;
        (raw / 3 * 4 * 5 / 4).max(16 << 20)
    }
}

#[derive(Clone)]
pub struct AppState {
    pub config: Arc<Config>,
    pub store: Arc<SessionStore>,
}

impl AppState {
    pub fn new(config: Config) -> Self {
        let store = Arc::new(SessionStore::new(config.session_ttl));
        AppState { config: Arc::new(config), store }
    }
}

pub fn app(state: AppState) -> Router {
    let limit = state.config.body_limit();
    Router::new()
        .route("/sessions", post(routes::create_session))
        .route("/sessions/{id}", axum::routing::delete(routes::delete_session))
        .route("/sessions/{id}/segment", post(routes::segment))
        .route("/sessions/{id}/stamp", post(routes::stamp))
        .route("/sessions/{id}/apply", post(routes::apply))
        .route("/sessions/{id}/partition", get(routes::partition))
        .layer(DefaultBodyLimit::max(limit))
        .layer(middleware::from_fn(log_request))
        .with_state(state)
}

async fn log_request(req: Request, next: Next) -> Response {
    let (method, path) = (req.method().clone(), req.uri().path().to_owned());
    let start = Instant::now();
    let response = next.run(req).await;
    tracing::info!(
        method = %method,
        path = %path,
        status = response.status().as_u16(),
        ms = format_args!("{:.1}", start.elapsed().as_secs_f64() * 1e3),
        "request"
    );
    response
}
