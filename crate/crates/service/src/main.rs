use argseg_service::{app, AppState, Config, DEFAULT_ADDR};
use tracing_subscriber::EnvFilter;

#[tokio::main]
async fn main() {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .init();

    let config = match Config::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    let addr = std::env::var("ARGSEG_ADDR").unwrap_or_else(|_| DEFAULT_ADDR.to_string());
    let listener = match tokio::net::TcpListener::bind(&addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: ARGSEG_ADDR {addr}: {e}");
            std::process::exit(1);
        }
    };
    tracing::info!(%addr, max_dim = config.max_dim, ttl_secs = config.session_ttl.as_secs(), "listening");
    if let Err(e) = axum::serve(listener, app(AppState::new(config))).await {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
