//! JSON hint service: play Lights Out on any graph over HTTP and ask the
//! solvers for hints and full solutions.

pub mod api;
pub mod session;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::http::HeaderValue;

pub use api::router;
pub use session::{
    CreateSession, Hint, Limits, Method, ServiceError, Session, SessionStore, SessionView, SolutionView,
};

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub addr: SocketAddr,
    pub allow_origin: Option<String>,
    /// Loaded at startup when it exists, written back on shutdown.
    pub snapshot: Option<PathBuf>,
    pub limits: Limits,
}

/// Serves until ctrl-c.
pub async fn serve(config: ServeConfig) -> std::io::Result<()> {
    let store = Arc::new(SessionStore::new(config.limits));
    if let Some(path) = config.snapshot.as_deref().filter(|p| p.exists()) {
        let loaded = store.load_snapshot(path)?;
        tracing::info!(loaded, path = %path.display(), "restored sessions");
    }
    let origin = config
        .allow_origin
        .as_deref()
        .map(HeaderValue::from_str)
        .transpose()
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e))?;

    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(store.clone(), origin))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;

    if let Some(path) = &config.snapshot {
        store.save_snapshot(path)?;
        tracing::info!(sessions = store.len(), path = %path.display(), "saved sessions");
    }
    Ok(())
}
