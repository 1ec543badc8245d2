//! HTTP routes over a [`SessionStore`].
//!
//! | route                             | body / query        |
//! |-----------------------------------|---------------------|
//! | `POST /sessions`                  | [`CreateSession`]   |
//! | `GET /sessions/{id}`              |                     |
//! | `POST /sessions/{id}/press`       | `{"vertex": v}`     |
//! | `GET /sessions/{id}/hint`         |                     |
//! | `GET /sessions/{id}/solution`     | `?method=gf2|inductive` |
//! | `POST /sessions/{id}/scramble`    | `{"k": n, "seed": s}` |
//! | `POST /sessions/{id}/reset`       |                     |
//!
//! Failures answer `{"error": "..."}` with 400, 404, 409 or 422.

use std::collections::HashMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{HeaderValue, Method as HttpMethod, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use tower_http::cors::CorsLayer;

use crate::session::{Method, ServiceError, SessionStore};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match self {
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::CapExceeded(_) => StatusCode::UNPROCESSABLE_ENTITY,
        };
        (status, Json(serde_json::json!({ "error": self.to_string() }))).into_response()
    }
}

type Store = Arc<SessionStore>;
type ApiResult = Result<Response, ServiceError>;

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ServiceError> {
    serde_json::from_slice(body).map_err(|e| ServiceError::BadRequest(format!("malformed request body: {e}")))
}

/// Solver work happens off the async workers.
async fn blocking<T: serde::Serialize + Send + 'static>(
    f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static,
) -> ApiResult {
    let value = tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::Conflict(format!("request aborted: {e}")))??;
    Ok(Json(value).into_response())
}

async fn create(State(store): State<Store>, body: Bytes) -> ApiResult {
    let req = parse_body(&body)?;
    let mut response = blocking(move || store.create(req)).await?;
    *response.status_mut() = StatusCode::CREATED;
    Ok(response)
}

async fn show(State(store): State<Store>, Path(id): Path<String>) -> ApiResult {
    blocking(move || store.view(&id)).await
}

#[derive(Deserialize)]
struct PressBody {
    vertex: usize,
}

async fn press(State(store): State<Store>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let PressBody { vertex } = parse_body(&body)?;
    blocking(move || store.press(&id, vertex)).await
}

async fn hint(State(store): State<Store>, Path(id): Path<String>) -> ApiResult {
    blocking(move || store.hint(&id)).await
}

async fn solution(
    State(store): State<Store>,
    Path(id): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult {
    let method: Method = query.get("method").map_or(Ok(Method::Gf2), |m| m.parse())?;
    blocking(move || store.solution(&id, method)).await
}

#[derive(Deserialize)]
struct ScrambleBody {
    k: usize,
    #[serde(default)]
    seed: Option<u64>,
}

async fn scramble(State(store): State<Store>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let ScrambleBody { k, seed } = parse_body(&body)?;
    blocking(move || store.scramble(&id, k, seed)).await
}

async fn reset(State(store): State<Store>, Path(id): Path<String>) -> ApiResult {
    blocking(move || store.reset(&id)).await
}

/// The API routes, with CORS opened to `allow_origin` when given.
pub fn router(store: Store, allow_origin: Option<HeaderValue>) -> Router {
    let routes = Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/press", post(press))
        .route("/sessions/{id}/hint", get(hint))
        .route("/sessions/{id}/solution", get(solution))
        .route("/sessions/{id}/scramble", post(scramble))
        .route("/sessions/{id}/reset", post(reset))
        .with_state(store);
    match allow_origin {
        Some(origin) => routes.layer(
            CorsLayer::new()
                .allow_origin(origin)
                .allow_methods([HttpMethod::GET, HttpMethod::POST])
                .allow_headers([axum::http::header::CONTENT_TYPE]),
        ),
        None => routes,
    }
}
