//! JSON API under `/v1`.

use std::sync::Arc;

use argus_core::dialogue::{certainty_label, Scenario, ScenarioRecord};
use argus_core::belief::DistributionRecord;
use axum::body::Bytes;
use axum::extract::{Path, State as AxumState};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::session::{Session, SessionError, State, TrustInput};
use crate::store::SessionStore;

#[derive(Debug)]
pub struct AppState {
    pub store: SessionStore,
    /// Used when a create request names no scenario.
    pub default_scenario: Option<Arc<Scenario>>,
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/v1/sessions", post(create))
        .route("/v1/sessions/{id}", get(show))
        .route("/v1/sessions/{id}/trace", get(trace))
        .route("/v1/sessions/{id}/trust", post(trust))
        .route("/v1/sessions/{id}/counter", post(counter))
        .route("/v1/sessions/{id}/ranking", post(ranking))
        .route("/v1/sessions/{id}/end", post(end))
        .with_state(state)
}

#[derive(Debug)]
pub enum ApiError {
    NotFound(String),
    Conflict(String),
    Unprocessable(String),
    Degenerate { timestep: u64, message: String },
    Internal(String),
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::OutOfOrder { .. } => ApiError::Conflict(e.to_string()),
            SessionError::Invalid(m) => ApiError::Unprocessable(m),
            SessionError::Degenerate { timestep, message } => ApiError::Degenerate { timestep, message },
            SessionError::Internal(m) => ApiError::Internal(m),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, json!({"error": "not_found", "message": m})),
            ApiError::Conflict(m) => (StatusCode::CONFLICT, json!({"error": "conflict", "message": m})),
            ApiError::Unprocessable(m) => {
                (StatusCode::UNPROCESSABLE_ENTITY, json!({"error": "invalid_request", "message": m}))
            }
            ApiError::Degenerate { timestep, message } => (
                StatusCode::INTERNAL_SERVER_ERROR,
                json!({"error": "degenerate_update", "timestep": timestep, "message": message}),
            ),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, json!({"error": "internal", "message": m})),
        };
        (status, Json(body)).into_response()
    }
}

/// Parses a request body; any syntax, type or shape problem is a 422.
fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::Unprocessable(e.to_string()))
}

#[derive(Debug, Serialize)]
pub struct ArgumentView {
    pub premises: Vec<String>,
    pub claim: String,
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct CounterOption {
    pub index: usize,
    pub premises: Vec<String>,
    pub claim: String,
    pub certainty: f64,
    pub label: &'static str,
    pub cue: String,
}

#[derive(Debug, Serialize)]
pub struct SessionView {
    pub id: String,
    pub scenario: String,
    pub state: State,
    pub round: usize,
    pub max_rounds: usize,
    pub agent_argument: Option<ArgumentView>,
    pub trust_levels: Vec<argus_core::dialogue::TrustLevel>,
    pub counter_options: Vec<CounterOption>,
    pub perspectives: Vec<String>,
    pub perspective_beliefs: Vec<f64>,
    pub framework_ranking: Vec<usize>,
    pub distribution: DistributionRecord,
    pub round_rho: Vec<f64>,
    pub last_rho: Option<f64>,
    pub warnings: Vec<String>,
    pub created_at: u64,
    pub updated_at: u64,
}

pub fn view(s: &Session) -> SessionView {
    let v = &s.scenario.vocab;
    let d = s.distribution();
    let perspectives = &s.scenario.perspectives;
    SessionView {
        id: s.id.clone(),
        scenario: s.scenario.name.clone(),
        state: s.state,
        round: s.round(),
        max_rounds: s.scenario.max_rounds,
        agent_argument: s.pending.as_ref().map(|a| ArgumentView {
            premises: a.premise_texts(v),
            claim: a.claim_text(v),
            text: a.to_text(v),
        }),
        trust_levels: s.scenario.trust_levels.clone(),
        counter_options: s
            .scenario
            .human_pool
            .iter()
            .enumerate()
            .map(|(index, e)| CounterOption {
                index,
                premises: e.argument.premise_texts(v),
                claim: e.argument.claim_text(v),
                certainty: e.certainty,
                label: certainty_label(e.certainty).unwrap_or(""),
                cue: e.cue.clone(),
            })
            .collect(),
        perspectives: perspectives.iter().map(|f| f.to_text(v)).collect(),
        perspective_beliefs: perspectives.iter().map(|f| d.degree_of_belief(f).unwrap_or(f64::NAN)).collect(),
        framework_ranking: d.rank_perspectives(perspectives).unwrap_or_default(),
        distribution: d.to_record(),
        round_rho: s.round_rho.clone(),
        last_rho: s.round_rho.last().copied(),
        warnings: s.warnings.clone(),
        created_at: s.created_at,
        updated_at: s.updated_at,
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateBody {
    #[serde(default)]
    scenario: Option<ScenarioRecord>,
}

async fn create(AxumState(app): AxumState<Arc<AppState>>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: CreateBody = if bytes.is_empty() { CreateBody { scenario: None } } else { body(&bytes)? };
    let scenario = match req.scenario {
        Some(r) => Arc::new(Scenario::from_record(r).map_err(|e| ApiError::Unprocessable(e.to_string()))?),
        None => app
            .default_scenario
            .clone()
            .ok_or_else(|| ApiError::Unprocessable("no scenario given and the server has no default".into()))?,
    };
    let session = Session::create(uuid::Uuid::new_v4().to_string(), scenario)?;
    let v = view(&session);
    app.store.insert(session).await.map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok((StatusCode::CREATED, Json(v)).into_response())
}

async fn show(AxumState(app): AxumState<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let handle = app.store.get(&id).await.ok_or_else(|| ApiError::NotFound(format!("no session {id}")))?;
    let s = handle.lock().await;
    Ok(Json(view(&s)))
}

async fn trace(AxumState(app): AxumState<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let handle = app.store.get(&id).await.ok_or_else(|| ApiError::NotFound(format!("no session {id}")))?;
    let s = handle.lock().await;
    Ok(([(header::CONTENT_TYPE, "application/json")], s.trace.to_json()).into_response())
}

/// Runs `f` on the session under its lock and persists the result.
async fn mutate<F>(app: &AppState, id: &str, f: F) -> Result<Json<SessionView>, ApiError>
where
    F: FnOnce(&mut Session) -> Result<(), SessionError>,
{
    let handle = app.store.get(id).await.ok_or_else(|| ApiError::NotFound(format!("no session {id}")))?;
    let mut s = handle.lock().await;
    let mut next = s.clone();
    f(&mut next)?;
    app.store.persist(&next).map_err(|e| ApiError::Internal(e.to_string()))?;
    *s = next;
    Ok(Json(view(&s)))
}

async fn trust(
    AxumState(app): AxumState<Arc<AppState>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> Result<Json<SessionView>, ApiError> {
    let input: TrustInput = body(&bytes)?;
    mutate(&app, &id, |s| s.trust(&input)).await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CounterBody {
    pool_index: Option<usize>,
}

async fn counter(
    AxumState(app): AxumState<Arc<AppState>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> Result<Json<SessionView>, ApiError> {
    let req: CounterBody = body(&bytes)?;
    mutate(&app, &id, |s| s.counter(req.pool_index)).await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RankingBody {
    permutation: Vec<usize>,
}

async fn ranking(
    AxumState(app): AxumState<Arc<AppState>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> Result<Json<SessionView>, ApiError> {
    let req: RankingBody = body(&bytes)?;
    mutate(&app, &id, |s| s.ranking(&req.permutation).map(|_| ())).await
}

async fn end(AxumState(app): AxumState<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    mutate(&app, &id, Session::end).await
}
