//! HTTP session API: build a QP, mutate it vertex by vertex, undo.

use std::collections::HashMap;
use std::path::{Path as FsPath, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use qpcat_core::jacobian::truncated_quotient;
use qpcat_core::qp_mutation::{qp_mutate, QpMutationError};
use qpcat_core::substitution::DEFAULT_TRUNCATION;
use qpcat_core::{Potential, Qp, Quiver, QuiverError, VertexId};

use crate::builders::{self, BuilderParams, CATALOG};

pub const UNDO_DEPTH: usize = 256;
/// Degree bound for the Jacobian dims returned after a QP-mutation.
pub const DIMS_TRUNCATION: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QpState {
    pub quiver: Quiver,
    /// Cleared by quiver-mode mutation.
    pub potential: Option<Potential>,
}

impl QpState {
    fn from_qp(qp: Qp) -> Self {
        let (quiver, potential) = qp.into_parts();
        QpState { quiver, potential: Some(potential) }
    }

    fn qp(&self) -> Option<Qp> {
        self.potential.as_ref().and_then(|w| Qp::new(self.quiver.clone(), w.clone()).ok())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Quiver,
    Qp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub vertex: VertexId,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub created_at: u64,
    pub builder: String,
    pub params: BuilderParams,
    pub truncation: usize,
    pub initial: QpState,
    pub current: QpState,
    pub undo: Vec<QpState>,
    pub log: Vec<LogEntry>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into() }
    }

    fn bad_request(m: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, m)
    }

    fn conflict(m: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, m)
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("no session {}", id))
    }

    fn internal(m: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, m)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub struct AppState {
    dir: PathBuf,
    locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

impl AppState {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Arc<Self>> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Arc::new(AppState { dir, locks: Mutex::new(HashMap::new()) }))
    }

    fn lock_for(&self, id: &str) -> Arc<tokio::sync::Mutex<()>> {
        self.locks.lock().unwrap().entry(id.to_string()).or_default().clone()
    }

    fn path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{}.json", id))
    }

    fn load(&self, id: &str) -> ApiResult<Session> {
        if !valid_id(id) {
            return Err(ApiError::not_found(id));
        }
        let text = match std::fs::read_to_string(self.path(id)) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(ApiError::not_found(id)),
            Err(e) => return Err(ApiError::internal(e.to_string())),
        };
        serde_json::from_str(&text).map_err(|e| ApiError::internal(format!("corrupt session file: {}", e)))
    }

    fn store(&self, s: &Session) -> ApiResult<()> {
        write_atomic(&self.path(&s.id), &serde_json::to_vec_pretty(s).unwrap()).map_err(|e| ApiError::internal(e.to_string()))
    }
}

fn write_atomic(path: &FsPath, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(tmp, path)
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.chars().all(|c| c.is_ascii_hexdigit() || c == '-')
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/builders", get(list_builders))
        .route("/session", post(create_session))
        .route("/session/{id}", get(get_session))
        .route("/session/{id}/mutate", post(mutate))
        .route("/session/{id}/undo", post(undo))
        .with_state(state)
}

pub async fn serve(port: u16, dir: PathBuf) -> std::io::Result<()> {
    let state = AppState::new(dir)?;
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    axum::serve(listener, router(state)).await
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed body: {}", e)))
}

async fn list_builders() -> Json<Value> {
    let mut list = serde_json::to_value(CATALOG).unwrap();
    list.as_array_mut().unwrap().push(json!({ "kind": "custom", "params": ["qp"], "description": "an explicit QP given as JSON" }));
    Json(list)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateBody {
    builder: String,
    #[serde(default)]
    params: BuilderParams,
    #[serde(default)]
    truncation: Option<usize>,
    #[serde(default)]
    qp: Option<Qp>,
}

#[derive(Deserialize, Default)]
struct ViewQuery {
    #[serde(default)]
    verbose: bool,
}

#[derive(Serialize)]
struct LayoutHint {
    vertex: VertexId,
    x: f64,
    y: f64,
}

/// Vertices evenly spaced on the unit circle in declaration order.
fn layout(q: &Quiver) -> Vec<LayoutHint> {
    let n = q.num_vertices().max(1) as f64;
    let round = |x: f64| (x * 1000.0).round() / 1000.0;
    q.vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let t = std::f64::consts::TAU * i as f64 / n;
            LayoutHint { vertex: v.clone(), x: round(t.cos()) + 0.0, y: round(t.sin()) + 0.0 }
        })
        .collect()
}

fn view(s: &Session, verbose: bool) -> Value {
    let q = &s.current.quiver;
    let mut v = json!({
        "id": s.id,
        "builder": s.builder,
        "params": s.params,
        "truncation": s.truncation,
        "created_at": s.created_at,
        "quiver": q,
        "has_potential": s.current.potential.is_some(),
        "two_acyclic": q.is_two_acyclic(),
        "acyclic": q.is_acyclic(),
        "history": s.log,
        "undo_depth": s.undo.len(),
        "layout": layout(q),
    });
    if verbose {
        v["potential"] = serde_json::to_value(&s.current.potential).unwrap();
    }
    v
}

async fn create_session(State(st): State<Arc<AppState>>, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let body: CreateBody = parse_body(&body)?;
    let qp = if body.builder == "custom" {
        body.qp.ok_or_else(|| ApiError::bad_request("builder custom needs a qp"))?
    } else {
        builders::build(&body.builder, &body.params).map_err(|e| ApiError::bad_request(e.to_string()))?
    };
    let truncation = body.truncation.unwrap_or(DEFAULT_TRUNCATION);
    if truncation < 2 {
        return Err(ApiError::bad_request("truncation must be at least 2"));
    }
    let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let state = QpState::from_qp(qp);
    let s = Session {
        id: uuid::Uuid::new_v4().simple().to_string(),
        created_at,
        builder: body.builder,
        params: body.params,
        truncation,
        initial: state.clone(),
        current: state,
        undo: Vec::new(),
        log: Vec::new(),
    };
    st.store(&s)?;
    Ok((StatusCode::CREATED, Json(view(&s, true))))
}

async fn get_session(State(st): State<Arc<AppState>>, Path(id): Path<String>, Query(q): Query<ViewQuery>) -> ApiResult<Json<Value>> {
    let lock = st.lock_for(&id);
    let _guard = lock.lock().await;
    let s = st.load(&id)?;
    Ok(Json(view(&s, q.verbose)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MutateBody {
    vertex: VertexId,
    mode: Mode,
    #[serde(default)]
    verbose: bool,
}

/// One mutation step; `Err` carries the HTTP error.
pub fn step(state: &QpState, k: &VertexId, mode: Mode, truncation: usize) -> Result<QpState, (StatusCode, String)> {
    if !state.quiver.has_vertex(k.as_str()) {
        return Err((StatusCode::BAD_REQUEST, format!("unknown vertex {}", k)));
    }
    match mode {
        Mode::Quiver => match state.quiver.mutate(k) {
            Ok(q) => Ok(QpState { quiver: q, potential: None }),
            Err(e @ QuiverError::NotTwoAcyclic(_)) => Err((StatusCode::CONFLICT, e.to_string())),
            Err(e) => Err((StatusCode::BAD_REQUEST, e.to_string())),
        },
        Mode::Qp => {
            let qp = state.qp().ok_or((StatusCode::CONFLICT, "state has no potential; it came from a quiver-mode mutation".to_string()))?;
            match qp_mutate(&qp, k, truncation) {
                Ok(m) => Ok(QpState::from_qp(m.qp)),
                Err(e @ (QpMutationError::Loop(_) | QpMutationError::TwoCycle(..) | QpMutationError::NotReduced)) => Err((StatusCode::CONFLICT, e.to_string())),
                Err(e) => Err((StatusCode::BAD_REQUEST, e.to_string())),
            }
        }
    }
}

/// Rebuilds the current state from the initial one and the mutation log.
pub fn replay(s: &Session) -> Result<QpState, (StatusCode, String)> {
    let mut cur = s.initial.clone();
    for e in &s.log {
        cur = step(&cur, &e.vertex, e.mode, s.truncation)?;
    }
    Ok(cur)
}

async fn mutate(State(st): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let body: MutateBody = parse_body(&body)?;
    let lock = st.lock_for(&id);
    let _guard = lock.lock().await;
    let mut s = st.load(&id)?;
    let current = s.current.clone();
    let (k, mode, truncation) = (body.vertex.clone(), body.mode, s.truncation);
    let (next, dims) = tokio::task::spawn_blocking(move || {
        let next = step(&current, &k, mode, truncation)?;
        let dims = match (mode, next.qp()) {
            (Mode::Qp, Some(qp)) => Some(match truncated_quotient(&qp, DIMS_TRUNCATION.min(truncation)) {
                Ok(tq) => serde_json::to_value(tq.report()).unwrap(),
                Err(e) => json!({ "error": e.to_string() }),
            }),
            _ => None,
        };
        Ok::<_, (StatusCode, String)>((next, dims))
    })
    .await
    .map_err(|e| ApiError::internal(e.to_string()))?
    .map_err(|(c, m)| ApiError::new(c, m))?;
    s.undo.push(std::mem::replace(&mut s.current, next));
    if s.undo.len() > UNDO_DEPTH {
        s.undo.remove(0);
    }
    s.log.push(LogEntry { vertex: body.vertex, mode });
    st.store(&s)?;
    let two_acyclic = s.current.quiver.is_two_acyclic();
    let mut out = json!({ "state": view(&s, body.verbose), "two_acyclic": two_acyclic });
    if let Some(d) = dims {
        out["jacobian"] = d;
    }
    Ok(Json(out))
}

async fn undo(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let lock = st.lock_for(&id);
    let _guard = lock.lock().await;
    let mut s = st.load(&id)?;
    let prev = s.undo.pop().ok_or_else(|| ApiError::conflict("nothing to undo"))?;
    s.current = prev;
    s.log.pop();
    st.store(&s)?;
    Ok(Json(view(&s, false)))
}

/// Reads a stored session, for tests and tooling.
pub fn load_session(dir: &FsPath, id: &str) -> Option<Session> {
    let text = std::fs::read_to_string(dir.join(format!("{}.json", id))).ok()?;
    serde_json::from_str(&text).ok()
}
