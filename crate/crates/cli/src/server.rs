//! In-memory HTTP/JSON session service for the explorer.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use qcluster_core::matrix::IntMatrix;
use qcluster_core::mutation::{Limits, NodeVerdict, TrackedElement};
use qcluster_core::polycheck::enumerate;
use qcluster_core::{CGState, Error, MutationPath, Seed};

use crate::json::{edges, EdgeJson, ElementJson, SeedJson, SeedRef};

pub const MAX_ENUMERATE_DEPTH: usize = 16;

#[derive(Debug)]
pub struct ApiError(StatusCode, String);

impl ApiError {
    fn bad(msg: impl Into<String>) -> Self {
        ApiError(StatusCode::BAD_REQUEST, msg.into())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(serde_json::json!({ "error": self.1 }))).into_response()
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError::bad(e.to_string())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

struct Tracked {
    name: String,
    element: TrackedElement,
}

struct SessionState {
    /// `stack[0]` is the root; the last entry is the current node.
    stack: Vec<CGState>,
    redo: Vec<usize>,
    tracked: Vec<Tracked>,
}

impl SessionState {
    fn current(&self) -> &CGState {
        self.stack.last().expect("the root is never popped")
    }
}

pub struct Session {
    busy: AtomicBool,
    state: RwLock<SessionState>,
}

/// Exclusive right to change a session; released on drop.
pub struct WriteGuard<'a>(&'a AtomicBool);

impl Drop for WriteGuard<'_> {
    fn drop(&mut self) {
        self.0.store(false, Ordering::Release);
    }
}

impl Session {
    pub fn try_begin(&self) -> Option<WriteGuard<'_>> {
        self.busy.compare_exchange(false, true, Ordering::Acquire, Ordering::Relaxed).ok().map(|_| WriteGuard(&self.busy))
    }
}

#[derive(Default)]
pub struct AppState {
    sessions: RwLock<HashMap<String, Arc<Session>>>,
    counter: AtomicU64,
    limits: Limits,
}

impl AppState {
    pub fn new(limits: Limits) -> Arc<Self> {
        Arc::new(AppState { limits, ..Default::default() })
    }

    pub fn session(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no session {id}")))
    }
}

fn parse<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad(format!("invalid JSON: {e}")))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TrackedJson {
    pub index: usize,
    pub name: String,
    /// `Polynomial`, `LaurentOnly`, `NotLaurent` or `TermLimitExceeded`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    pub terms: usize,
}

fn tracked_at(index: usize, t: &mut Tracked, path: &MutationPath) -> TrackedJson {
    let (verdict, class, terms) = match t.element.transport(path) {
        Ok(x) => {
            let v = if x.is_polynomial() { NodeVerdict::Polynomial } else { NodeVerdict::LaurentOnly };
            (format!("{v:?}"), Some(format!("{:?}", x.coefficient_class())), x.len())
        }
        Err(Error::NotLaurent(_)) => ("NotLaurent".into(), None, 0),
        Err(Error::TermLimitExceeded { terms, .. }) => ("TermLimitExceeded".into(), None, terms),
        Err(e) => (format!("Error: {e}"), None, 0),
    };
    TrackedJson { index, name: t.name.clone(), verdict, class, terms }
}

fn all_tracked(st: &mut SessionState) -> Vec<TrackedJson> {
    let path = st.current().path().clone();
    st.tracked.iter_mut().enumerate().map(|(i, t)| tracked_at(i, t, &path)).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub id: String,
    pub path: Vec<usize>,
    pub seed: SeedJson,
    pub edges: Vec<EdgeJson>,
    pub c: IntMatrix,
    pub g: IntMatrix,
    pub g_tilde: IntMatrix,
    pub sign_coherent: bool,
    pub can_undo: bool,
    pub can_redo: bool,
    pub tracked: Vec<TrackedJson>,
}

fn state_json(id: &str, st: &mut SessionState) -> StateJson {
    let tracked = all_tracked(st);
    let cur = st.current();
    StateJson {
        id: id.into(),
        path: cur.path().steps().to_vec(),
        seed: SeedJson::from_seed(cur.seed()),
        edges: edges(cur.seed()),
        c: cur.c().clone(),
        g: cur.g().clone(),
        g_tilde: cur.g_tilde(),
        sign_coherent: cur.check_sign_coherence().is_coherent(),
        can_undo: st.stack.len() > 1,
        can_redo: !st.redo.is_empty(),
        tracked,
    }
}

/// Everything the explorer needs to update after one mutation.
#[derive(Debug, Serialize, Deserialize)]
pub struct DeltaJson {
    pub k: usize,
    pub path: Vec<usize>,
    pub seed: SeedJson,
    pub edges_added: Vec<EdgeJson>,
    pub edges_removed: Vec<EdgeJson>,
    pub c: IntMatrix,
    pub g: IntMatrix,
    pub g_tilde: IntMatrix,
    pub sign_coherent: bool,
    pub can_undo: bool,
    pub can_redo: bool,
    pub tracked: Vec<TrackedJson>,
}

fn delta(k: usize, before: &Seed, st: &mut SessionState) -> DeltaJson {
    let s = state_json("", st);
    let old = edges(before);
    let edges_added = s.edges.iter().filter(|e| !old.contains(e)).cloned().collect();
    let edges_removed = old.into_iter().filter(|e| !s.edges.contains(e)).collect();
    DeltaJson {
        k,
        path: s.path,
        seed: s.seed,
        edges_added,
        edges_removed,
        c: s.c,
        g: s.g,
        g_tilde: s.g_tilde,
        sign_coherent: s.sign_coherent,
        can_undo: s.can_undo,
        can_redo: s.can_redo,
        tracked: s.tracked,
    }
}

#[derive(Deserialize)]
struct CreateReq {
    seed: SeedRef,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CreatedJson {
    pub id: String,
}

async fn create(State(app): State<Arc<AppState>>, body: Bytes) -> ApiResult<CreatedJson> {
    let req: CreateReq = parse(&body)?;
    let seed = match req.seed {
        SeedRef::Inline(s) => s.to_seed().map_err(|e| ApiError::bad(e.to_string()))?,
        SeedRef::Label(l) => crate::json::seed_by_label(&l).ok_or_else(|| ApiError::bad(format!("unknown seed {l:?}")))?,
    };
    let root = CGState::new(&seed)?;
    let id = format!("s{}", app.counter.fetch_add(1, Ordering::Relaxed) + 1);
    let session = Session {
        busy: AtomicBool::new(false),
        state: RwLock::new(SessionState { stack: vec![root], redo: Vec::new(), tracked: Vec::new() }),
    };
    app.sessions.write().unwrap().insert(id.clone(), Arc::new(session));
    Ok(Json(CreatedJson { id }))
}

async fn get_state(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<StateJson> {
    let s = app.session(&id)?;
    let mut st = s.state.write().unwrap();
    Ok(Json(state_json(&id, &mut st)))
}

#[derive(Deserialize)]
struct MutateReq {
    k: usize,
}

fn conflict() -> ApiError {
    ApiError(StatusCode::CONFLICT, "another change to this session is in progress".into())
}

/// Pushes a mutation at `k`; used by mutate and redo.
fn apply(st: &mut SessionState, k: usize) -> Result<DeltaJson, ApiError> {
    let before = st.current().seed().clone();
    if k >= before.rank() {
        return Err(ApiError::bad(format!("index {k} is out of range for rank {}", before.rank())));
    }
    if !before.is_unfrozen(k) {
        return Err(ApiError::bad(format!("index {k} is frozen")));
    }
    let next = st.current().step(k)?;
    st.stack.push(next);
    Ok(delta(k, &before, st))
}

pub fn mutate_session(s: &Session, k: usize) -> Result<DeltaJson, ApiError> {
    let _guard = s.try_begin().ok_or_else(conflict)?;
    let mut st = s.state.write().unwrap();
    let d = apply(&mut st, k)?;
    st.redo.clear();
    Ok(d)
}

async fn mutate(State(app): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult<DeltaJson> {
    let req: MutateReq = parse(&body)?;
    let s = app.session(&id)?;
    let d = tokio::task::spawn_blocking(move || mutate_session(&s, req.k))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(d))
}

async fn undo(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<DeltaJson> {
    let s = app.session(&id)?;
    let _guard = s.try_begin().ok_or_else(conflict)?;
    let mut st = s.state.write().unwrap();
    if st.stack.len() == 1 {
        return Err(ApiError::bad("nothing to undo"));
    }
    let top = st.stack.pop().unwrap();
    let k = *top.path().steps().last().unwrap();
    st.redo.push(k);
    Ok(Json(delta(k, top.seed(), &mut st)))
}

async fn redo(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<DeltaJson> {
    let s = app.session(&id)?;
    let _guard = s.try_begin().ok_or_else(conflict)?;
    let mut st = s.state.write().unwrap();
    let k = st.redo.pop().ok_or_else(|| ApiError::bad("nothing to redo"))?;
    Ok(Json(apply(&mut st, k)?))
}

#[derive(Deserialize)]
struct TrackReq {
    element: ElementJson,
    #[serde(default)]
    name: Option<String>,
}

async fn track(State(app): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult<TrackedJson> {
    let req: TrackReq = parse(&body)?;
    let s = app.session(&id)?;
    let _guard = s.try_begin().ok_or_else(conflict)?;
    let mut st = s.state.write().unwrap();
    let root = st.stack[0].seed().clone();
    let (seed, x) = req.element.load(Some(&root)).map_err(|e| ApiError::bad(e.to_string()))?;
    if seed.with_label("") != root.clone().with_label("") {
        return Err(ApiError::bad("element is not written in the session's root seed"));
    }
    let element = TrackedElement::with_limits(root, x, app.limits)?;
    let index = st.tracked.len();
    let name = req.name.unwrap_or_else(|| format!("element {index}"));
    st.tracked.push(Tracked { name, element });
    let path = st.current().path().clone();
    Ok(Json(tracked_at(index, &mut st.tracked[index], &path)))
}

#[derive(Deserialize)]
struct DepthQuery {
    depth: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EnumNodeJson {
    pub path: Vec<usize>,
    pub depth: usize,
    pub g_tilde: IntMatrix,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EnumerateJson {
    pub closed: bool,
    pub node_count: usize,
    pub nodes: Vec<EnumNodeJson>,
}

async fn enumerate_nodes(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<DepthQuery>,
) -> ApiResult<EnumerateJson> {
    let depth = q.depth.unwrap_or(4);
    if depth > MAX_ENUMERATE_DEPTH {
        return Err(ApiError::bad(format!("depth is capped at {MAX_ENUMERATE_DEPTH}")));
    }
    let root = app.session(&id)?.state.read().unwrap().stack[0].seed().clone();
    let g = tokio::task::spawn_blocking(move || enumerate(&root, depth))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    let nodes = g
        .nodes
        .iter()
        .map(|n| EnumNodeJson { path: n.path().steps().to_vec(), depth: n.depth, g_tilde: n.cg.g_tilde() })
        .collect();
    Ok(Json(EnumerateJson { closed: g.closed, node_count: g.nodes.len(), nodes }))
}

pub fn router(app: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/session", post(create))
        .route("/api/session/{id}/state", get(get_state))
        .route("/api/session/{id}/mutate", post(mutate))
        .route("/api/session/{id}/undo", post(undo))
        .route("/api/session/{id}/redo", post(redo))
        .route("/api/session/{id}/track", post(track))
        .route("/api/session/{id}/enumerate", get(enumerate_nodes))
        .with_state(app)
}

pub async fn serve(port: u16, limits: Limits) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(limits))).await
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session_with_sl2_standard() -> (Arc<AppState>, Arc<Session>) {
        let app = AppState::new(Limits::default());
        let root = CGState::new(&qcluster_core::scenarios::sl2_standard_seed()).unwrap();
        let s = Arc::new(Session {
            busy: AtomicBool::new(false),
            state: RwLock::new(SessionState { stack: vec![root], redo: Vec::new(), tracked: Vec::new() }),
        });
        app.sessions.write().unwrap().insert("t".into(), s.clone());
        (app, s)
    }

    #[test]
    fn concurrent_writer_gets_conflict() {
        let (_, s) = session_with_sl2_standard();
        let held = s.try_begin().unwrap();
        let err = mutate_session(&s, 1).unwrap_err();
        assert_eq!(err.0, StatusCode::CONFLICT);
        drop(held);
        assert_eq!(mutate_session(&s, 1).unwrap().path, vec![1]);
    }

    #[test]
    fn frozen_index_is_rejected() {
        let (_, s) = session_with_sl2_standard();
        assert_eq!(mutate_session(&s, 0).unwrap_err().0, StatusCode::BAD_REQUEST);
        assert_eq!(mutate_session(&s, 9).unwrap_err().0, StatusCode::BAD_REQUEST);
        // the failed attempts released the writer
        assert!(s.try_begin().is_some());
    }
}
