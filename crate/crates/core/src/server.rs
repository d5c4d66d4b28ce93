use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use axum::extract::{Path, State as AxState};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coloring::{self, EdgeColor, EdgeColoring, EdgeColoringDoc, PartialColoring, Yellow};
use crate::kempe::{self, RingDescriptor, Skeleton};
use crate::planar::{self, GraphDoc, PlaneGraph};
use crate::scenario::{self, RingDoc, Scenario, ScenarioDoc};
use crate::suite::restrict;
use crate::tiling::{self, DiamondKind, TilingMode};

/// Longest canal offered for a scenario state.
pub const RING_PREVIEW_LEN: usize = 12;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            kind,
            message: message.into(),
        }
    }

    fn bad(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    fn stale(message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, "stale_ring", message)
    }

    fn unsupported(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "unsupported", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(json!({ "error": self.kind, "message": self.message })),
        )
            .into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Clone, Debug)]
enum Board {
    Graph {
        host: Arc<PlaneGraph>,
        tiling: EdgeColoring,
    },
    Scenario {
        sc: Arc<Scenario>,
        state: scenario::State,
    },
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum Move {
    Ecs { ring: Value },
    Vcs { pair: (u8, u8), seed: usize },
}

struct Session {
    id: u64,
    board: Board,
    undo: Vec<(Move, Board)>,
}

#[derive(Default)]
pub struct AppState {
    sessions: RwLock<HashMap<u64, Arc<RwLock<Session>>>>,
    next: AtomicU64,
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Builtin(String),
    Doc(GraphDoc),
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Builtin(String),
    Doc(Box<ScenarioDoc>),
}

#[derive(Deserialize)]
pub struct CreateSession {
    #[serde(default)]
    pub graph: Option<GraphRef>,
    #[serde(default)]
    pub tiling: Option<EdgeColoringDoc>,
    #[serde(default)]
    pub scenario: Option<ScenarioRef>,
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum RingRef {
    Id { ring_id: usize },
    Graph { ring: RingDescriptor },
    Scenario { ring: RingDoc },
}

#[derive(Deserialize)]
pub struct VcsRequest {
    pub pair: (u8, u8),
    pub seed: usize,
}

#[derive(Serialize, PartialEq, Eq, Debug)]
pub struct SessionDoc {
    pub id: u64,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub graph: GraphDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub mode: TilingMode,
    pub tiling: BTreeMap<String, EdgeColor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub border: Option<String>,
    pub valid: bool,
    pub history: usize,
}

#[derive(Serialize)]
pub struct RingEntry {
    pub id: usize,
    pub color: EdgeColor,
    pub ring: Value,
    /// Edges whose color the move changes, with their new colors.
    pub changes: BTreeMap<String, EdgeColor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub border_after: Option<String>,
}

#[derive(Serialize)]
pub struct DiamondEntry {
    pub edge: String,
    pub kind: DiamondKind,
    pub candidates: Vec<EdgeColor>,
    pub extension_color: Option<EdgeColor>,
}

#[derive(Serialize)]
pub struct SkeletonDoc {
    pub omega: Vec<usize>,
    pub skeleton: Skeleton,
}

impl Board {
    fn from_request(req: CreateSession) -> Result<Board, ApiError> {
        if let Some(s) = req.scenario {
            let sc = match s {
                ScenarioRef::Builtin(name) => scenario::builtin(&name),
                ScenarioRef::Doc(doc) => scenario::load_scenario(&doc),
            }
            .map_err(|e| ApiError::bad(e.to_string()))?;
            let state = sc.initial_state();
            return Ok(Board::Scenario {
                sc: Arc::new(sc),
                state,
            });
        }
        let host = match req
            .graph
            .ok_or_else(|| ApiError::bad("body needs a graph or a scenario"))?
        {
            GraphRef::Builtin(name) => {
                planar::builtin::by_name(&name).ok_or_else(|| ApiError::bad(format!("no builtin graph '{name}'")))?
            }
            GraphRef::Doc(doc) => PlaneGraph::from_doc(&doc).map_err(|e| ApiError::bad(e.to_string()))?,
        };
        let tiling = match req.tiling {
            Some(doc) => EdgeColoring::from_doc(&host, &doc).map_err(|e| ApiError::bad(e.to_string()))?,
            None => {
                let mut first = None;
                tiling::for_each_tiling(&host, TilingMode::Rgb, &PartialColoring::empty(&host), &mut |t| {
                    first = Some(t.clone());
                    false
                })
                .map_err(|e| ApiError::unsupported(e.to_string()))?;
                first.ok_or_else(|| ApiError::unsupported("graph has no RGB-tiling"))?
            }
        };
        Ok(Board::Graph {
            host: Arc::new(host),
            tiling,
        })
    }

    fn host(&self) -> &PlaneGraph {
        match self {
            Board::Graph { host, .. } => host,
            Board::Scenario { sc, .. } => &sc.sigma,
        }
    }

    fn edge_key(&self, e: usize) -> String {
        match self {
            Board::Graph { host, .. } => host.edge(e).to_string(),
            Board::Scenario { sc, .. } => sc.edge_label(e),
        }
    }

    fn colors(&self) -> Vec<Option<EdgeColor>> {
        match self {
            Board::Graph { tiling, .. } => tiling.0.iter().copied().map(Some).collect(),
            Board::Scenario { state, .. } => state.colors.0.clone(),
        }
    }

    fn complete(&self) -> Option<EdgeColoring> {
        match self {
            Board::Graph { tiling, .. } => Some(tiling.clone()),
            Board::Scenario { state, .. } => state.colors.complete(),
        }
    }

    fn doc(&self, id: u64, history: usize) -> SessionDoc {
        let tiling = self
            .colors()
            .iter()
            .enumerate()
            .filter_map(|(e, c)| c.map(|c| (self.edge_key(e), c)))
            .collect();
        match self {
            Board::Graph { host, tiling: t } => {
                let mode = if t.0.contains(&Yellow) {
                    TilingMode::Ergb
                } else {
                    TilingMode::Rgb
                };
                SessionDoc {
                    id,
                    kind: "graph",
                    scenario: None,
                    graph: host.to_doc(),
                    labels: None,
                    mode,
                    tiling,
                    border: None,
                    valid: tiling::is_valid(host, t, mode),
                    history,
                }
            }
            Board::Scenario { sc, state } => SessionDoc {
                id,
                kind: "scenario",
                scenario: Some(sc.name.clone()),
                graph: sc.sigma.to_doc(),
                labels: Some(sc.labels.clone()),
                mode: state.mode,
                tiling,
                border: Some(sc.border_string(state)),
                valid: sc.check_state(state).valid,
                history,
            },
        }
    }

    fn changes(&self, after: &Board) -> BTreeMap<String, EdgeColor> {
        self.colors()
            .iter()
            .zip(after.colors())
            .enumerate()
            .filter(|(_, (a, b))| **a != *b)
            .filter_map(|(e, (_, b))| b.map(|c| (self.edge_key(e), c)))
            .collect()
    }

    /// Rings applicable now, each with the board it leads to.
    fn rings(&self) -> Vec<(EdgeColor, Value, Board)> {
        match self {
            Board::Graph { host, tiling } => kempe::closed_rings(host, tiling)
                .into_iter()
                .filter_map(|r| {
                    let next = kempe::apply_ecs(host, tiling, &r).ok()?;
                    let desc = serde_json::to_value(r.to_descriptor(host)).ok()?;
                    Some((
                        r.color,
                        desc,
                        Board::Graph {
                            host: host.clone(),
                            tiling: next,
                        },
                    ))
                })
                .collect(),
            Board::Scenario { sc, state } => sc
                .available_rings(state, RING_PREVIEW_LEN)
                .into_iter()
                .filter_map(|doc| {
                    let ring = sc.resolve_ring(&doc).ok()?;
                    let next = sc.apply_ring(state, &ring).ok()?;
                    let value = serde_json::to_value(&doc).ok()?;
                    Some((
                        doc.color,
                        value,
                        Board::Scenario {
                            sc: sc.clone(),
                            state: next,
                        },
                    ))
                })
                .collect(),
        }
    }

    fn apply(&self, req: RingRef) -> Result<(Move, Board), ApiError> {
        match (self, req) {
            (_, RingRef::Id { ring_id }) => {
                let (_, ring, next) = self
                    .rings()
                    .into_iter()
                    .nth(ring_id)
                    .ok_or_else(|| ApiError::stale(format!("no ring {ring_id} in the current state")))?;
                Ok((Move::Ecs { ring }, next))
            }
            (Board::Graph { host, tiling }, RingRef::Graph { ring }) => {
                let r = ring.resolve(host).map_err(|e| ApiError::stale(e.to_string()))?;
                let next = kempe::apply_ecs(host, tiling, &r).map_err(|e| ApiError::stale(e.to_string()))?;
                let value = serde_json::to_value(&ring).unwrap_or(Value::Null);
                Ok((
                    Move::Ecs { ring: value },
                    Board::Graph {
                        host: host.clone(),
                        tiling: next,
                    },
                ))
            }
            (Board::Scenario { sc, state }, RingRef::Scenario { ring }) => {
                let r = sc.resolve_ring(&ring).map_err(|e| ApiError::stale(e.to_string()))?;
                let next = sc.apply_ring(state, &r).map_err(ApiError::stale)?;
                let value = serde_json::to_value(&ring).unwrap_or(Value::Null);
                Ok((
                    Move::Ecs { ring: value },
                    Board::Scenario {
                        sc: sc.clone(),
                        state: next,
                    },
                ))
            }
            _ => Err(ApiError::bad("ring document does not match the session kind")),
        }
    }

    fn vcs(&self, req: &VcsRequest) -> Result<(Move, Board), ApiError> {
        let Board::Graph { host, tiling } = self else {
            return Err(ApiError::unsupported("VCS needs a graph session"));
        };
        let (x, y) = req.pair;
        if x == y || !(1..=4).contains(&x) || !(1..=4).contains(&y) || req.seed >= host.n() {
            return Err(ApiError::bad(
                "pair needs two distinct colors in 1..=4 and a seed vertex of the graph",
            ));
        }
        let vc = coloring::induce_vertex_coloring(host, tiling).map_err(|e| ApiError::unsupported(e.to_string()))?;
        let out = kempe::apply_vcs(host, &vc, req.pair, req.seed).map_err(|e| ApiError::bad(e.to_string()))?;
        let next = coloring::induce_edge_coloring(host, &out).map_err(|e| ApiError::unsupported(e.to_string()))?;
        Ok((
            Move::Vcs {
                pair: req.pair,
                seed: req.seed,
            },
            Board::Graph {
                host: host.clone(),
                tiling: next,
            },
        ))
    }

    fn skeleton(&self) -> Result<SkeletonDoc, ApiError> {
        let t = self
            .complete()
            .ok_or_else(|| ApiError::unsupported("some edges are uncolored"))?;
        let omega = match self {
            Board::Graph { host, .. } => match host.outer_facets() {
                [f] => f.clone(),
                _ => return Err(ApiError::unsupported("skeleton needs exactly one outer facet")),
            },
            Board::Scenario { sc, .. } => sc.omega.clone(),
        };
        let skeleton = kempe::skeleton(self.host(), &t, &omega);
        Ok(SkeletonDoc { omega, skeleton })
    }

    fn diamonds(&self) -> Result<Vec<DiamondEntry>, ApiError> {
        let host = self.host();
        let t = self
            .complete()
            .ok_or_else(|| ApiError::unsupported("some edges are uncolored"))?;
        let mut out = Vec::new();
        for (i, &e) in host.edges().iter().enumerate() {
            if host.edge_triangles(i).len() != 2 {
                continue;
            }
            let Ok(q) = planar::remove_edge(host, e) else { continue };
            let tq = restrict(host, &t, &q);
            if let Ok(v) = tiling::classify_diamond(&q, &tq, e) {
                out.push(DiamondEntry {
                    edge: self.edge_key(i),
                    kind: v.kind,
                    candidates: v.candidates,
                    extension_color: v.extension_color,
                });
            }
        }
        Ok(out)
    }
}

fn session(app: &AppState, id: u64) -> Result<Arc<RwLock<Session>>, ApiError> {
    let map = app.sessions.read().expect("session map poisoned");
    map.get(&id)
        .cloned()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no session {id}")))
}

fn read<T>(app: &AppState, id: u64, f: impl FnOnce(&Session) -> Result<T, ApiError>) -> ApiResult<T> {
    let s = session(app, id)?;
    let guard = s.read().expect("session poisoned");
    f(&guard).map(Json)
}

/// Compute the next board from the current one and commit it, holding the write lock
/// so readers see either the old or the new state.
fn mutate(app: &AppState, id: u64, f: impl FnOnce(&Board) -> Result<(Move, Board), ApiError>) -> ApiResult<SessionDoc> {
    let s = session(app, id)?;
    let mut guard = s.write().expect("session poisoned");
    let (mv, next) = f(&guard.board)?;
    let prev = std::mem::replace(&mut guard.board, next);
    guard.undo.push((mv, prev));
    Ok(Json(guard.board.doc(guard.id, guard.undo.len())))
}

async fn create(
    AxState(app): AxState<Arc<AppState>>,
    Json(req): Json<CreateSession>,
) -> Result<(StatusCode, Json<SessionDoc>), ApiError> {
    let board = Board::from_request(req)?;
    let id = app.next.fetch_add(1, Ordering::SeqCst) + 1;
    let doc = board.doc(id, 0);
    app.sessions.write().expect("session map poisoned").insert(
        id,
        Arc::new(RwLock::new(Session {
            id,
            board,
            undo: Vec::new(),
        })),
    );
    Ok((StatusCode::CREATED, Json(doc)))
}

async fn get_session(AxState(app): AxState<Arc<AppState>>, Path(id): Path<u64>) -> ApiResult<SessionDoc> {
    read(&app, id, |s| Ok(s.board.doc(s.id, s.undo.len())))
}

async fn rings(AxState(app): AxState<Arc<AppState>>, Path(id): Path<u64>) -> ApiResult<Vec<RingEntry>> {
    read(&app, id, |s| {
        let b = &s.board;
        Ok(b.rings()
            .into_iter()
            .enumerate()
            .map(|(i, (color, ring, next))| RingEntry {
                id: i,
                color,
                changes: b.changes(&next),
                border_after: match &next {
                    Board::Scenario { sc, state } => Some(sc.border_string(state)),
                    Board::Graph { .. } => None,
                },
                ring,
            })
            .collect())
    })
}

async fn ecs(
    AxState(app): AxState<Arc<AppState>>,
    Path(id): Path<u64>,
    Json(req): Json<RingRef>,
) -> ApiResult<SessionDoc> {
    mutate(&app, id, |b| b.apply(req))
}

async fn vcs(
    AxState(app): AxState<Arc<AppState>>,
    Path(id): Path<u64>,
    Json(req): Json<VcsRequest>,
) -> ApiResult<SessionDoc> {
    mutate(&app, id, |b| b.vcs(&req))
}

async fn undo(AxState(app): AxState<Arc<AppState>>, Path(id): Path<u64>) -> ApiResult<SessionDoc> {
    let s = session(&app, id)?;
    let mut guard = s.write().expect("session poisoned");
    let (_, prev) = guard
        .undo
        .pop()
        .ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "empty_history", "nothing to undo"))?;
    guard.board = prev;
    Ok(Json(guard.board.doc(guard.id, guard.undo.len())))
}

async fn skeleton(AxState(app): AxState<Arc<AppState>>, Path(id): Path<u64>) -> ApiResult<SkeletonDoc> {
    read(&app, id, |s| s.board.skeleton())
}

async fn diamonds(AxState(app): AxState<Arc<AppState>>, Path(id): Path<u64>) -> ApiResult<Vec<DiamondEntry>> {
    read(&app, id, |s| s.board.diamonds())
}

pub fn router() -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/rings", get(rings))
        .route("/sessions/{id}/ecs", post(ecs))
        .route("/sessions/{id}/vcs", post(vcs))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/skeleton", get(skeleton))
        .route("/sessions/{id}/diamonds", get(diamonds))
        .with_state(Arc::new(AppState::default()))
}

pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    axum::serve(listener, router()).await
}
