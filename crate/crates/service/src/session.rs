//! Play sessions and the in-memory store that owns them.
//!
//! Every session keeps a cached remaining press-set whenever its goal is
//! reachable. Pressing vertex `v` flips membership of `v` in that set, which
//! keeps `apply(current, cache) == goal` without solving again.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use toggled_core::gf2::{min_weight_solution, solve_transition};
use toggled_core::inductive::{complementing_set_with, InductiveConfig};
use toggled_core::{generate, parse_graph, Configuration, Graph, GraphDoc, GraphKind, PressSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("{0}")]
    BadRequest(String),
    #[error("no session with id {0}")]
    NotFound(String),
    #[error("{0}")]
    CapExceeded(String),
    #[error("{0}")]
    Conflict(String),
}

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Largest graph a session may hold; linear-algebra hints work up to here.
    pub max_vertices: usize,
    pub inductive: InductiveConfig,
    /// Hints follow a minimum-weight plan when the quiet-pattern space has at
    /// most this dimension, otherwise the plain particular solution.
    pub min_weight_nullity: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_vertices: 10_000,
            inductive: InductiveConfig::from_env(),
            min_weight_nullity: 16,
        }
    }
}

/// Where a session's graph comes from.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GraphSpec {
    Generated {
        #[serde(flatten)]
        kind: GraphKind,
        seed: Option<u64>,
    },
    Document(GraphDoc),
    EdgeList(String),
}

#[derive(Debug, Clone, Deserialize)]
pub struct CreateSession {
    pub graph: GraphSpec,
    /// `"all-off"` (default), `"all-on"`, `"random"`, or a 0/1 string.
    #[serde(default)]
    pub initial: Option<String>,
    /// `"complement"` (default) or a 0/1 string.
    #[serde(default)]
    pub goal: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gf2,
    Inductive,
}

impl std::str::FromStr for Method {
    type Err = ServiceError;

    fn from_str(s: &str) -> Result<Self, ServiceError> {
        match s {
            "gf2" => Ok(Method::Gf2),
            "inductive" => Ok(Method::Inductive),
            other => Err(ServiceError::BadRequest(format!(
                "unknown method {other:?}, expected gf2 or inductive"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub graph: Graph,
    pub initial: Configuration,
    pub current: Configuration,
    pub goal: Configuration,
    pub solvable: bool,
    pub cached_solution: Option<PressSet>,
    pub history: Vec<usize>,
    pub seed: u64,
}

impl Session {
    pub fn solved(&self) -> bool {
        self.current == self.goal
    }

    /// Whether the cache, when present, still takes `current` to `goal`.
    pub fn cache_is_valid(&self) -> bool {
        match &self.cached_solution {
            None => true,
            Some(s) => self
                .graph
                .apply_press_set(&self.current, s)
                .is_ok_and(|c| c == self.goal),
        }
    }

    fn press(&mut self, v: usize) -> Result<(), ServiceError> {
        self.current = self
            .graph
            .press(&self.current, v)
            .map_err(|e| ServiceError::BadRequest(e.to_string()))?;
        if let Some(cache) = &mut self.cached_solution {
            cache.0.toggle(v);
        }
        Ok(())
    }

    fn refresh_cache(&mut self, limits: &Limits) {
        self.cached_solution = plan(&self.graph, &self.current, &self.goal, limits);
        self.solvable = self.cached_solution.is_some();
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            id: self.id.clone(),
            n: self.graph.n(),
            edges: self.graph.edges().map(|(a, b)| [a, b]).collect(),
            current: self.current.clone(),
            goal: self.goal.clone(),
            solvable: self.solvable,
            solved: self.solved(),
            moves: self.history.len(),
            history: self.history.clone(),
        }
    }
}

/// A press plan from `from` to `to`, lightest when the search is affordable.
fn plan(g: &Graph, from: &Configuration, to: &Configuration, limits: &Limits) -> Option<PressSet> {
    let outcome = solve_transition(g, from, to).ok()??;
    Some(min_weight_solution(&outcome, limits.min_weight_nullity).unwrap_or(outcome.particular))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub current: Configuration,
    pub goal: Configuration,
    pub solvable: bool,
    pub solved: bool,
    pub moves: usize,
    pub history: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Hint {
    Press { vertex: usize },
    AlreadySolved,
    Unsolvable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionView {
    pub method: Method,
    pub press_set: PressSet,
    pub vertices: Vec<usize>,
    pub weight: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<serde_json::Value>,
}

fn parse_config(text: &str, n: usize, what: &str) -> Result<Configuration, ServiceError> {
    let c: Configuration = text
        .parse()
        .map_err(|e| ServiceError::BadRequest(format!("{what}: {e}")))?;
    if c.len() != n {
        return Err(ServiceError::BadRequest(format!(
            "{what} has {} bits for a graph on {n} vertices",
            c.len()
        )));
    }
    Ok(c)
}

fn build_graph(spec: &GraphSpec, seed: u64) -> Result<Graph, ServiceError> {
    let bad = |e: &dyn std::fmt::Display| ServiceError::BadRequest(format!("graph: {e}"));
    match spec {
        GraphSpec::Generated { kind, seed: own } => generate(kind, Some(own.unwrap_or(seed))).map_err(|e| bad(&e)),
        GraphSpec::Document(doc) => Graph::try_from(doc.clone()).map_err(|e| bad(&e)),
        GraphSpec::EdgeList(text) => parse_graph(text).map_err(|e| bad(&e)),
    }
}

/// Graph size a spec would produce, checked before anything is allocated.
fn declared_size(spec: &GraphSpec) -> Option<usize> {
    match spec {
        GraphSpec::Generated { kind, .. } => Some(match *kind {
            GraphKind::Path { n } | GraphKind::Cycle { n } | GraphKind::Complete { n } => n,
            GraphKind::ErdosRenyi { n, .. } => n,
            GraphKind::Grid { rows, cols } => rows.saturating_mul(cols),
            GraphKind::Petersen => 10,
        }),
        GraphSpec::Document(doc) => Some(doc.n),
        GraphSpec::EdgeList(_) => None,
    }
}

/// All live sessions. Each session sits behind its own lock, so work on one
/// never blocks or observes another.
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    limits: Limits,
}

impl Default for SessionStore {
    fn default() -> Self {
        Self::new(Limits::default())
    }
}

impl SessionStore {
    pub fn new(limits: Limits) -> Self {
        Self {
            sessions: RwLock::new(HashMap::new()),
            limits,
        }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn len(&self) -> usize {
        self.sessions.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        self.sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }

    /// Runs `f` with exclusive access to one session.
    pub fn with_session<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> T) -> Result<T, ServiceError> {
        let session = self.get(id)?;
        let mut guard = session.lock();
        Ok(f(&mut guard))
    }

    pub fn create(&self, req: CreateSession) -> Result<SessionView, ServiceError> {
        let seed = req.seed.unwrap_or_else(rand::random);
        let too_big = |n: usize| {
            ServiceError::CapExceeded(format!(
                "graph has {n} vertices, above the service cap of {}",
                self.limits.max_vertices
            ))
        };
        if let Some(n) = declared_size(&req.graph).filter(|&n| n > self.limits.max_vertices) {
            return Err(too_big(n));
        }
        let graph = build_graph(&req.graph, seed)?;
        let n = graph.n();
        if n > self.limits.max_vertices {
            return Err(too_big(n));
        }

        let initial = match req.initial.as_deref().unwrap_or("all-off") {
            "all-off" => Configuration::zeros(n),
            "all-on" => Configuration::ones(n),
            "random" => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Configuration::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)))
            }
            bits => parse_config(bits, n, "initial")?,
        };
        let goal = match req.goal.as_deref().unwrap_or("complement") {
            "complement" => initial.complement(),
            bits => parse_config(bits, n, "goal")?,
        };

        let mut session = Session {
            id: uuid::Uuid::new_v4().simple().to_string(),
            graph,
            current: initial.clone(),
            initial,
            goal,
            solvable: false,
            cached_solution: None,
            history: Vec::new(),
            seed,
        };
        session.refresh_cache(&self.limits);
        let view = session.view();
        self.sessions
            .write()
            .insert(session.id.clone(), Arc::new(Mutex::new(session)));
        Ok(view)
    }

    pub fn view(&self, id: &str) -> Result<SessionView, ServiceError> {
        self.with_session(id, |s| s.view())
    }

    pub fn press(&self, id: &str, vertex: usize) -> Result<SessionView, ServiceError> {
        self.with_session(id, |s| {
            s.press(vertex)?;
            s.history.push(vertex);
            Ok(s.view())
        })?
    }

    /// Lowest-index vertex of the remaining plan.
    pub fn hint(&self, id: &str) -> Result<Hint, ServiceError> {
        let limits = self.limits;
        self.with_session(id, |s| {
            if s.solved() {
                return Hint::AlreadySolved;
            }
            if s.cached_solution.is_none() && s.solvable {
                s.refresh_cache(&limits);
            }
            match s.cached_solution.as_ref().and_then(|c| c.first_one()) {
                Some(vertex) => Hint::Press { vertex },
                None => Hint::Unsolvable,
            }
        })
    }

    pub fn solution(&self, id: &str, method: Method) -> Result<SolutionView, ServiceError> {
        let limits = self.limits;
        let session = self.get(id)?;
        let mut s = session.lock();
        let (press_set, trace) = match method {
            Method::Gf2 => {
                if s.cached_solution.is_none() && s.solvable {
                    s.refresh_cache(&limits);
                }
                let set = s
                    .cached_solution
                    .clone()
                    .ok_or_else(|| ServiceError::Conflict("goal is not reachable from the current state".into()))?;
                (set, None)
            }
            Method::Inductive => {
                if s.graph.n() > limits.inductive.max_vertices {
                    return Err(ServiceError::CapExceeded(format!(
                        "graph has {} vertices, above the inductive solver cap of {}",
                        s.graph.n(),
                        limits.inductive.max_vertices
                    )));
                }
                if s.goal != s.current.complement() {
                    return Err(ServiceError::Conflict(
                        "the inductive method only targets the complement of the current state".into(),
                    ));
                }
                let (set, trace) = complementing_set_with(&s.graph, limits.inductive)
                    .map_err(|e| ServiceError::CapExceeded(e.to_string()))?;
                (set, Some(trace.to_json()))
            }
        };
        Ok(SolutionView {
            method,
            vertices: press_set.iter().collect(),
            weight: press_set.weight(),
            press_set,
            trace,
        })
    }

    /// `k` uniformly random presses. Without an explicit seed the session's
    /// own seed is used and then advanced.
    pub fn scramble(&self, id: &str, k: usize, seed: Option<u64>) -> Result<SessionView, ServiceError> {
        self.with_session(id, |s| {
            let seed = seed.unwrap_or_else(|| {
                let own = s.seed;
                s.seed = s.seed.wrapping_add(1);
                own
            });
            let n = s.graph.n();
            if n > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..k {
                    s.press(rng.random_range(0..n))?;
                }
            }
            Ok(s.view())
        })?
    }

    /// Back to the initial configuration with an empty history.
    pub fn reset(&self, id: &str) -> Result<SessionView, ServiceError> {
        let limits = self.limits;
        self.with_session(id, |s| {
            s.current = s.initial.clone();
            s.history.clear();
            s.refresh_cache(&limits);
            s.view()
        })
    }

    pub fn snapshot(&self) -> Vec<Session> {
        let sessions: Vec<_> = self.sessions.read().values().cloned().collect();
        let mut out: Vec<Session> = sessions.iter().map(|s| s.lock().clone()).collect();
        out.sort_by(|a, b| a.id.cmp(&b.id));
        out
    }

    pub fn save_snapshot(&self, path: &Path) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(&self.snapshot())?;
        std::fs::write(path, json)
    }

    /// Adds every session from a snapshot file (a JSON array of sessions).
    pub fn load_snapshot(&self, path: &Path) -> std::io::Result<usize> {
        let text = std::fs::read_to_string(path)?;
        let sessions: Vec<Session> = serde_json::from_str(&text)?;
        let count = sessions.len();
        let mut map = self.sessions.write();
        for mut session in sessions {
            if !session.cache_is_valid() {
                session.cached_solution = None;
            }
            map.insert(session.id.clone(), Arc::new(Mutex::new(session)));
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn create(store: &SessionStore, graph: serde_json::Value, initial: &str, goal: &str) -> SessionView {
        let req = serde_json::json!({"graph": graph, "initial": initial, "goal": goal, "seed": 1});
        store.create(serde_json::from_value(req).unwrap()).unwrap()
    }

    fn p3(store: &SessionStore) -> SessionView {
        create(store, serde_json::json!({"kind": "path", "n": 3}), "010", "complement")
    }

    fn k2(store: &SessionStore) -> SessionView {
        create(store, serde_json::json!({"n": 2, "edges": [[0, 1]]}), "00", "01")
    }

    #[test]
    fn create_examples() {
        let store = SessionStore::default();
        let grid = create(
            &store,
            serde_json::json!({"kind": "grid", "rows": 5, "cols": 5}),
            "all-off",
            "complement",
        );
        assert!(grid.solvable);
        assert_eq!(grid.goal, Configuration::ones(25));

        assert!(!k2(&store).solvable);

        let view = p3(&store);
        assert!(view.solvable);
        assert_eq!(view.goal.to_string(), "101");
        let sol = store.solution(&view.id, Method::Gf2).unwrap();
        assert_eq!(sol.vertices, vec![1]);
    }

    #[test]
    fn create_accepts_edge_list_text() {
        let store = SessionStore::default();
        let view = create(&store, serde_json::json!("3\n0 1\n1 2\n"), "all-off", "complement");
        assert_eq!(view.edges, vec![[0, 1], [1, 2]]);
    }

    #[test]
    fn create_rejections() {
        let store = SessionStore::new(Limits {
            max_vertices: 20,
            ..Limits::default()
        });
        let req = |v: serde_json::Value| store.create(serde_json::from_value(v).unwrap());
        assert!(matches!(
            req(serde_json::json!({"graph": {"kind": "grid", "rows": 5, "cols": 5}})),
            Err(ServiceError::CapExceeded(_))
        ));
        assert!(matches!(
            req(serde_json::json!({"graph": {"n": 2, "edges": [[0, 0]]}})),
            Err(ServiceError::BadRequest(_))
        ));
        assert!(matches!(
            req(serde_json::json!({"graph": {"kind": "path", "n": 3}, "initial": "01"})),
            Err(ServiceError::BadRequest(_))
        ));
        assert!(matches!(
            req(serde_json::json!({"graph": {"kind": "path", "n": 3}, "goal": "0x1"})),
            Err(ServiceError::BadRequest(_))
        ));
    }

    #[test]
    fn press_examples() {
        let store = SessionStore::default();
        let id = p3(&store).id;
        let after = store.press(&id, 1).unwrap();
        assert_eq!(after.current.to_string(), "101");
        assert!(after.solved);

        let before = store.view(&id).unwrap();
        store.press(&id, 0).unwrap();
        let twice = store.press(&id, 0).unwrap();
        assert_eq!(twice.current, before.current);
        assert_eq!(twice.moves, before.moves + 2);

        let k = k2(&store).id;
        assert_eq!(store.press(&k, 0).unwrap().current.to_string(), "11");
        assert!(matches!(store.press(&k, 2), Err(ServiceError::BadRequest(_))));
        assert!(matches!(store.press("nope", 0), Err(ServiceError::NotFound(_))));
    }

    #[test]
    fn hint_examples() {
        let store = SessionStore::default();
        let id = p3(&store).id;
        assert_eq!(store.hint(&id).unwrap(), Hint::Press { vertex: 1 });
        store.press(&id, 1).unwrap();
        assert_eq!(store.hint(&id).unwrap(), Hint::AlreadySolved);
        assert_eq!(store.hint(&k2(&store).id).unwrap(), Hint::Unsolvable);
    }

    #[test]
    fn solution_examples() {
        let store = SessionStore::default();
        let p4 = create(
            &store,
            serde_json::json!({"kind": "path", "n": 4}),
            "all-off",
            "complement",
        )
        .id;
        let sol = store.solution(&p4, Method::Inductive).unwrap();
        assert_eq!(sol.vertices, vec![0, 3]);
        let trace = sol.trace.unwrap();
        let top: Vec<_> = trace
            .as_array()
            .unwrap()
            .iter()
            .filter(|e| e["depth"] == 0 && e["event"] != "enter" && e["event"] != "exit")
            .map(|e| e["event"].as_str().unwrap().to_string())
            .collect();
        assert_eq!(top, ["pair", "press-all"]);

        let c4 = create(
            &store,
            serde_json::json!({"kind": "cycle", "n": 4}),
            "all-off",
            "complement",
        )
        .id;
        assert_eq!(store.solution(&c4, Method::Gf2).unwrap().vertices, vec![0, 1, 2, 3]);

        let solved = create(&store, serde_json::json!({"kind": "cycle", "n": 4}), "0110", "0110").id;
        assert_eq!(store.solution(&solved, Method::Gf2).unwrap().weight, 0);
        assert!(matches!(
            store.solution(&solved, Method::Inductive),
            Err(ServiceError::Conflict(_))
        ));

        let k = k2(&store).id;
        assert!(matches!(
            store.solution(&k, Method::Gf2),
            Err(ServiceError::Conflict(_))
        ));
    }

    #[test]
    fn inductive_cap() {
        let store = SessionStore::default();
        let big = create(
            &store,
            serde_json::json!({"kind": "path", "n": 40}),
            "all-off",
            "complement",
        )
        .id;
        assert!(matches!(
            store.solution(&big, Method::Inductive),
            Err(ServiceError::CapExceeded(_))
        ));
        assert!(store.solution(&big, Method::Gf2).is_ok());
    }

    #[test]
    fn scramble_examples() {
        let store = SessionStore::default();
        let id = create(
            &store,
            serde_json::json!({"kind": "grid", "rows": 3, "cols": 3}),
            "all-off",
            "complement",
        )
        .id;
        let start = store.view(&id).unwrap();
        assert_eq!(store.scramble(&id, 0, Some(9)).unwrap().current, start.current);

        let a = store.scramble(&id, 5, Some(42)).unwrap();
        store.reset(&id).unwrap();
        let b = store.scramble(&id, 5, Some(42)).unwrap();
        assert_eq!(a.current, b.current);
        assert!(store.with_session(&id, |s| s.cache_is_valid()).unwrap());
        assert_eq!(b.moves, 0);
    }

    #[test]
    fn scramble_with_repeated_draw_cancels() {
        // seed search over 2-press scrambles on a 2-vertex graph: equal draws cancel
        let store = SessionStore::default();
        let id = create(&store, serde_json::json!({"n": 2, "edges": []}), "00", "complement").id;
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (x, y) = (rng.random_range(0..2usize), rng.random_range(0..2usize));
            let before = store.view(&id).unwrap().current;
            let after = store.scramble(&id, 2, Some(seed)).unwrap().current;
            assert_eq!(x == y, before == after, "seed {seed}");
        }
    }

    #[test]
    fn snapshot_round_trip() {
        let store = SessionStore::default();
        let id = p3(&store).id;
        store.press(&id, 0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sessions.json");
        store.save_snapshot(&path).unwrap();

        let restored = SessionStore::default();
        assert_eq!(restored.load_snapshot(&path).unwrap(), 1);
        assert_eq!(restored.view(&id).unwrap(), store.view(&id).unwrap());
        assert_eq!(restored.hint(&id).unwrap(), store.hint(&id).unwrap());
    }
}
