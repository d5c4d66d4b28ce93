//! Σ-level replays: a triangulated region with a fixed border coloring, facts about
//! the unseen exterior, and scripts of ECS moves and assertions.
//!
//! The exterior is never built as a graph. What is known about it is the border
//! coloring Co(Ω), which fixes a 4-coloring f of the border up to Klein translation,
//! plus chain facts. For each color c the exterior can join border vertices only in
//! non-crossing blocks inside one c-class of f, and a chain between u and v has the
//! parity of [f(u) != f(v)]. Assertions quantify over every such partition.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Black, EdgeColor, EdgeColoring, PartialColoring, Yellow, PERMUTATIONS, RGB};
use crate::kempe::CrossingKind;
use crate::planar::{EdgeId, PlanarError, PlaneGraph, Vertex};
use crate::tiling::{self, Diamond, ParityUnionFind, TilingMode};

mod builtins;

pub use builtins::{builtin, builtin_doc, BUILTINS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("scenario document: {0}")]
    Document(String),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("no edge {0} in the region")]
    UnknownEdge(String),
    #[error("region graph: {0}")]
    Graph(#[from] PlanarError),
    #[error("fixed colors are inconsistent: {0}")]
    InconsistentFixedColors(String),
    #[error("no builtin scenario named '{0}'")]
    UnknownBuiltin(String),
    #[error("step {step} cannot be applied: {reason}")]
    StepInapplicable { step: usize, reason: String },
    #[error("{free} free edges exceed the cap of {cap}")]
    CapExceeded { free: usize, cap: usize },
    #[error("malformed walk: {0}")]
    MalformedWalk(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    ChainExists,
    ChainAbsent,
    ChainParity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainParity {
    Even,
    Odd,
    Impossible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintDoc {
    pub kind: ConstraintKind,
    pub color: EdgeColor,
    pub u: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingDoc {
    /// `None` for a crossing made from the exterior into the region.
    pub face: Option<[String; 3]>,
    pub edge: String,
    pub kind: CrossingKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDoc {
    pub color: EdgeColor,
    pub crossings: Vec<CrossingDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkDoc {
    pub color: EdgeColor,
    pub from: String,
    pub to: String,
    /// Vertices from `to` back to `from` along known edges.
    pub closing: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Matching {
    Exact,
    #[default]
    Synonym,
    Sym,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pick {
    #[default]
    First,
    NoOddCycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum StepDoc {
    ApplyEcs {
        ring: RingDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    SetColors {
        colors: BTreeMap<String, EdgeColor>,
    },
    SigmaAdjust {
        mode: TilingMode,
        #[serde(default)]
        pick: Pick,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        keep: Vec<String>,
        /// Only retilings with exactly this many yellow edges.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        yellow: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<usize>,
        /// Expected count up to synonyms that fix the border colors.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_classes: Option<usize>,
    },
    AssumeChain {
        constraint: ConstraintDoc,
    },
    AssertBoundary {
        pattern: String,
        #[serde(default)]
        up_to: Matching,
    },
    AssertColors {
        colors: BTreeMap<String, EdgeColor>,
    },
    AssertParity {
        walk: WalkDoc,
        expect: ChainParity,
    },
    AssertNoCompletion {
        mode: TilingMode,
    },
    AssertCompletionExists {
        mode: TilingMode,
    },
    AssertNoMonoOddCycle {
        color: EdgeColor,
    },
    AssertValid,
    AssertContradiction,
    Note {
        text: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasExpect {
    pub patterns: usize,
    pub forcing: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioDoc {
    pub name: String,
    #[serde(default)]
    pub notes: String,
    pub vertices: Vec<String>,
    pub faces: Vec<[String; 3]>,
    pub omega: Vec<String>,
    #[serde(default)]
    pub fixed: BTreeMap<String, EdgeColor>,
    #[serde(default)]
    pub constraints: Vec<ConstraintDoc>,
    /// Geometric symmetries of the region, each listing only the vertices it moves.
    #[serde(default)]
    pub symmetries: Vec<BTreeMap<String, String>>,
    #[serde(default)]
    pub script: Vec<StepDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atlas: Option<AtlasExpect>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub color: EdgeColor,
    pub u: Vertex,
    pub v: Vertex,
    pub parity: Option<Parity>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RingCrossing {
    pub face: Option<usize>,
    pub edge: usize,
    pub kind: CrossingKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub color: EdgeColor,
    pub crossings: Vec<RingCrossing>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub notes: String,
    pub labels: Vec<String>,
    pub sigma: PlaneGraph,
    /// Border vertices in declared order.
    pub omega: Vec<Vertex>,
    /// `omega_edges[i]` joins `omega[i]` and `omega[i + 1]`.
    pub omega_edges: Vec<usize>,
    pub fixed: PartialColoring,
    pub constraints: Vec<Constraint>,
    /// Symmetry group generated by the declared symmetries, identity first.
    pub group: Vec<Vec<Vertex>>,
    pub script: Vec<StepDoc>,
    pub atlas: Option<AtlasExpect>,
    index: HashMap<String, Vertex>,
}

/// Chain facts learned about the exterior while a script runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Knowledge {
    pub links: Vec<(EdgeColor, Vertex, Vertex, bool)>,
    /// Per color: sets of border positions that no exterior chain leaves.
    pub separations: Vec<(EdgeColor, Vec<bool>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub colors: PartialColoring,
    pub mode: TilingMode,
    /// Co(Ω) as seen from the exterior; stays rgb when the region is retiled.
    pub border: Vec<Option<EdgeColor>>,
    pub knowledge: Knowledge,
}

/// Everything the exterior may look like given a state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exterior {
    /// Border 4-coloring with f(omega[0]) = 1.
    pub f: Vec<u8>,
    /// Admissible block labelings of border positions, per rgb color.
    pub partitions: [Vec<Vec<usize>>; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateVerdict {
    pub valid: bool,
    pub reasons: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Done,
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub step: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub status: StepStatus,
    pub detail: String,
    /// Border colors in Ω order after the step.
    pub border: String,
    /// Edge colors of the region after the step, in edge order.
    pub colors: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub scenario: String,
    pub header: String,
    pub edges: Vec<String>,
    pub steps: Vec<StepRecord>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_at: Option<usize>,
}

pub const SIGMA_CAP: usize = 40;
const MAX_BORDER: usize = 14;

fn doc_err(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Document(msg.into())
}

pub fn load_scenario(doc: &ScenarioDoc) -> Result<Scenario, ScenarioError> {
    let mut index = HashMap::new();
    for (i, name) in doc.vertices.iter().enumerate() {
        if name.is_empty() || name.contains('-') || name.contains(',') {
            return Err(doc_err(format!("bad vertex label '{name}'")));
        }
        if index.insert(name.clone(), i).is_some() {
            return Err(doc_err(format!("vertex '{name}' declared twice")));
        }
    }
    let vx = |s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| ScenarioError::UnknownVertex(s.to_string()))
    };
    let faces = doc
        .faces
        .iter()
        .map(|f| f.iter().map(|s| vx(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let omega = doc.omega.iter().map(|s| vx(s)).collect::<Result<Vec<_>, _>>()?;
    if omega.len() < 3 || omega.len() > MAX_BORDER {
        return Err(doc_err(format!("border must have 3 to {MAX_BORDER} vertices")));
    }
    let n = doc.vertices.len();
    let mut reversed = omega.clone();
    reversed.reverse();
    let sigma = PlaneGraph::from_faces(n, &faces, std::slice::from_ref(&omega))
        .or_else(|_| PlaneGraph::from_faces(n, &faces, &[reversed]))?;
    let k = omega.len();
    let omega_edges = (0..k)
        .map(|i| {
            sigma
                .edge_index(EdgeId::new(omega[i], omega[(i + 1) % k]))
                .ok_or_else(|| ScenarioError::UnknownEdge(format!("{}-{}", doc.omega[i], doc.omega[(i + 1) % k])))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut sc = Scenario {
        name: doc.name.clone(),
        notes: doc.notes.clone(),
        labels: doc.vertices.clone(),
        sigma,
        omega,
        omega_edges,
        fixed: PartialColoring(Vec::new()),
        constraints: Vec::new(),
        group: Vec::new(),
        script: doc.script.clone(),
        atlas: doc.atlas.clone(),
        index: index.clone(),
    };
    sc.fixed = PartialColoring::empty(&sc.sigma);
    for (key, &c) in &doc.fixed {
        let e = sc.edge_by_label(key)?;
        if c == Yellow && sc.omega_edges.contains(&e) {
            return Err(ScenarioError::InconsistentFixedColors(format!(
                "border edge {key} cannot be yellow"
            )));
        }
        if c == Black {
            return Err(ScenarioError::InconsistentFixedColors(format!(
                "edge {key} is pinned black"
            )));
        }
        sc.fixed.0[e] = Some(c);
    }
    for t in 0..sc.sigma.triangles().len() {
        let es = sc.sigma.triangle_edges(t);
        if let [Some(x), Some(y), Some(z)] = es.map(|e| sc.fixed.0[e]) {
            if !tiling::triangle_ok(TilingMode::Ergb, [x, y, z]) {
                return Err(ScenarioError::InconsistentFixedColors(format!(
                    "triangle {} is colored {}{}{}",
                    sc.face_label(t),
                    x.letter(),
                    y.letter(),
                    z.letter()
                )));
            }
        }
    }
    let border: Vec<Option<EdgeColor>> = sc.omega_edges.iter().map(|&e| sc.fixed.0[e]).collect();
    if border.iter().all(|c| c.is_some()) && border_coloring(&border).is_none() {
        return Err(ScenarioError::InconsistentFixedColors(
            "border colors admit no exterior 4-coloring".into(),
        ));
    }
    for c in &doc.constraints {
        let con = sc.resolve_constraint(c)?;
        sc.constraints.push(con);
    }
    let mut gens = Vec::new();
    for s in &doc.symmetries {
        let mut perm: Vec<Vertex> = (0..n).collect();
        for (from, to) in s {
            perm[vx(from)?] = vx(to)?;
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if std::mem::replace(&mut seen[p], true) {
                return Err(doc_err("symmetry is not a permutation"));
            }
        }
        let maps_edges = sc
            .sigma
            .edges()
            .iter()
            .all(|e| sc.sigma.has_edge(perm[e.lo()], perm[e.hi()]));
        let border: BTreeSet<Vertex> = sc.omega.iter().copied().collect();
        if !maps_edges || !sc.omega.iter().all(|v| border.contains(&perm[*v])) {
            return Err(doc_err("symmetry does not preserve the region"));
        }
        gens.push(perm);
    }
    sc.group = close_group(n, &gens);
    sc.check_script()?;
    Ok(sc)
}

fn close_group(n: usize, gens: &[Vec<Vertex>]) -> Vec<Vec<Vertex>> {
    let id: Vec<Vertex> = (0..n).collect();
    let mut group = vec![id.clone()];
    let mut seen = BTreeSet::from([id]);
    let mut i = 0;
    while i < group.len() {
        for g in gens {
            let h: Vec<Vertex> = group[i].iter().map(|&x| g[x]).collect();
            if seen.insert(h.clone()) {
                group.push(h);
            }
        }
        i += 1;
    }
    group
}

/// Border 4-coloring implied by rgb border colors, if the colors close up.
pub fn border_coloring(colors: &[Option<EdgeColor>]) -> Option<Vec<u8>> {
    let mut f = vec![1u8];
    for c in colors {
        let c = (*c)?;
        if !c.is_rgb() {
            return None;
        }
        f.push(c.partner(*f.last().unwrap()));
    }
    (f.pop() == Some(1)).then_some(f)
}

/// Parity a chain must have given the colors along the rest of the cycle it closes.
pub fn chain_parity(color: EdgeColor, counts: [usize; 3]) -> ChainParity {
    let c = color.rgb_index().expect("rgb chain color");
    let others: Vec<usize> = (0..3).filter(|&i| i != c).map(|i| counts[i] % 2).collect();
    if others[0] != others[1] {
        return ChainParity::Impossible;
    }
    // all three totals along a cycle share one parity
    if (others[0] + counts[c]).is_multiple_of(2) {
        ChainParity::Even
    } else {
        ChainParity::Odd
    }
}

impl Scenario {
    pub fn vertex(&self, label: &str) -> Result<Vertex, ScenarioError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| ScenarioError::UnknownVertex(label.to_string()))
    }

    pub fn edge_by_label(&self, key: &str) -> Result<usize, ScenarioError> {
        let (u, v) = key
            .split_once('-')
            .ok_or_else(|| ScenarioError::UnknownEdge(key.to_string()))?;
        let (u, v) = (self.vertex(u.trim())?, self.vertex(v.trim())?);
        self.sigma
            .edge_between(u, v)
            .ok_or_else(|| ScenarioError::UnknownEdge(key.to_string()))
    }

    pub fn edge_label(&self, e: usize) -> String {
        let id = self.sigma.edge(e);
        format!("{}-{}", self.labels[id.lo()], self.labels[id.hi()])
    }

    pub fn face_label(&self, t: usize) -> String {
        let f = self.sigma.triangles()[t];
        format!("{}{}{}", self.labels[f[0]], self.labels[f[1]], self.labels[f[2]])
    }

    pub fn face_labels(&self, t: usize) -> [String; 3] {
        self.sigma.triangles()[t].map(|v| self.labels[v].clone())
    }

    fn border_position(&self, v: Vertex) -> Option<usize> {
        self.omega.iter().position(|&w| w == v)
    }

    fn resolve_constraint(&self, c: &ConstraintDoc) -> Result<Constraint, ScenarioError> {
        let (u, v) = (self.vertex(&c.u)?, self.vertex(&c.v)?);
        if self.border_position(u).is_none() || self.border_position(v).is_none() {
            return Err(doc_err(format!(
                "constraint endpoints {}-{} are not both on the border",
                c.u, c.v
            )));
        }
        if !c.color.is_rgb() {
            return Err(doc_err("constraint color must be r, g or b"));
        }
        if c.kind == ConstraintKind::ChainParity && c.parity.is_none() {
            return Err(doc_err("chain_parity needs a parity"));
        }
        Ok(Constraint {
            kind: c.kind,
            color: c.color,
            u,
            v,
            parity: c.parity,
        })
    }

    pub fn resolve_ring(&self, doc: &RingDoc) -> Result<Ring, ScenarioError> {
        let mut crossings = Vec::new();
        for c in &doc.crossings {
            let edge = self.edge_by_label(&c.edge)?;
            let face = match &c.face {
                None => None,
                Some(f) => {
                    let vs = [self.vertex(&f[0])?, self.vertex(&f[1])?, self.vertex(&f[2])?];
                    Some(
                        self.sigma
                            .find_triangle(vs)
                            .ok_or_else(|| doc_err(format!("no triangle {}", f.join(""))))?,
                    )
                }
            };
            crossings.push(RingCrossing {
                face,
                edge,
                kind: c.kind,
            });
        }
        if !doc.color.is_rgb() {
            return Err(doc_err("ring color must be r, g or b"));
        }
        Ok(Ring {
            color: doc.color,
            crossings,
        })
    }

    pub fn ring_doc(&self, ring: &Ring) -> RingDoc {
        RingDoc {
            color: ring.color,
            crossings: ring
                .crossings
                .iter()
                .map(|c| CrossingDoc {
                    face: c.face.map(|t| self.face_labels(t)),
                    edge: self.edge_label(c.edge),
                    kind: c.kind,
                })
                .collect(),
        }
    }

    fn check_script(&self) -> Result<(), ScenarioError> {
        for step in &self.script {
            match step {
                StepDoc::ApplyEcs { ring, .. } => {
                    self.resolve_ring(ring)?;
                }
                StepDoc::SetColors { colors } | StepDoc::AssertColors { colors } => {
                    for key in colors.keys() {
                        self.edge_by_label(key)?;
                    }
                }
                StepDoc::SigmaAdjust { keep, .. } => {
                    for key in keep {
                        self.edge_by_label(key)?;
                    }
                }
                StepDoc::AssumeChain { constraint } => {
                    self.resolve_constraint(constraint)?;
                }
                StepDoc::AssertBoundary { pattern, .. } => {
                    if pattern.chars().count() != self.omega.len() {
                        return Err(doc_err(format!("pattern '{pattern}' does not match the border length")));
                    }
                }
                StepDoc::AssertParity { walk, .. } => {
                    self.vertex(&walk.from)?;
                    self.vertex(&walk.to)?;
                    for v in &walk.closing {
                        self.vertex(v)?;
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn initial_state(&self) -> State {
        let mode = if self.fixed.0.contains(&Some(Yellow)) {
            TilingMode::Ergb
        } else {
            TilingMode::Rgb
        };
        let mut knowledge = Knowledge::default();
        for c in &self.constraints {
            match c.kind {
                ConstraintKind::ChainExists => knowledge.links.push((c.color, c.u, c.v, true)),
                ConstraintKind::ChainAbsent => knowledge.links.push((c.color, c.u, c.v, false)),
                ConstraintKind::ChainParity => {}
            }
        }
        State {
            colors: self.fixed.clone(),
            mode,
            border: self.omega_edges.iter().map(|&e| self.fixed.0[e]).collect(),
            knowledge,
        }
    }

    pub fn border_string(&self, state: &State) -> String {
        state.border.iter().map(|c| c.map_or('.', |c| c.letter())).collect()
    }

    /// The admissible exteriors of a state, or why there are none.
    pub fn exterior(&self, state: &State) -> Result<Exterior, String> {
        let f = border_coloring(&state.border).ok_or("border colors admit no exterior 4-coloring")?;
        let k = self.omega.len();
        let pos: HashMap<Vertex, usize> = self.omega.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut partitions: [Vec<Vec<usize>>; 3] = Default::default();
        for (ci, &c) in RGB.iter().enumerate() {
            let same_class = |i: usize, j: usize| f[i] == f[j] || c.partner(f[i]) == f[j];
            let mut out = Vec::new();
            noncrossing(k, &same_class, &mut |p| out.push(p.to_vec()));
            out.retain(|p| {
                let border_edges = (0..k).all(|i| state.border[i] != Some(c) || p[i] == p[(i + 1) % k]);
                let links = state
                    .knowledge
                    .links
                    .iter()
                    .filter(|l| l.0 == c)
                    .all(|&(_, u, v, exists)| (p[pos[&u]] == p[pos[&v]]) == exists);
                let parities = self
                    .constraints
                    .iter()
                    .filter(|x| x.kind == ConstraintKind::ChainParity && x.color == c)
                    .all(|x| {
                        let (i, j) = (pos[&x.u], pos[&x.v]);
                        let odd = f[i] != f[j];
                        p[i] != p[j] || odd == (x.parity == Some(Parity::Odd))
                    });
                let separated = state
                    .knowledge
                    .separations
                    .iter()
                    .filter(|s| s.0 == c)
                    .all(|(_, side)| (0..k).all(|i| (0..k).all(|j| p[i] != p[j] || side[i] == side[j])));
                border_edges && links && parities && separated
            });
            if out.is_empty() {
                return Err(format!("no exterior {c}-chains are consistent with the known facts"));
            }
            partitions[ci] = out;
        }
        Ok(Exterior { f, partitions })
    }

    /// Parity links that partition `p` of color `c` adds between border vertices.
    pub fn links(&self, ext: &Exterior, p: &[usize]) -> Vec<(Vertex, Vertex, bool)> {
        let k = self.omega.len();
        let mut out = Vec::new();
        for i in 0..k {
            if let Some(j) = (0..i).find(|&j| p[j] == p[i]) {
                out.push((self.omega[j], self.omega[i], ext.f[i] != ext.f[j]));
            }
        }
        out
    }

    fn block_labels(&self, p: &[usize]) -> String {
        let mut blocks: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for (i, &b) in p.iter().enumerate() {
            blocks.entry(b).or_default().push(&self.labels[self.omega[i]]);
        }
        blocks
            .values()
            .filter(|b| b.len() > 1)
            .map(|b| format!("{{{}}}", b.join(",")))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// A color-`c` odd cycle through the region for some admissible exterior.
    pub fn odd_cycle(&self, state: &State, ext: &Exterior, c: EdgeColor) -> Option<String> {
        let t = state.colors.complete()?;
        let ci = c.rgb_index()?;
        for p in &ext.partitions[ci] {
            let mut uf = ParityUnionFind::new(self.sigma.n());
            let mut ok = true;
            for (i, e) in self.sigma.edges().iter().enumerate() {
                if t.get(i) == c && !uf.union(e.lo(), e.hi(), true) {
                    ok = false;
                }
            }
            for (u, v, odd) in self.links(ext, p) {
                if !uf.union(u, v, odd) {
                    ok = false;
                }
            }
            if !ok {
                let chains = self.block_labels(p);
                return Some(if chains.is_empty() {
                    "inside the region".to_string()
                } else {
                    format!("with exterior chains {chains}")
                });
            }
        }
        None
    }

    /// Yellow edges whose diamond cannot be Type A or B for any admissible exterior.
    fn yellow_failures(&self, t: &EdgeColoring, ext: &Exterior) -> Vec<String> {
        let mut needs: BTreeMap<usize, Vec<(Vertex, Vertex, usize)>> = BTreeMap::new();
        let mut out = Vec::new();
        for (i, &c) in t.0.iter().enumerate() {
            if c != Yellow {
                continue;
            }
            let Some(d) = Diamond::around(&self.sigma, self.sigma.edge(i)) else {
                out.push(format!("yellow edge {} has no diamond", self.edge_label(i)));
                continue;
            };
            match tiling::yellow_requirement(d.surround_colors(t)) {
                None => out.push(format!(
                    "yellow edge {} has a surround that is neither Type A nor B",
                    self.edge_label(i)
                )),
                Some(req) => {
                    for x in req {
                        needs.entry(x.rgb_index().unwrap()).or_default().push((d.a, d.b, i));
                    }
                }
            }
        }
        for (ci, reqs) in needs {
            let c = RGB[ci];
            let ok = ext.partitions[ci].iter().any(|p| {
                let links = self.links(ext, p);
                reqs.iter()
                    .all(|&(a, b, _)| tiling::even_walk(&self.sigma, t, c, a, b, &links).is_some())
            });
            if !ok {
                let edges: Vec<String> = reqs.iter().map(|r| self.edge_label(r.2)).collect();
                out.push(format!(
                    "no exterior gives the {c}-chains that yellow {} needs",
                    edges.join(", ")
                ));
            }
        }
        out
    }

    pub fn check_state(&self, state: &State) -> StateVerdict {
        let mut reasons = Vec::new();
        let Some(t) = state.colors.complete() else {
            return StateVerdict {
                valid: false,
                reasons: vec!["some edges are uncolored".into()],
            };
        };
        let local = tiling::check_local(&self.sigma, &t, state.mode);
        for v in &local.triangles {
            let f = v.triangle.map(|x| self.labels[x].as_str());
            reasons.push(format!(
                "triangle {}{}{} breaks the {} rule",
                f[0], f[1], f[2], state.mode
            ));
        }
        for v in &local.edges {
            reasons.push(format!(
                "edge {}: {}",
                self.edge_label(self.sigma.edge_index(v.edge).unwrap_or(0)),
                v.reason
            ));
        }
        match self.exterior(state) {
            Err(e) => reasons.push(e),
            Ok(ext) => {
                if state.mode == TilingMode::Ergb {
                    reasons.extend(self.yellow_failures(&t, &ext));
                }
            }
        }
        StateVerdict {
            valid: reasons.is_empty(),
            reasons,
        }
    }

    /// Pins used when retiling the region in `mode`.
    fn border_pins(&self, state: &State, mode: TilingMode) -> Result<PartialColoring, String> {
        let mut fixed = PartialColoring::empty(&self.sigma);
        for (i, &e) in self.omega_edges.iter().enumerate() {
            let c = state.border[i].ok_or("border is not fully colored")?;
            fixed.0[e] = Some(match mode {
                TilingMode::Mono(x) if c != x => Black,
                _ => c,
            });
        }
        Ok(fixed)
    }

    /// Every valid retiling of the region in `mode` with the border colors kept.
    pub fn sigma_adjust(
        &self,
        state: &State,
        mode: TilingMode,
        keep: &[usize],
    ) -> Result<Vec<EdgeColoring>, ScenarioError> {
        let bad = |reason: String| ScenarioError::StepInapplicable { step: 0, reason };
        let mut fixed = self.border_pins(state, mode).map_err(bad)?;
        for &e in keep {
            fixed.0[e] = state.colors.0[e];
        }
        let free = fixed.0.iter().filter(|c| c.is_none()).count();
        if free > SIGMA_CAP {
            return Err(ScenarioError::CapExceeded { free, cap: SIGMA_CAP });
        }
        let ext = match mode {
            TilingMode::Ergb => Some(self.exterior(state).map_err(bad)?),
            _ => None,
        };
        let mut out = Vec::new();
        tiling::for_each_local_tiling(&self.sigma, mode, &fixed, SIGMA_CAP, &mut |t| {
            let ok = match &ext {
                Some(ext) => self.yellow_failures(t, ext).is_empty(),
                None => true,
            };
            if ok {
                out.push(t.clone());
            }
            true
        })
        .map_err(|e| bad(e.to_string()))?;
        out.sort_by_key(|t| t.letters());
        Ok(out)
    }

    fn classes_fixing_border(&self, all: &[EdgeColoring]) -> usize {
        let Some(first) = all.first() else { return 0 };
        let border: Vec<EdgeColor> = self.omega_edges.iter().map(|&e| first.get(e)).collect();
        let perms: Vec<&[EdgeColor; 3]> = PERMUTATIONS
            .iter()
            .filter(|p| border.iter().all(|c| c.rgb_index().is_none_or(|i| p[i] == *c)))
            .collect();
        let keys: BTreeSet<String> = all
            .iter()
            .map(|t| perms.iter().map(|p| t.permuted(p).letters()).min().unwrap())
            .collect();
        keys.len()
    }

    /// Apply ECS along a ring that may leave the region through border edges.
    pub fn apply_ring(&self, state: &State, ring: &Ring) -> Result<State, String> {
        if !matches!(state.mode, TilingMode::Rgb | TilingMode::Ergb) {
            return Err("ECS needs an RGB or eRGB state".into());
        }
        let t = state.colors.complete().ok_or("some edges are uncolored")?;
        let c = ring.color;
        let k = ring.crossings.len();
        if k < 2 {
            return Err("a ring needs at least two crossings".into());
        }
        let border_pos = |e: usize| self.omega_edges.iter().position(|&x| x == e);
        let mut crossed = BTreeSet::new();
        let mut legs = Vec::new();
        for i in 0..k {
            let cur = ring.crossings[i];
            let prev = ring.crossings[(i + k - 1) % k];
            let next = ring.crossings[(i + 1) % k];
            if !crossed.insert(cur.edge) {
                return Err(format!("edge {} is crossed twice", self.edge_label(cur.edge)));
            }
            let col = t.get(cur.edge);
            let ok = match cur.kind {
                CrossingKind::Normal => col.is_rgb() && col != c,
                CrossingKind::Generalized => col == c || col == Yellow,
            };
            if !ok {
                return Err(format!(
                    "edge {} has color {col}, not a {:?} crossing",
                    self.edge_label(cur.edge),
                    cur.kind
                ));
            }
            match cur.face {
                Some(f) => {
                    let es = self.sigma.triangle_edges(f);
                    if !es.contains(&cur.edge) || !es.contains(&prev.edge) || cur.edge == prev.edge {
                        return Err(format!(
                            "crossing {i} does not pass through triangle {}",
                            self.face_label(f)
                        ));
                    }
                }
                None => {
                    if border_pos(cur.edge).is_none() || border_pos(prev.edge).is_none() {
                        return Err(format!("exterior crossing {i} must join two border edges"));
                    }
                    if cur.kind != CrossingKind::Normal {
                        return Err("border edges can only be crossed normally".into());
                    }
                    legs.push((border_pos(prev.edge).unwrap(), border_pos(cur.edge).unwrap()));
                }
            }
            let onward = self
                .sigma
                .edge_triangles(cur.edge)
                .iter()
                .copied()
                .find(|&x| Some(x) != cur.face);
            match (onward, next.face) {
                (Some(a), Some(b)) if a == b => {}
                (None, None) if cur.face.is_some() => {}
                _ => return Err(format!("crossing {i} does not lead into the next crossing's triangle")),
            }
            let alternate = cur.face.is_some() && cur.kind == CrossingKind::Normal && prev.kind == CrossingKind::Normal;
            if alternate && t.get(prev.edge) == col {
                return Err(format!("crossings {} and {i} do not alternate", (i + k - 1) % k));
            }
        }
        let mut out = t.clone();
        for cr in &ring.crossings {
            let col = t.get(cr.edge);
            let others: Vec<EdgeColor> = RGB.iter().copied().filter(|&x| x != c).collect();
            let new = match cr.kind {
                CrossingKind::Normal if col == others[0] => others[1],
                CrossingKind::Normal => others[0],
                CrossingKind::Generalized if col == Yellow => c,
                CrossingKind::Generalized => Yellow,
            };
            out.set(cr.edge, new);
        }
        let mode = if out.0.contains(&Yellow) {
            TilingMode::Ergb
        } else {
            TilingMode::Rgb
        };
        let verdict = tiling::check_local(&self.sigma, &out, mode);
        if let Some(v) = verdict.triangles.first() {
            let f = v.triangle.map(|x| self.labels[x].as_str());
            return Err(format!("switching breaks triangle {}{}{}", f[0], f[1], f[2]));
        }
        if let Some(v) = verdict.edges.first() {
            return Err(v.reason.clone());
        }
        let mut next = State {
            colors: PartialColoring::from(&out),
            mode,
            border: self.omega_edges.iter().map(|&e| Some(out.get(e))).collect(),
            knowledge: state.knowledge.clone(),
        };
        if !legs.is_empty() {
            let f = border_coloring(&state.border).ok_or("border colors admit no exterior 4-coloring")?;
            next.knowledge.links.retain(|l| l.0 == c);
            next.knowledge.separations.retain(|s| s.0 == c);
            let kk = self.omega.len();
            for &(exit, entry) in &legs {
                // the leg runs through the exterior from border edge `exit` to `entry`;
                // its two banks are c-chains and nothing of color c crosses it
                let mut side = vec![false; kk];
                let mut i = (exit + 1) % kk;
                while i != (entry + 1) % kk {
                    side[i] = true;
                    i = (i + 1) % kk;
                }
                let banks = [((exit + 1) % kk, entry), (exit, (entry + 1) % kk)];
                for (x, y) in banks {
                    if x != y {
                        if f[x] != f[y] && c.partner(f[x]) != f[y] {
                            return Err(format!(
                                "the exterior leg needs a {c}-bank from {} to {}, which the border coloring forbids",
                                self.labels[self.omega[x]], self.labels[self.omega[y]]
                            ));
                        }
                        next.knowledge.links.push((c, self.omega[x], self.omega[y], true));
                    }
                }
                next.knowledge.separations.push((c, side));
            }
            self.exterior(&next).map_err(|e| format!("after the move: {e}"))?;
        }
        Ok(next)
    }

    fn matches_border(&self, state: &State, pattern: &str, up_to: Matching) -> Result<bool, String> {
        let want: Vec<EdgeColor> = pattern
            .chars()
            .map(|ch| EdgeColor::from_letter(ch).ok_or(format!("bad color letter '{ch}'")))
            .collect::<Result<_, _>>()?;
        let have: Vec<EdgeColor> = state
            .border
            .iter()
            .map(|c| c.ok_or("border is not fully colored"))
            .collect::<Result<_, _>>()?;
        let group: Vec<&Vec<Vertex>> = match up_to {
            Matching::Sym => self.group.iter().collect(),
            _ => vec![&self.group[0]],
        };
        let perms: Vec<[EdgeColor; 3]> = match up_to {
            Matching::Exact => vec![PERMUTATIONS[0]],
            _ => PERMUTATIONS.to_vec(),
        };
        let k = self.omega.len();
        let by_edge: HashMap<usize, EdgeColor> = (0..k).map(|i| (self.omega_edges[i], have[i])).collect();
        for g in group {
            // color of border edge i after moving the region by g
            let moved: Option<Vec<EdgeColor>> = (0..k)
                .map(|i| {
                    let (u, v) = (self.omega[i], self.omega[(i + 1) % k]);
                    let pre = |x: Vertex| g.iter().position(|&y| y == x).unwrap();
                    self.sigma
                        .edge_between(pre(u), pre(v))
                        .and_then(|e| by_edge.get(&e).copied())
                })
                .collect();
            let Some(moved) = moved else { continue };
            for p in &perms {
                if moved
                    .iter()
                    .zip(&want)
                    .all(|(&m, &w)| m.rgb_index().map_or(m, |i| p[i]) == w)
                {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Parity forced on a `walk.color` chain from `walk.from` to `walk.to` by the
    /// known edges that close it into a cycle.
    pub fn deduce_chain_parity(&self, state: &State, walk: &WalkDoc) -> Result<ChainParity, ScenarioError> {
        let bad = |m: String| ScenarioError::MalformedWalk(m);
        if !walk.color.is_rgb() {
            return Err(bad("chain color must be r, g or b".into()));
        }
        let path = walk
            .closing
            .iter()
            .map(|s| self.vertex(s))
            .collect::<Result<Vec<_>, _>>()?;
        let (from, to) = (self.vertex(&walk.from)?, self.vertex(&walk.to)?);
        if path.len() < 2 || path[0] != to || *path.last().unwrap() != from {
            return Err(bad(
                "closing path must run from the chain's end back to its start".into()
            ));
        }
        if path.iter().collect::<BTreeSet<_>>().len() != path.len() {
            return Err(bad("closing path repeats a vertex".into()));
        }
        let mut counts = [0usize; 3];
        for w in path.windows(2) {
            let e = self
                .sigma
                .edge_between(w[0], w[1])
                .ok_or_else(|| bad(format!("{}-{} is not an edge", self.labels[w[0]], self.labels[w[1]])))?;
            let mut col = state.colors.0[e];
            if !col.is_some_and(|c| c.is_rgb()) {
                if let Some(i) = self.omega_edges.iter().position(|&x| x == e) {
                    col = state.border[i];
                }
            }
            let col = col
                .filter(|c| c.is_rgb())
                .ok_or_else(|| bad(format!("edge {} has no rgb color", self.edge_label(e))))?;
            counts[col.rgb_index().unwrap()] += 1;
        }
        Ok(chain_parity(walk.color, counts))
    }

    pub fn run_script(&self) -> Result<Transcript, ScenarioError> {
        let mut state = self.initial_state();
        let mut steps = Vec::new();
        let mut failed_at = None;
        for (index, step) in self.script.iter().enumerate() {
            let inapplicable = |reason: String| ScenarioError::StepInapplicable { step: index, reason };
            let (status, detail, label) = self.run_step(&mut state, step).map_err(|e| match e {
                ScenarioError::StepInapplicable { reason, .. } => inapplicable(reason),
                other => other,
            })?;
            steps.push(StepRecord {
                index,
                step: step_name(step).to_string(),
                label,
                status,
                detail,
                border: self.border_string(&state),
                colors: state.colors.0.iter().map(|c| c.map_or('.', |c| c.letter())).collect(),
            });
            if status == StepStatus::Fail {
                failed_at = Some(index);
                break;
            }
        }
        let facts: Vec<String> = self
            .constraints
            .iter()
            .map(|c| {
                let kind = match c.kind {
                    ConstraintKind::ChainExists => "chain",
                    ConstraintKind::ChainAbsent => "no chain",
                    ConstraintKind::ChainParity => "parity of chain",
                };
                format!("{kind} {} {}-{}", c.color, self.labels[c.u], self.labels[c.v])
            })
            .collect();
        let header = format!(
            "region {} with border {}; conclusions hold for every exterior consistent with the border coloring{}",
            self.name,
            self.omega
                .iter()
                .map(|&v| self.labels[v].as_str())
                .collect::<Vec<_>>()
                .join("-"),
            if facts.is_empty() {
                String::new()
            } else {
                format!(" and: {}", facts.join("; "))
            }
        );
        Ok(Transcript {
            scenario: self.name.clone(),
            header,
            edges: (0..self.sigma.edge_count()).map(|e| self.edge_label(e)).collect(),
            steps,
            pass: failed_at.is_none(),
            failed_at,
        })
    }

    fn run_step(
        &self,
        state: &mut State,
        step: &StepDoc,
    ) -> Result<(StepStatus, String, Option<String>), ScenarioError> {
        let bad = |reason: String| ScenarioError::StepInapplicable { step: 0, reason };
        let verdict =
            |ok: bool, detail: String| Ok((if ok { StepStatus::Pass } else { StepStatus::Fail }, detail, None));
        match step {
            StepDoc::ApplyEcs { ring, label } => {
                let r = self.resolve_ring(ring)?;
                *state = self.apply_ring(state, &r).map_err(bad)?;
                let legs = r.crossings.iter().filter(|c| c.face.is_none()).count();
                let detail = format!(
                    "{} ring with {} crossings{}",
                    r.color,
                    r.crossings.len(),
                    if legs > 0 {
                        format!(", {legs} through the exterior")
                    } else {
                        String::new()
                    }
                );
                Ok((StepStatus::Done, detail, label.clone()))
            }
            StepDoc::SetColors { colors } => {
                for (key, &c) in colors {
                    let e = self.edge_by_label(key)?;
                    state.colors.0[e] = Some(c);
                    if let Some(i) = self.omega_edges.iter().position(|&x| x == e) {
                        if c.is_rgb() {
                            state.border[i] = Some(c);
                        }
                    }
                }
                if state.colors.0.contains(&Some(Black)) {
                    let tile = state
                        .colors
                        .0
                        .iter()
                        .flatten()
                        .find(|c| c.is_rgb())
                        .copied()
                        .unwrap_or(EdgeColor::Red);
                    state.mode = TilingMode::Mono(tile);
                } else if state.colors.0.contains(&Some(Yellow)) {
                    state.mode = TilingMode::Ergb;
                } else {
                    state.mode = TilingMode::Rgb;
                }
                Ok((StepStatus::Done, format!("{} edges set", colors.len()), None))
            }
            StepDoc::SigmaAdjust {
                mode,
                pick,
                keep,
                yellow,
                expect,
                expect_classes,
            } => {
                let keep = keep
                    .iter()
                    .map(|k| self.edge_by_label(k))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut all = self.sigma_adjust(state, *mode, &keep)?;
                if let Some(y) = yellow {
                    all.retain(|t| t.0.iter().filter(|&&c| c == Yellow).count() == *y);
                }
                let classes = self.classes_fixing_border(&all);
                let ext = self.exterior(state).map_err(bad)?;
                let colors: Vec<EdgeColor> = match mode {
                    TilingMode::Mono(c) => vec![*c],
                    _ => RGB.to_vec(),
                };
                let chosen = all.iter().position(|t| match pick {
                    Pick::First => true,
                    Pick::NoOddCycle => {
                        let s = State {
                            colors: PartialColoring::from(t),
                            mode: *mode,
                            ..state.clone()
                        };
                        colors.iter().all(|&c| self.odd_cycle(&s, &ext, c).is_none())
                    }
                });
                let count_ok = expect.is_none_or(|n| n == all.len()) && expect_classes.is_none_or(|n| n == classes);
                let mut detail = format!(
                    "{} retilings in {mode} mode, {classes} up to synonyms fixing the border",
                    all.len()
                );
                if let Some(i) = chosen {
                    state.colors = PartialColoring::from(&all[i]);
                    state.mode = *mode;
                    detail.push_str(&format!(", taking number {}", i + 1));
                } else {
                    detail.push_str(", none acceptable");
                }
                if let Some(n) = expect {
                    detail.push_str(&format!("; expected {n}"));
                }
                if let Some(n) = expect_classes {
                    detail.push_str(&format!("; expected {n} classes"));
                }
                verdict(chosen.is_some() && count_ok, detail)
            }
            StepDoc::AssumeChain { constraint } => {
                let c = self.resolve_constraint(constraint)?;
                match c.kind {
                    ConstraintKind::ChainExists => state.knowledge.links.push((c.color, c.u, c.v, true)),
                    ConstraintKind::ChainAbsent => state.knowledge.links.push((c.color, c.u, c.v, false)),
                    ConstraintKind::ChainParity => return Err(bad("parity facts follow from the border".into())),
                }
                let detail = format!(
                    "assume {:?} {} {}-{}",
                    c.kind, c.color, self.labels[c.u], self.labels[c.v]
                );
                Ok((StepStatus::Done, detail, None))
            }
            StepDoc::AssertBoundary { pattern, up_to } => {
                let ok = self.matches_border(state, pattern, *up_to).map_err(bad)?;
                verdict(
                    ok,
                    format!("border {} against {pattern} up to {up_to:?}", self.border_string(state)),
                )
            }
            StepDoc::AssertColors { colors } => {
                let mut wrong = Vec::new();
                for (key, &c) in colors {
                    let e = self.edge_by_label(key)?;
                    if state.colors.0[e] != Some(c) {
                        wrong.push(key.clone());
                    }
                }
                verdict(
                    wrong.is_empty(),
                    if wrong.is_empty() {
                        "colors match".into()
                    } else {
                        format!("differs on {}", wrong.join(", "))
                    },
                )
            }
            StepDoc::AssertParity { walk, expect } => {
                let got = self.deduce_chain_parity(state, walk)?;
                verdict(
                    got == *expect,
                    format!("{} chain {}-{} is {got:?}", walk.color, walk.from, walk.to),
                )
            }
            StepDoc::AssertNoCompletion { mode } => {
                let n = self.sigma_adjust(state, *mode, &[])?.len();
                verdict(n == 0, format!("{n} {mode} tilings of the region keep the border"))
            }
            StepDoc::AssertCompletionExists { mode } => {
                let n = self.sigma_adjust(state, *mode, &[])?.len();
                verdict(n > 0, format!("{n} {mode} tilings of the region keep the border"))
            }
            StepDoc::AssertNoMonoOddCycle { color } => {
                let ext = self.exterior(state).map_err(bad)?;
                if state.colors.complete().is_none() {
                    return Err(bad("some edges are uncolored".into()));
                }
                match self.odd_cycle(state, &ext, *color) {
                    None => verdict(
                        true,
                        format!(
                            "no {color} odd cycle for any of {} exteriors",
                            ext.partitions[color.rgb_index().unwrap()].len()
                        ),
                    ),
                    Some(w) => verdict(false, format!("{color} odd cycle {w}")),
                }
            }
            StepDoc::AssertValid => {
                let v = self.check_state(state);
                verdict(
                    v.valid,
                    if v.valid {
                        format!("valid {} state", state.mode)
                    } else {
                        v.reasons.join("; ")
                    },
                )
            }
            StepDoc::AssertContradiction => {
                let v = self.check_state(state);
                verdict(
                    !v.valid,
                    if v.valid {
                        "state is consistent".into()
                    } else {
                        v.reasons.join("; ")
                    },
                )
            }
            StepDoc::Note { text } => Ok((StepStatus::Done, text.clone(), None)),
        }
    }

    /// Closed and exterior-crossing rings applicable to a state, as documents.
    pub fn available_rings(&self, state: &State, max_len: usize) -> Vec<RingDoc> {
        let Some(t) = state.colors.complete() else {
            return Vec::new();
        };
        if !matches!(state.mode, TilingMode::Rgb | TilingMode::Ergb) {
            return Vec::new();
        }
        let mut out = Vec::new();
        for c in RGB {
            for canal in crate::kempe::enumerate_canals(&self.sigma, &t, c, max_len) {
                let mut crossings: Vec<RingCrossing> = Vec::new();
                if let Some(entry) = canal.entry {
                    if !canal
                        .crossings
                        .iter()
                        .all(|x| x.kind == CrossingKind::Normal || !self.omega_edges.contains(&x.edge))
                    {
                        continue;
                    }
                    if crate::kempe::CrossingKind::Normal != kind_of(t.get(entry), c) {
                        continue;
                    }
                    crossings.push(RingCrossing {
                        face: None,
                        edge: entry,
                        kind: CrossingKind::Normal,
                    });
                }
                crossings.extend(canal.crossings.iter().map(|x| RingCrossing {
                    face: Some(x.face),
                    edge: x.edge,
                    kind: x.kind,
                }));
                let ring = Ring { color: c, crossings };
                if self.apply_ring(state, &ring).is_ok() {
                    out.push(self.ring_doc(&ring));
                }
            }
        }
        out
    }
}

fn kind_of(col: EdgeColor, c: EdgeColor) -> CrossingKind {
    if col.is_rgb() && col != c {
        CrossingKind::Normal
    } else {
        CrossingKind::Generalized
    }
}

fn step_name(step: &StepDoc) -> &'static str {
    match step {
        StepDoc::ApplyEcs { .. } => "apply_ecs",
        StepDoc::SetColors { .. } => "set_colors",
        StepDoc::SigmaAdjust { .. } => "sigma_adjust",
        StepDoc::AssumeChain { .. } => "assume_chain",
        StepDoc::AssertBoundary { .. } => "assert_boundary",
        StepDoc::AssertColors { .. } => "assert_colors",
        StepDoc::AssertParity { .. } => "assert_parity",
        StepDoc::AssertNoCompletion { .. } => "assert_no_completion",
        StepDoc::AssertCompletionExists { .. } => "assert_completion_exists",
        StepDoc::AssertNoMonoOddCycle { .. } => "assert_no_mono_odd_cycle",
        StepDoc::AssertValid => "assert_valid",
        StepDoc::AssertContradiction => "assert_contradiction",
        StepDoc::Note { .. } => "note",
    }
}

/// Non-crossing partitions of positions 0..k (as block labels) whose blocks only
/// join positions accepted by `joinable`.
pub fn noncrossing(k: usize, joinable: &dyn Fn(usize, usize) -> bool, visit: &mut dyn FnMut(&[usize])) {
    fn go(
        i: usize,
        k: usize,
        p: &mut Vec<usize>,
        first: &mut Vec<usize>,
        last: &mut Vec<usize>,
        joinable: &dyn Fn(usize, usize) -> bool,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if i == k {
            visit(p);
            return;
        }
        for b in 0..first.len() {
            let l = last[b];
            if !joinable(first[b], i) || (l + 1..i).any(|j| first[p[j]] < l) {
                continue;
            }
            p.push(b);
            last[b] = i;
            go(i + 1, k, p, first, last, joinable, visit);
            last[b] = l;
            p.pop();
        }
        p.push(first.len());
        first.push(i);
        last.push(i);
        go(i + 1, k, p, first, last, joinable, visit);
        first.pop();
        last.pop();
        p.pop();
    }
    go(0, k, &mut Vec::new(), &mut Vec::new(), &mut Vec::new(), joinable, visit);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasBoundary {
    pub pattern: String,
    pub triple: [usize; 3],
    /// Size of the orbit under synonyms and region symmetries.
    pub orbit: usize,
    pub rgb_completions: usize,
    pub ergb_completions: usize,
    pub four_colorable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exemplar: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasReport {
    pub td: String,
    pub triples: Vec<[usize; 3]>,
    pub boundaries: Vec<AtlasBoundary>,
    pub patterns: usize,
    pub forcing: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<AtlasExpect>,
    pub discrepancies: Vec<String>,
}

impl Scenario {
    fn canonical_border(&self, colors: &[EdgeColor]) -> String {
        let k = self.omega.len();
        let by_edge: HashMap<usize, EdgeColor> = (0..k).map(|i| (self.omega_edges[i], colors[i])).collect();
        let mut best: Option<String> = None;
        for g in &self.group {
            let moved: Vec<EdgeColor> = (0..k)
                .map(|i| {
                    let pre = |x: Vertex| g.iter().position(|&y| y == x).unwrap();
                    let e = self
                        .sigma
                        .edge_between(pre(self.omega[i]), pre(self.omega[(i + 1) % k]))
                        .unwrap();
                    by_edge[&e]
                })
                .collect();
            for p in &PERMUTATIONS {
                let s: String = moved.iter().map(|c| p[c.rgb_index().unwrap()].letter()).collect();
                if best.as_ref().is_none_or(|b| s < *b) {
                    best = Some(s);
                }
            }
        }
        best.unwrap()
    }

    /// Every border coloring up to synonyms and symmetry, with its interior completions.
    pub fn atlas(&self) -> Result<AtlasReport, ScenarioError> {
        let k = self.omega.len();
        let mut classes: BTreeMap<String, usize> = BTreeMap::new();
        let mut code = vec![0usize; k];
        loop {
            let colors: Vec<EdgeColor> = code.iter().map(|&i| RGB[i]).collect();
            let opt: Vec<Option<EdgeColor>> = colors.iter().map(|&c| Some(c)).collect();
            if border_coloring(&opt).is_some() {
                *classes.entry(self.canonical_border(&colors)).or_default() += 1;
            }
            let mut i = 0;
            while i < k && code[i] == 2 {
                code[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
            code[i] += 1;
        }
        let mut boundaries = Vec::new();
        let mut triples = BTreeSet::new();
        for (pattern, orbit) in classes {
            let colors: Vec<Option<EdgeColor>> = pattern.chars().map(EdgeColor::from_letter).collect();
            let mut triple = [0usize; 3];
            for c in colors.iter().flatten() {
                triple[c.rgb_index().unwrap()] += 1;
            }
            triple.sort_unstable();
            triples.insert(triple);
            let state = State {
                colors: PartialColoring::empty(&self.sigma),
                mode: TilingMode::Ergb,
                border: colors,
                knowledge: Knowledge::default(),
            };
            let rgb = self.sigma_adjust(&state, TilingMode::Rgb, &[])?;
            let ergb: Vec<EdgeColoring> = self
                .sigma_adjust(&state, TilingMode::Ergb, &[])?
                .into_iter()
                .filter(|t| t.0.contains(&Yellow))
                .collect();
            let exemplar = rgb.first().or(ergb.first()).map(|t| t.letters());
            boundaries.push(AtlasBoundary {
                pattern,
                triple,
                orbit,
                rgb_completions: rgb.len(),
                ergb_completions: ergb.len(),
                four_colorable: !rgb.is_empty(),
                exemplar,
            });
        }
        let patterns = boundaries
            .iter()
            .filter(|b| b.rgb_completions + b.ergb_completions > 0)
            .count();
        let forcing = boundaries
            .iter()
            .filter(|b| !b.four_colorable && b.ergb_completions > 0)
            .count();
        let mut discrepancies = Vec::new();
        if let Some(exp) = &self.atlas {
            if exp.patterns != patterns {
                discrepancies.push(format!(
                    "{patterns} border patterns have completions, expected {}",
                    exp.patterns
                ));
            }
            if exp.forcing != forcing {
                discrepancies.push(format!(
                    "{forcing} patterns force a yellow edge, expected {}",
                    exp.forcing
                ));
            }
        }
        Ok(AtlasReport {
            td: self.name.clone(),
            triples: triples.into_iter().collect(),
            boundaries,
            patterns,
            forcing,
            expected: self.atlas.clone(),
            discrepancies,
        })
    }
}

/// Breadth-first search over ring moves from a state, returning every state reached
/// within `depth` moves keyed by its colors.
pub fn explore(sc: &Scenario, start: &State, depth: usize, max_len: usize) -> Vec<(State, Vec<RingDoc>)> {
    let mut seen: HashMap<Vec<Option<EdgeColor>>, usize> = HashMap::new();
    let mut out = vec![(start.clone(), Vec::new())];
    seen.insert(start.colors.0.clone(), 0);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((i, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        let (state, path) = out[i].clone();
        for ring in sc.available_rings(&state, max_len) {
            let r = sc.resolve_ring(&ring).expect("generated ring resolves");
            let Ok(next) = sc.apply_ring(&state, &r) else { continue };
            if seen.contains_key(&next.colors.0) || !sc.check_state(&next).valid {
                continue;
            }
            let mut p = path.clone();
            p.push(ring);
            seen.insert(next.colors.0.clone(), out.len());
            queue.push_back((out.len(), d + 1));
            out.push((next, p));
        }
    }
    out
}
