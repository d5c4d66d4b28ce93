use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanarError {
    #[error("graph needs at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("rotation has {got} lists for {n} vertices")]
    RotationLength { n: usize, got: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("multi-edge between {0} and {1}")]
    MultiEdge(Vertex, Vertex),
    #[error("rotation not symmetric: {0} lists {1} but not vice versa")]
    Asymmetric(Vertex, Vertex),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("rotation is not planar: n - E + F = {0}")]
    NotPlanarRotation(i64),
    #[error("face {0:?} is not a triangle and is not a declared outer facet")]
    NonTriangleFace(Vec<Vertex>),
    #[error("declared outer facet {0:?} is not a face of the embedding")]
    UnknownOuterFacet(Vec<Vertex>),
    #[error("edge {0} is shared by two outer facets")]
    SharedOuterEdge(EdgeId),
    #[error("inconsistent face list at vertex {0}")]
    InconsistentFaces(Vertex),
    #[error("edge {0} not found")]
    EdgeNotFound(EdgeId),
    #[error("edge {0} already present")]
    EdgePresent(EdgeId),
    #[error("contracting {0} creates a multi-edge")]
    ContractionCreatesMultiEdge(EdgeId),
    #[error("neighbors of the vertex set do not form a simple cycle")]
    NotSimpleCycle,
    #[error("vertex set does not induce a connected subgraph")]
    NotConnectedTD,
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("transplant result is not a simple triangulation: {0}")]
    ResultNotSimple(String),
    #[error("planar_code stream truncated")]
    TruncatedStream,
    #[error("planar_code neighbor index {index} out of range for n = {n}")]
    VertexIndexOutOfRange { index: usize, n: usize },
    #[error("unexpected stream header")]
    HeaderMismatch,
    #[error("unsupported vertex count {0} in planar_code record")]
    UnsupportedVertexCount(usize),
    #[error("requested size {n} exceeds cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("malformed edge '{0}'")]
    MalformedEdge(String),
}

/// Undirected edge, stored as (min, max).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(Vertex, Vertex);

impl EdgeId {
    pub fn new(u: Vertex, v: Vertex) -> Self {
        if u <= v {
            EdgeId(u, v)
        } else {
            EdgeId(v, u)
        }
    }

    pub fn lo(self) -> Vertex {
        self.0
    }

    pub fn hi(self) -> Vertex {
        self.1
    }

    pub fn ends(self) -> (Vertex, Vertex) {
        (self.0, self.1)
    }

    pub fn has(self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn other(self, v: Vertex) -> Vertex {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl FromStr for EdgeId {
    type Err = PlanarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PlanarError::MalformedEdge(s.to_string());
        let (a, b) = s.split_once(['-', ',']).ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        if a == b {
            return Err(bad());
        }
        Ok(EdgeId::new(a, b))
    }
}

impl Serialize for EdgeId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// JSON form of a graph: 0-based rotation lists plus optional outer facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub rotation: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outer_facets: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub shared_edge_allowed: bool,
}

/// A triangulated planar graph given by a counterclockwise rotation system.
///
/// With no outer facets this is a maximal planar graph; otherwise the
/// non-triangular faces (and any triangles declared as such) are holes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneGraph {
    rotation: Vec<Vec<Vertex>>,
    edges: Vec<EdgeId>,
    edge_index: HashMap<EdgeId, usize>,
    triangles: Vec<[Vertex; 3]>,
    outer: Vec<Vec<Vertex>>,
    edge_triangles: Vec<Vec<usize>>,
    shared_edge_allowed: bool,
}

fn position(list: &[Vertex], v: Vertex) -> Option<usize> {
    list.iter().position(|&x| x == v)
}

/// Rotate a cyclic sequence so it starts at its minimum element.
fn rotate_to_min(cycle: &[Vertex]) -> Vec<Vertex> {
    let i = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| *v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle[i..].iter().chain(&cycle[..i]).copied().collect()
}

fn same_cycle(a: &[Vertex], b: &[Vertex]) -> bool {
    a.len() == b.len() && rotate_to_min(a) == rotate_to_min(b)
}

fn reversed(c: &[Vertex]) -> Vec<Vertex> {
    c.iter().rev().copied().collect()
}

fn trace_faces(rotation: &[Vec<Vertex>]) -> Vec<Vec<Vertex>> {
    let mut seen: Vec<Vec<bool>> = rotation.iter().map(|r| vec![false; r.len()]).collect();
    let mut faces = Vec::new();
    for u in 0..rotation.len() {
        for i in 0..rotation[u].len() {
            if seen[u][i] {
                continue;
            }
            let mut face = Vec::new();
            let (mut x, mut j) = (u, i);
            while !seen[x][j] {
                seen[x][j] = true;
                face.push(x);
                let y = rotation[x][j];
                let k = position(&rotation[y], x).expect("symmetric rotation");
                let d = rotation[y].len();
                (x, j) = (y, (k + d - 1) % d);
            }
            faces.push(face);
        }
    }
    faces
}

impl PlaneGraph {
    pub fn new(
        rotation: Vec<Vec<Vertex>>,
        outer_facets: Vec<Vec<Vertex>>,
        shared_edge_allowed: bool,
    ) -> Result<Self, PlanarError> {
        let n = rotation.len();
        if n < 3 {
            return Err(PlanarError::TooSmall(n));
        }
        let mut edges = BTreeSet::new();
        for (u, list) in rotation.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &v in list {
                if v >= n {
                    return Err(PlanarError::VertexOutOfRange(v));
                }
                if v == u {
                    return Err(PlanarError::SelfLoop(u));
                }
                if !seen.insert(v) {
                    return Err(PlanarError::MultiEdge(u, v));
                }
                if !rotation[v].contains(&u) {
                    return Err(PlanarError::Asymmetric(u, v));
                }
                edges.insert(EdgeId::new(u, v));
            }
        }

        let mut reached = vec![false; n];
        let mut queue = VecDeque::from([0]);
        reached[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &rotation[u] {
                if !reached[v] {
                    reached[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(PlanarError::DisconnectedGraph);
        }

        let faces = trace_faces(&rotation);
        let euler = n as i64 - edges.len() as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(PlanarError::NotPlanarRotation(euler));
        }

        let mut claimed = vec![false; faces.len()];
        let mut outer = Vec::new();
        for declared in &outer_facets {
            let hit = faces
                .iter()
                .enumerate()
                .find(|(i, f)| !claimed[*i] && same_cycle(f, declared))
                .or_else(|| {
                    let rev = reversed(declared);
                    faces
                        .iter()
                        .enumerate()
                        .find(|(i, f)| !claimed[*i] && same_cycle(f, &rev))
                });
            match hit {
                Some((i, f)) => {
                    claimed[i] = true;
                    outer.push(rotate_to_min(f));
                }
                None => return Err(PlanarError::UnknownOuterFacet(declared.clone())),
            }
        }
        let mut triangles = Vec::new();
        for (i, f) in faces.iter().enumerate() {
            if claimed[i] {
                continue;
            }
            if f.len() != 3 {
                return Err(PlanarError::NonTriangleFace(f.clone()));
            }
            let f = rotate_to_min(f);
            triangles.push([f[0], f[1], f[2]]);
        }
        triangles.sort_by_key(|t| {
            let mut s = *t;
            s.sort_unstable();
            (s, *t)
        });
        outer.sort();

        let edges: Vec<EdgeId> = edges.into_iter().collect();
        let edge_index: HashMap<EdgeId, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut edge_triangles = vec![Vec::new(); edges.len()];
        for (ti, t) in triangles.iter().enumerate() {
            for k in 0..3 {
                edge_triangles[edge_index[&EdgeId::new(t[k], t[(k + 1) % 3])]].push(ti);
            }
        }
        let mut outer_count = vec![0usize; edges.len()];
        for f in &outer {
            for k in 0..f.len() {
                outer_count[edge_index[&EdgeId::new(f[k], f[(k + 1) % f.len()])]] += 1;
            }
        }
        for (i, &c) in outer_count.iter().enumerate() {
            if c > 1 && !shared_edge_allowed {
                return Err(PlanarError::SharedOuterEdge(edges[i]));
            }
        }

        Ok(PlaneGraph {
            rotation,
            edges,
            edge_index,
            triangles,
            outer,
            edge_triangles,
            shared_edge_allowed,
        })
    }

    /// Build from oriented faces (triangles and outer facets together, every
    /// face traversed with its interior on the left).
    pub fn from_faces(n: usize, faces: &[Vec<Vertex>], outer_facets: &[Vec<Vertex>]) -> Result<Self, PlanarError> {
        let mut succ: Vec<HashMap<Vertex, Vertex>> = vec![HashMap::new(); n];
        for face in faces.iter().chain(outer_facets) {
            let k = face.len();
            for i in 0..k {
                let (u, v, w) = (face[i], face[(i + 1) % k], face[(i + 2) % k]);
                if u >= n || v >= n || w >= n {
                    return Err(PlanarError::VertexOutOfRange(u.max(v).max(w)));
                }
                if succ[v].insert(w, u).is_some() {
                    return Err(PlanarError::MultiEdge(v, w));
                }
            }
        }
        let mut rotation = Vec::with_capacity(n);
        for (v, map) in succ.iter().enumerate() {
            let start = *map.keys().min().ok_or(PlanarError::InconsistentFaces(v))?;
            let mut list = vec![start];
            let mut cur = map[&start];
            while cur != start {
                list.push(cur);
                cur = *map.get(&cur).ok_or(PlanarError::InconsistentFaces(v))?;
                if list.len() > map.len() {
                    return Err(PlanarError::InconsistentFaces(v));
                }
            }
            if list.len() != map.len() {
                return Err(PlanarError::InconsistentFaces(v));
            }
            rotation.push(list);
        }
        let shared = {
            let mut count: HashMap<EdgeId, usize> = HashMap::new();
            for f in outer_facets {
                for i in 0..f.len() {
                    *count.entry(EdgeId::new(f[i], f[(i + 1) % f.len()])).or_default() += 1;
                }
            }
            count.values().any(|&c| c > 1)
        };
        PlaneGraph::new(rotation, outer_facets.to_vec(), shared)
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<Self, PlanarError> {
        if doc.rotation.len() != doc.n {
            return Err(PlanarError::RotationLength {
                n: doc.n,
                got: doc.rotation.len(),
            });
        }
        PlaneGraph::new(doc.rotation.clone(), doc.outer_facets.clone(), doc.shared_edge_allowed)
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            n: self.n(),
            rotation: self.rotation.clone(),
            outer_facets: self.outer.clone(),
            shared_edge_allowed: self.shared_edge_allowed,
        }
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotation[v].len()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize) -> EdgeId {
        self.edges[i]
    }

    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.edge_index.get(&e).copied()
    }

    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edge_index(EdgeId::new(u, v))
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn triangles(&self) -> &[[Vertex; 3]] {
        &self.triangles
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        let f = self.triangles[t];
        [0, 1, 2].map(|k| self.edge_index[&EdgeId::new(f[k], f[(k + 1) % 3])])
    }

    /// Index of the triangle with the given vertex set, in any order.
    pub fn find_triangle(&self, vs: [Vertex; 3]) -> Option<usize> {
        let mut key = vs;
        key.sort_unstable();
        self.triangles.iter().position(|t| {
            let mut s = *t;
            s.sort_unstable();
            s == key
        })
    }

    /// Triangles containing edge `e` (zero, one or two).
    pub fn edge_triangles(&self, e: usize) -> &[usize] {
        &self.edge_triangles[e]
    }

    pub fn outer_facets(&self) -> &[Vec<Vertex>] {
        &self.outer
    }

    pub fn is_mpg(&self) -> bool {
        self.outer.is_empty()
    }

    pub fn is_one_piece(&self) -> bool {
        self.outer.len() <= 1
    }

    pub fn shared_edge_allowed(&self) -> bool {
        self.shared_edge_allowed
    }

    /// Edges lying on some outer facet, in facet order.
    pub fn facet_edges(&self, facet: usize) -> Vec<usize> {
        let f = &self.outer[facet];
        (0..f.len())
            .map(|i| self.edge_index[&EdgeId::new(f[i], f[(i + 1) % f.len()])])
            .collect()
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_triangles[e].len() < 2
    }

    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self, PlanarError> {
        let n = self.n();
        let mut rotation = vec![Vec::new(); n];
        for v in 0..n {
            rotation[perm[v]] = self.rotation[v].iter().map(|&w| perm[w]).collect();
        }
        let outer = self
            .outer
            .iter()
            .map(|f| f.iter().map(|&v| perm[v]).collect())
            .collect();
        PlaneGraph::new(rotation, outer, self.shared_edge_allowed)
    }

    pub fn mirror(&self) -> Self {
        let rotation = self.rotation.iter().map(|r| reversed(r)).collect();
        let outer = self.outer.iter().map(|f| reversed(f)).collect();
        PlaneGraph::new(rotation, outer, self.shared_edge_allowed).expect("mirror of valid graph")
    }

    /// All faces (triangles first, then outer facets) with their orientation.
    pub fn faces(&self) -> Vec<Vec<Vertex>> {
        self.triangles
            .iter()
            .map(|t| t.to_vec())
            .chain(self.outer.iter().cloned())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// canonical code

fn rotation_code(g: &PlaneGraph, start: Vertex, first: Vertex, flip: bool) -> Vec<u16> {
    let n = g.n();
    let mut label = vec![0u16; n];
    let mut order = Vec::with_capacity(n);
    let mut entry = vec![0usize; n];
    label[start] = 1;
    order.push(start);
    entry[start] = first;
    let mut code = Vec::with_capacity(n + 2 * g.edge_count() + 8);
    let mut next_label = 2;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let rot = &g.rotation[v];
        let d = rot.len();
        let p = position(rot, entry[v]).unwrap();
        for k in 0..d {
            let w = if flip { rot[(p + d - k) % d] } else { rot[(p + k) % d] };
            if label[w] == 0 {
                label[w] = next_label;
                next_label += 1;
                entry[w] = v;
                order.push(w);
            }
            code.push(label[w]);
        }
        code.push(0);
    }
    let mut facets: Vec<Vec<u16>> = g
        .outer
        .iter()
        .map(|f| {
            let mut c: Vec<u16> = f.iter().map(|&v| label[v]).collect();
            if flip {
                c.reverse();
            }
            let i = (0..c.len()).min_by_key(|&i| c[i]).unwrap();
            c.rotate_left(i);
            c
        })
        .collect();
    facets.sort();
    for f in facets {
        code.extend(f);
        code.push(0);
    }
    code
}

/// Isomorphism invariant of the embedded graph, taking mirror images into account.
pub fn canonical_code(g: &PlaneGraph) -> Vec<u8> {
    code_over(g, &[false, true])
}

/// Like [`canonical_code`] but only orientation-preserving; differs from the
/// mirror's code exactly for chiral embeddings.
pub fn oriented_code(g: &PlaneGraph) -> Vec<u8> {
    code_over(g, &[false])
}

fn code_over(g: &PlaneGraph, flips: &[bool]) -> Vec<u8> {
    let mut best: Option<Vec<u16>> = None;
    for u in 0..g.n() {
        for &v in &g.rotation[u] {
            for &flip in flips {
                let c = rotation_code(g, u, v, flip);
                if best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            }
        }
    }
    let mut out = vec![(g.n() >> 8) as u8, g.n() as u8];
    for x in best.unwrap_or_default() {
        out.extend(x.to_be_bytes());
    }
    out
}

// ---------------------------------------------------------------------------
// planar_code

const PLANAR_CODE_HEADER: &[u8] = b">>planar_code<<";

pub fn parse_planar_code(bytes: &[u8]) -> Result<Vec<PlaneGraph>, PlanarError> {
    let mut pos = 0;
    if bytes.starts_with(b">>") {
        if !bytes.starts_with(PLANAR_CODE_HEADER) {
            return Err(PlanarError::HeaderMismatch);
        }
        pos = PLANAR_CODE_HEADER.len();
    }
    let mut graphs = Vec::new();
    while pos < bytes.len() {
        let n = bytes[pos] as usize;
        pos += 1;
        if n == 0 {
            return Err(PlanarError::UnsupportedVertexCount(0));
        }
        let mut rotation = Vec::with_capacity(n);
        for _ in 0..n {
            let mut list = Vec::new();
            loop {
                let b = *bytes.get(pos).ok_or(PlanarError::TruncatedStream)? as usize;
                pos += 1;
                if b == 0 {
                    break;
                }
                if b > n {
                    return Err(PlanarError::VertexIndexOutOfRange { index: b, n });
                }
                list.push(b - 1);
            }
            rotation.push(list);
        }
        graphs.push(PlaneGraph::new(rotation, Vec::new(), false)?);
    }
    Ok(graphs)
}

pub fn write_planar_code(graphs: &[PlaneGraph]) -> Vec<u8> {
    let mut out = PLANAR_CODE_HEADER.to_vec();
    for g in graphs {
        assert!(g.n() < 256, "planar_code records are limited to 255 vertices");
        out.push(g.n() as u8);
        for list in &g.rotation {
            out.extend(list.iter().map(|&v| (v + 1) as u8));
            out.push(0);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// generators and builtin graphs

pub mod builtin {
    use super::*;

    pub fn k4() -> PlaneGraph {
        let faces = [vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]];
        PlaneGraph::from_faces(4, &faces, &[]).unwrap()
    }

    pub fn octahedron() -> PlaneGraph {
        let faces = [
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 1],
            vec![5, 2, 1],
            vec![5, 3, 2],
            vec![5, 4, 3],
            vec![5, 1, 4],
        ];
        PlaneGraph::from_faces(6, &faces, &[]).unwrap()
    }

    pub fn icosahedron() -> PlaneGraph {
        let up = |i: usize| 1 + (i % 5);
        let low = |i: usize| 6 + (i % 5);
        let mut faces = Vec::new();
        for i in 0..5 {
            faces.push(vec![0, up(i), up(i + 1)]);
            faces.push(vec![up(i + 1), up(i), low(i)]);
            faces.push(vec![up(i + 1), low(i), low(i + 1)]);
            faces.push(vec![11, low(i + 1), low(i)]);
        }
        PlaneGraph::from_faces(12, &faces, &[]).unwrap()
    }

    /// Wheel with hub 0 and rim 1..=k, the rim declared as outer facet.
    pub fn wheel(k: usize) -> PlaneGraph {
        let rim = |i: usize| 1 + (i % k);
        let faces: Vec<Vec<Vertex>> = (0..k).map(|i| vec![0, rim(i), rim(i + 1)]).collect();
        let outer: Vec<Vertex> = (0..k).rev().map(rim).collect();
        PlaneGraph::from_faces(k + 1, &faces, &[outer]).unwrap()
    }

    /// A single triangle with one triangular hole.
    pub fn triangle() -> PlaneGraph {
        PlaneGraph::from_faces(3, &[vec![0, 1, 2]], &[vec![0, 2, 1]]).unwrap()
    }

    pub fn by_name(name: &str) -> Option<PlaneGraph> {
        match name {
            "k4" => Some(k4()),
            "octahedron" => Some(octahedron()),
            "icosahedron" => Some(icosahedron()),
            "w5" => Some(wheel(5)),
            "triangle" => Some(triangle()),
            _ => None,
        }
    }
}

/// Insert a new vertex inside triangle `t`.
pub fn stack_vertex(g: &PlaneGraph, t: usize) -> PlaneGraph {
    let x = g.n();
    let [u, v, w] = g.triangles[t];
    let mut faces: Vec<Vec<Vertex>> = g
        .triangles
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != t)
        .map(|(_, f)| f.to_vec())
        .collect();
    faces.extend([vec![u, v, x], vec![v, w, x], vec![w, u, x]]);
    PlaneGraph::from_faces(x + 1, &faces, &g.outer).expect("stacking keeps planarity")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StackedMode {
    Exhaustive,
    Random { count: usize },
}

pub const EXHAUSTIVE_CAP: usize = 10;
pub const RANDOM_CAP: usize = 16;

pub fn generate_stacked(n: usize, mode: StackedMode, seed: u64) -> Result<Vec<PlaneGraph>, PlanarError> {
    use rand::{Rng, SeedableRng};

    let cap = match mode {
        StackedMode::Exhaustive => EXHAUSTIVE_CAP,
        StackedMode::Random { .. } => RANDOM_CAP,
    };
    if n > cap {
        return Err(PlanarError::CapExceeded { n, cap });
    }
    if n < 4 {
        return Err(PlanarError::TooSmall(n));
    }
    match mode {
        StackedMode::Exhaustive => {
            let mut level = vec![builtin::k4()];
            for _ in 4..n {
                let mut next: std::collections::BTreeMap<Vec<u8>, PlaneGraph> = Default::default();
                for g in &level {
                    for t in 0..g.triangles.len() {
                        let h = stack_vertex(g, t);
                        next.entry(canonical_code(&h)).or_insert(h);
                    }
                }
                level = next.into_values().collect();
            }
            Ok(level)
        }
        StackedMode::Random { count } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            Ok((0..count)
                .map(|_| {
                    let mut g = builtin::k4();
                    while g.n() < n {
                        let t = rng.gen_range(0..g.triangles.len());
                        g = stack_vertex(&g, t);
                    }
                    g
                })
                .collect())
        }
    }
}

/// Random triangulation: a random stacked graph followed by random edge flips.
pub fn random_triangulation(n: usize, flips: usize, seed: u64) -> PlaneGraph {
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut g = builtin::k4();
    while g.n() < n {
        let t = rng.gen_range(0..g.triangles.len());
        g = stack_vertex(&g, t);
    }
    for _ in 0..flips {
        let e = rng.gen_range(0..g.edge_count());
        if let Some(h) = flip_edge(&g, e) {
            g = h;
        }
    }
    g
}

/// Replace edge ab (between triangles abN and baS) by NS, if that keeps the graph simple.
pub fn flip_edge(g: &PlaneGraph, e: usize) -> Option<PlaneGraph> {
    let ts = g.edge_triangles(e);
    if ts.len() != 2 {
        return None;
    }
    let (a, b) = g.edges[e].ends();
    let apex = |t: usize| g.triangles[t].into_iter().find(|&v| v != a && v != b).unwrap();
    let (p, q) = (apex(ts[0]), apex(ts[1]));
    if g.has_edge(p, q) || g.degree(a) <= 3 || g.degree(b) <= 3 {
        return None;
    }
    let mut faces: Vec<Vec<Vertex>> = g
        .triangles
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != ts[0] && i != ts[1])
        .map(|(_, f)| f.to_vec())
        .collect();
    let [x0, y0, z0] = g.triangles[ts[0]];
    // (s, t, p) with the apex last; the other side is (t, s, q)
    let (s, t) = if z0 == p {
        (x0, y0)
    } else if x0 == p {
        (y0, z0)
    } else {
        (z0, x0)
    };
    faces.push(vec![s, q, p]);
    faces.push(vec![q, t, p]);
    PlaneGraph::from_faces(g.n(), &faces, &g.outer).ok()
}

// ---------------------------------------------------------------------------
// surgery

/// Faces of `g` as (triangles, outer facets), each an oriented vertex list.
fn face_lists(g: &PlaneGraph) -> (Vec<Vec<Vertex>>, Vec<Vec<Vertex>>) {
    (g.triangles.iter().map(|t| t.to_vec()).collect(), g.outer.clone())
}

/// Delete edge `e`, merging its two sides into an outer facet.
pub fn remove_edge(g: &PlaneGraph, e: EdgeId) -> Result<PlaneGraph, PlanarError> {
    if g.edge_index(e).is_none() {
        return Err(PlanarError::EdgeNotFound(e));
    }
    let (a, b) = e.ends();
    let (tris, outer) = face_lists(g);
    let mut side_ab = None;
    let mut side_ba = None;
    let mut kept_tris = Vec::new();
    let mut kept_outer = Vec::new();
    for (is_outer, f) in tris
        .into_iter()
        .map(|f| (false, f))
        .chain(outer.into_iter().map(|f| (true, f)))
    {
        let k = f.len();
        let dart = (0..k).find_map(|i| {
            let (x, y) = (f[i], f[(i + 1) % k]);
            if (x, y) == (a, b) {
                Some((true, i))
            } else if (x, y) == (b, a) {
                Some((false, i))
            } else {
                None
            }
        });
        match dart {
            Some((true, i)) => side_ab = Some((f, i)),
            Some((false, i)) => side_ba = Some((f, i)),
            None if is_outer => kept_outer.push(f),
            None => kept_tris.push(f),
        }
    }
    let (f1, i1) = side_ab.ok_or(PlanarError::EdgeNotFound(e))?;
    let (f2, i2) = side_ba.ok_or(PlanarError::EdgeNotFound(e))?;
    // f1 = a b x.. (starting at i1), f2 = b a y..; merged walk: b x.. a y..
    let walk1: Vec<Vertex> = (1..f1.len()).map(|k| f1[(i1 + k) % f1.len()]).collect();
    let walk2: Vec<Vertex> = (1..f2.len()).map(|k| f2[(i2 + k) % f2.len()]).collect();
    let merged: Vec<Vertex> = walk1.into_iter().chain(walk2).collect();
    kept_outer.push(merged);
    let mut rotation = g.rotation.clone();
    rotation[a].retain(|&v| v != b);
    rotation[b].retain(|&v| v != a);
    let shared = {
        let mut count: HashMap<EdgeId, usize> = HashMap::new();
        for f in &kept_outer {
            for i in 0..f.len() {
                *count.entry(EdgeId::new(f[i], f[(i + 1) % f.len()])).or_default() += 1;
            }
        }
        count.values().any(|&c| c > 1)
    };
    PlaneGraph::new(rotation, kept_outer, shared || g.shared_edge_allowed)
}

/// Insert edge ab across an outer facet containing both endpoints.
pub fn add_edge(g: &PlaneGraph, e: EdgeId) -> Result<PlaneGraph, PlanarError> {
    if g.edge_index(e).is_some() {
        return Err(PlanarError::EdgePresent(e));
    }
    let (a, b) = e.ends();
    let fi = g
        .outer
        .iter()
        .position(|f| f.contains(&a) && f.contains(&b))
        .ok_or_else(|| PlanarError::BoundaryMismatch(format!("no outer facet holds {e}")))?;
    let f = &g.outer[fi];
    let k = f.len();
    let ia = position(f, a).unwrap();
    let ib = position(f, b).unwrap();
    // split f = a .. b .. into (a .. b) and (b .. a)
    let part = |from: usize, to: usize| {
        let mut p = vec![f[from]];
        let mut i = from;
        while i != to {
            i = (i + 1) % k;
            p.push(f[i]);
        }
        p
    };
    let p1 = part(ia, ib);
    let p2 = part(ib, ia);
    let (tris, outer) = face_lists(g);
    let mut new_tris = tris;
    let mut new_outer: Vec<Vec<Vertex>> = outer
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != fi)
        .map(|(_, f)| f)
        .collect();
    for p in [p1, p2] {
        if p.len() == 3 {
            new_tris.push(p);
        } else {
            new_outer.push(p);
        }
    }
    PlaneGraph::from_faces(g.n(), &new_tris, &new_outer)
}

/// Merge the endpoints of edge ab into a single vertex (a keeps its index; b is deleted
/// and higher indices shift down by one).
pub fn contract_edge(g: &PlaneGraph, e: EdgeId) -> Result<PlaneGraph, PlanarError> {
    let ei = g.edge_index(e).ok_or(PlanarError::EdgeNotFound(e))?;
    let (a, b) = e.ends();
    let apexes: Vec<Vertex> = g
        .edge_triangles(ei)
        .iter()
        .map(|&t| g.triangles[t].into_iter().find(|&v| v != a && v != b).unwrap())
        .collect();
    if apexes.len() != 2 || !g.is_mpg() {
        return Err(PlanarError::BoundaryMismatch(format!(
            "{e} is not an interior edge of an MPG"
        )));
    }
    let common = g.rotation[a].iter().filter(|v| g.rotation[b].contains(v)).count();
    if common != 2 {
        return Err(PlanarError::ContractionCreatesMultiEdge(e));
    }
    let relabel = |v: Vertex| if v > b { v - 1 } else { v };
    let mut faces = Vec::new();
    for t in &g.triangles {
        if t.contains(&a) && t.contains(&b) {
            continue;
        }
        faces.push(t.iter().map(|&v| relabel(if v == b { a } else { v })).collect());
    }
    PlaneGraph::from_faces(g.n() - 1, &faces, &[])
}

/// Neighbor cycle Ω around a connected vertex set, oriented with the set on its left.
pub fn link_cycle(g: &PlaneGraph, td: &[Vertex]) -> Result<Vec<Vertex>, PlanarError> {
    let inside: BTreeSet<Vertex> = td.iter().copied().collect();
    if inside.is_empty() {
        return Err(PlanarError::NotConnectedTD);
    }
    if let Some(&v) = inside.iter().find(|&&v| v >= g.n()) {
        return Err(PlanarError::VertexOutOfRange(v));
    }
    let start = *inside.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in &g.rotation[u] {
            if inside.contains(&v) && seen.insert(v) {
                stack.push(v);
            }
        }
    }
    if seen.len() != inside.len() {
        return Err(PlanarError::NotConnectedTD);
    }
    let in_region = |f: &[Vertex]| f.iter().any(|v| inside.contains(v));
    let region: Vec<&[Vertex; 3]> = g.triangles.iter().filter(|t| in_region(&t[..])).collect();
    let region_set: BTreeSet<[Vertex; 3]> = region.iter().map(|t| **t).collect();
    // a dart x->y bounds the region when the face holding y->x is outside it
    let face_of_dart: HashMap<(Vertex, Vertex), Option<[Vertex; 3]>> = {
        let mut m = HashMap::new();
        for t in &g.triangles {
            for k in 0..3 {
                m.insert((t[k], t[(k + 1) % 3]), Some(*t));
            }
        }
        for f in &g.outer {
            for k in 0..f.len() {
                m.insert((f[k], f[(k + 1) % f.len()]), None);
            }
        }
        m
    };
    let mut next: HashMap<Vertex, Vertex> = HashMap::new();
    for t in &region {
        for k in 0..3 {
            let (x, y) = (t[k], t[(k + 1) % 3]);
            let twin = face_of_dart.get(&(y, x)).copied().flatten();
            if twin.is_none_or(|f| !region_set.contains(&f)) && next.insert(x, y).is_some() {
                return Err(PlanarError::NotSimpleCycle);
            }
        }
    }
    let neighbors: BTreeSet<Vertex> = inside
        .iter()
        .flat_map(|&u| g.rotation[u].iter().copied())
        .filter(|v| !inside.contains(v))
        .collect();
    let first = *next.keys().min().ok_or(PlanarError::NotSimpleCycle)?;
    let mut cycle = vec![first];
    let mut cur = next[&first];
    while cur != first {
        cycle.push(cur);
        cur = *next.get(&cur).ok_or(PlanarError::NotSimpleCycle)?;
        if cycle.len() > next.len() {
            return Err(PlanarError::NotSimpleCycle);
        }
    }
    if cycle.len() != next.len() || cycle.len() < 3 {
        return Err(PlanarError::NotSimpleCycle);
    }
    let on_cycle: BTreeSet<Vertex> = cycle.iter().copied().collect();
    if on_cycle != neighbors {
        return Err(PlanarError::NotSimpleCycle);
    }
    Ok(cycle)
}

/// Triangles enclosed by the oriented cycle `omega` (region on its left).
fn enclosed_triangles(g: &PlaneGraph, omega: &[Vertex]) -> Result<Vec<usize>, PlanarError> {
    let k = omega.len();
    let boundary: BTreeSet<EdgeId> = (0..k).map(|i| EdgeId::new(omega[i], omega[(i + 1) % k])).collect();
    for &e in &boundary {
        if g.edge_index(e).is_none() {
            return Err(PlanarError::BoundaryMismatch(format!("{e} is not an edge of the host")));
        }
    }
    let mut dart_face: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for (ti, t) in g.triangles.iter().enumerate() {
        for j in 0..3 {
            dart_face.insert((t[j], t[(j + 1) % 3]), ti);
        }
    }
    let mut seen = vec![false; g.triangles.len()];
    let mut stack = Vec::new();
    for i in 0..k {
        let t = *dart_face
            .get(&(omega[i], omega[(i + 1) % k]))
            .ok_or_else(|| PlanarError::BoundaryMismatch("cycle runs along a hole".into()))?;
        if !seen[t] {
            seen[t] = true;
            stack.push(t);
        }
    }
    while let Some(t) = stack.pop() {
        for e in g.triangle_edges(t) {
            if boundary.contains(&g.edges[e]) {
                continue;
            }
            for &u in g.edge_triangles(e) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    Ok((0..g.triangles.len()).filter(|&t| seen[t]).collect())
}

/// A region cut out of a host along a cycle, with its vertex correspondence.
#[derive(Clone, Debug)]
pub struct Region {
    pub graph: PlaneGraph,
    /// `host_vertex[i]` is the host vertex behind region vertex `i`.
    pub host_vertex: Vec<Vertex>,
    /// The cycle in region labels, oriented with the region on its left.
    pub boundary: Vec<Vertex>,
}

/// Cut out the part of `g` enclosed by `omega` as a semi-MPG whose single outer facet is Ω.
/// Boundary vertices come first, in cycle order.
pub fn interior_of(g: &PlaneGraph, omega: &[Vertex]) -> Result<Region, PlanarError> {
    let tris = enclosed_triangles(g, omega)?;
    let mut host_vertex: Vec<Vertex> = omega.to_vec();
    let mut local: HashMap<Vertex, Vertex> = omega.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut inner: BTreeSet<Vertex> = BTreeSet::new();
    for &t in &tris {
        inner.extend(g.triangles[t].iter().filter(|v| !local.contains_key(v)));
    }
    for v in inner {
        local.insert(v, host_vertex.len());
        host_vertex.push(v);
    }
    let faces: Vec<Vec<Vertex>> = tris
        .iter()
        .map(|&t| g.triangles[t].iter().map(|v| local[v]).collect())
        .collect();
    let boundary: Vec<Vertex> = (0..omega.len()).collect();
    let hole: Vec<Vertex> = boundary.iter().rev().copied().collect();
    let graph = PlaneGraph::from_faces(host_vertex.len(), &faces, &[hole])?;
    Ok(Region {
        graph,
        host_vertex,
        boundary,
    })
}

/// Replace the inside of `omega` in `host` by `interior`, whose boundary cycle
/// `interior_boundary[i]` is glued to `omega[i]`.
pub fn transplant(
    host: &PlaneGraph,
    omega: &[Vertex],
    interior: &PlaneGraph,
    interior_boundary: &[Vertex],
) -> Result<PlaneGraph, PlanarError> {
    if interior.outer.len() != 1 {
        return Err(PlanarError::BoundaryMismatch(
            "interior needs exactly one outer facet".into(),
        ));
    }
    let k = omega.len();
    if interior_boundary.len() != k || interior.outer[0].len() != k {
        return Err(PlanarError::BoundaryMismatch(format!(
            "cycle length {k} vs interior boundary {}",
            interior.outer[0].len()
        )));
    }
    if !same_cycle(&interior.outer[0], &reversed(interior_boundary)) {
        return Err(PlanarError::BoundaryMismatch(
            "interior boundary does not match its outer facet orientation".into(),
        ));
    }
    let removed = enclosed_triangles(host, omega)?;
    let removed_set: BTreeSet<usize> = removed.iter().copied().collect();
    let on_omega: BTreeSet<Vertex> = omega.iter().copied().collect();
    let mut alive = BTreeSet::new();
    for (ti, t) in host.triangles.iter().enumerate() {
        if !removed_set.contains(&ti) {
            alive.extend(t.iter().copied());
        }
    }
    for f in &host.outer {
        alive.extend(f.iter().copied());
    }
    alive.extend(on_omega.iter().copied());
    let mut new_id: HashMap<Vertex, Vertex> = HashMap::new();
    for (i, v) in alive.iter().enumerate() {
        new_id.insert(*v, i);
    }
    let mut next = alive.len();
    let glue: HashMap<Vertex, Vertex> = interior_boundary
        .iter()
        .zip(omega)
        .map(|(&iv, &hv)| (iv, new_id[&hv]))
        .collect();
    let mut inner_id: HashMap<Vertex, Vertex> = HashMap::new();
    for v in 0..interior.n() {
        if let Some(&h) = glue.get(&v) {
            inner_id.insert(v, h);
        } else {
            inner_id.insert(v, next);
            next += 1;
        }
    }
    let mut faces: Vec<Vec<Vertex>> = host
        .triangles
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed_set.contains(i))
        .map(|(_, t)| t.iter().map(|v| new_id[v]).collect())
        .collect();
    faces.extend(
        interior
            .triangles
            .iter()
            .map(|t| t.iter().map(|v| inner_id[v]).collect()),
    );
    let outer: Vec<Vec<Vertex>> = host
        .outer
        .iter()
        .map(|f| f.iter().map(|v| new_id[v]).collect())
        .collect();
    PlaneGraph::from_faces(next, &faces, &outer).map_err(|e| PlanarError::ResultNotSimple(e.to_string()))
}
