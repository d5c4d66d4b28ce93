use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planar::{EdgeId, PlaneGraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("vertex coloring is not proper at edge {0}")]
    NotProper(EdgeId),
    #[error("tiling is not grand: parity clash at edge {0}")]
    NotGrand(EdgeId),
    #[error("red odd cycle through {0:?}")]
    RedOddCycle(Vec<Vertex>),
    #[error("edge coloring is not an RGB-tiling at edge {0}")]
    NotRgb(EdgeId),
    #[error("green/blue colors are inconsistent with any vertex coloring at edge {0}")]
    Inconsistent(EdgeId),
    #[error("graph with {n} vertices exceeds enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("unknown color '{0}'")]
    UnknownColor(String),
    #[error("coloring document: {0}")]
    Document(String),
}

/// Edge colors; the derived order r < g < b < k < Y is the enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeColor {
    Red,
    Green,
    Blue,
    Black,
    Yellow,
}

pub use EdgeColor::{Black, Blue, Green, Red, Yellow};

pub const RGB: [EdgeColor; 3] = [Red, Green, Blue];

impl EdgeColor {
    pub fn letter(self) -> char {
        match self {
            Red => 'r',
            Green => 'g',
            Blue => 'b',
            Black => 'k',
            Yellow => 'Y',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'r' => Some(Red),
            'g' => Some(Green),
            'b' => Some(Blue),
            'k' => Some(Black),
            'Y' | 'y' => Some(Yellow),
            _ => None,
        }
    }

    pub fn is_rgb(self) -> bool {
        matches!(self, Red | Green | Blue)
    }

    pub fn rgb_index(self) -> Option<usize> {
        match self {
            Red => Some(0),
            Green => Some(1),
            Blue => Some(2),
            _ => None,
        }
    }

    /// The third of red/green/blue, given two distinct ones.
    pub fn third(a: EdgeColor, b: EdgeColor) -> EdgeColor {
        *RGB.iter()
            .find(|&&c| c != a && c != b)
            .expect("two distinct rgb colors")
    }

    /// Color of an edge whose endpoints carry vertex colors `x` and `y`.
    pub fn of_pair(x: u8, y: u8) -> Option<EdgeColor> {
        match (x.min(y), x.max(y)) {
            (1, 3) | (2, 4) => Some(Red),
            (1, 4) | (2, 3) => Some(Green),
            (1, 2) | (3, 4) => Some(Blue),
            _ => None,
        }
    }

    /// The vertex-color involution attached to an rgb color: crossing an edge
    /// of this color maps the color of one endpoint to the other.
    pub fn partner(self, x: u8) -> u8 {
        match (self, x) {
            (Red, 1) => 3,
            (Red, 3) => 1,
            (Red, 2) => 4,
            (Red, 4) => 2,
            (Green, 1) => 4,
            (Green, 4) => 1,
            (Green, 2) => 3,
            (Green, 3) => 2,
            (Blue, 1) => 2,
            (Blue, 2) => 1,
            (Blue, 3) => 4,
            (Blue, 4) => 3,
            _ => panic!("no partner for {self:?} on {x}"),
        }
    }
}

impl fmt::Display for EdgeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for EdgeColor {
    type Err = ColoringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => EdgeColor::from_letter(c),
            _ => match s.to_ascii_lowercase().as_str() {
                "red" => Some(Red),
                "green" => Some(Green),
                "blue" => Some(Blue),
                "black" => Some(Black),
                "yellow" => Some(Yellow),
                _ => None,
            },
        }
        .ok_or_else(|| ColoringError::UnknownColor(s.to_string()))
    }
}

impl Serialize for EdgeColor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeColor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Total edge coloring, indexed by the host's edge order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeColoring(pub Vec<EdgeColor>);

/// Partial edge coloring used for fixed assignments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialColoring(pub Vec<Option<EdgeColor>>);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoringDoc {
    pub edges: BTreeMap<String, EdgeColor>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexColoringDoc {
    pub vertices: BTreeMap<String, u8>,
}

impl EdgeColoring {
    pub fn uniform(host: &PlaneGraph, c: EdgeColor) -> Self {
        EdgeColoring(vec![c; host.edge_count()])
    }

    pub fn get(&self, e: usize) -> EdgeColor {
        self.0[e]
    }

    pub fn set(&mut self, e: usize, c: EdgeColor) {
        self.0[e] = c;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn permuted(&self, perm: &[EdgeColor; 3]) -> Self {
        EdgeColoring(self.0.iter().map(|c| c.rgb_index().map_or(*c, |i| perm[i])).collect())
    }

    pub fn to_doc(&self, host: &PlaneGraph) -> EdgeColoringDoc {
        EdgeColoringDoc {
            edges: host
                .edges()
                .iter()
                .zip(&self.0)
                .map(|(e, c)| (e.to_string(), *c))
                .collect(),
        }
    }

    pub fn from_doc(host: &PlaneGraph, doc: &EdgeColoringDoc) -> Result<Self, ColoringError> {
        let partial = PartialColoring::from_doc(host, doc)?;
        partial.complete().ok_or_else(|| {
            let missing = partial.0.iter().position(Option::is_none).unwrap();
            ColoringError::Document(format!("edge {} has no color", host.edge(missing)))
        })
    }

    /// Compact letter string in edge order, e.g. "rgbbgr".
    pub fn letters(&self) -> String {
        self.0.iter().map(|c| c.letter()).collect()
    }
}

impl Serialize for EdgeColoring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.letters())
    }
}

impl PartialColoring {
    pub fn empty(host: &PlaneGraph) -> Self {
        PartialColoring(vec![None; host.edge_count()])
    }

    pub fn complete(&self) -> Option<EdgeColoring> {
        self.0.iter().copied().collect::<Option<Vec<_>>>().map(EdgeColoring)
    }

    pub fn from_doc(host: &PlaneGraph, doc: &EdgeColoringDoc) -> Result<Self, ColoringError> {
        let mut out = PartialColoring::empty(host);
        for (key, &c) in &doc.edges {
            let e: EdgeId = key
                .parse()
                .map_err(|_| ColoringError::Document(format!("bad edge key '{key}'")))?;
            let i = host
                .edge_index(e)
                .ok_or_else(|| ColoringError::Document(format!("edge {e} not in graph")))?;
            out.0[i] = Some(c);
        }
        Ok(out)
    }
}

impl From<&EdgeColoring> for PartialColoring {
    fn from(t: &EdgeColoring) -> Self {
        PartialColoring(t.0.iter().map(|&c| Some(c)).collect())
    }
}

/// Vertex 4-coloring with colors 1..=4.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexColoring(pub Vec<u8>);

impl VertexColoring {
    pub fn to_doc(&self) -> VertexColoringDoc {
        VertexColoringDoc {
            vertices: self.0.iter().enumerate().map(|(v, &c)| (v.to_string(), c)).collect(),
        }
    }

    pub fn from_doc(n: usize, doc: &VertexColoringDoc) -> Result<Self, ColoringError> {
        let mut out = vec![0u8; n];
        for (k, &c) in &doc.vertices {
            let v: usize = k
                .parse()
                .map_err(|_| ColoringError::Document(format!("bad vertex '{k}'")))?;
            if v >= n || !(1..=4).contains(&c) {
                return Err(ColoringError::Document(format!("bad entry {k}: {c}")));
            }
            out[v] = c;
        }
        if let Some(v) = out.iter().position(|&c| c == 0) {
            return Err(ColoringError::Document(format!("vertex {v} has no color")));
        }
        Ok(VertexColoring(out))
    }
}

pub fn is_proper(host: &PlaneGraph, vc: &VertexColoring) -> bool {
    host.edges().iter().all(|e| vc.0[e.lo()] != vc.0[e.hi()])
}

pub fn induce_edge_coloring(host: &PlaneGraph, vc: &VertexColoring) -> Result<EdgeColoring, ColoringError> {
    host.edges()
        .iter()
        .map(|&e| EdgeColor::of_pair(vc.0[e.lo()], vc.0[e.hi()]).ok_or(ColoringError::NotProper(e)))
        .collect::<Result<Vec<_>, _>>()
        .map(EdgeColoring)
}

fn adjacency(host: &PlaneGraph) -> Vec<Vec<(Vertex, usize)>> {
    let mut adj = vec![Vec::new(); host.n()];
    for (i, e) in host.edges().iter().enumerate() {
        adj[e.lo()].push((e.hi(), i));
        adj[e.hi()].push((e.lo(), i));
    }
    adj
}

/// Recover a vertex coloring from a tiling.
///
/// For an RGB-tiling vertex 0 gets color 1 and the rest follows by walking edges.
/// For an R-tiling (red/black) the lowest vertex of each red component gets 1
/// (inside V13) or 2 (inside V24) and colors alternate along red edges.
pub fn induce_vertex_coloring(host: &PlaneGraph, t: &EdgeColoring) -> Result<VertexColoring, ColoringError> {
    let is_r_tiling = t.0.iter().all(|&c| c == Red || c == Black);
    if is_r_tiling {
        return vertex_coloring_from_r(host, t);
    }
    if let Some(i) = t.0.iter().position(|c| !c.is_rgb()) {
        return Err(ColoringError::NotRgb(host.edge(i)));
    }
    let adj = adjacency(host);
    let mut f = vec![0u8; host.n()];
    f[0] = 1;
    let mut queue = VecDeque::from([0]);
    let mut clash = None;
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            let want = t.0[e].partner(f[u]);
            if f[v] == 0 {
                f[v] = want;
                queue.push_back(v);
            } else if f[v] != want && clash.is_none() {
                clash = Some(e);
            }
        }
    }
    match clash {
        None => Ok(VertexColoring(f)),
        Some(e) => {
            let projected = EdgeColoring(t.0.iter().map(|&c| if c == Red { Red } else { Black }).collect());
            vertex_coloring_from_r(host, &projected)?;
            Err(ColoringError::Inconsistent(host.edge(e)))
        }
    }
}

fn vertex_coloring_from_r(host: &PlaneGraph, t: &EdgeColoring) -> Result<VertexColoring, ColoringError> {
    let witness = crate::tiling::is_grand_in(host, t, Red).map_err(|e| ColoringError::NotGrand(e.clash))?;
    if let Some(cycle) = crate::tiling::mono_odd_cycle(host, t, Red) {
        return Err(ColoringError::RedOddCycle(cycle));
    }
    let adj = adjacency(host);
    let mut f = vec![0u8; host.n()];
    for s in 0..host.n() {
        if f[s] != 0 {
            continue;
        }
        let (lo, hi) = if witness.v13.contains(&s) { (1, 3) } else { (2, 4) };
        f[s] = lo;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &adj[u] {
                if t.0[e] == Red && f[v] == 0 {
                    f[v] = if f[u] == lo { hi } else { lo };
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(VertexColoring(f))
}

pub const COLORING_CAP: usize = 40;

/// Visit every proper 4-coloring in a fixed order: vertices by degree
/// descending (ties by index), colors ascending.
pub fn for_each_4coloring(
    host: &PlaneGraph,
    mut visit: impl FnMut(&VertexColoring) -> bool,
) -> Result<u64, ColoringError> {
    let n = host.n();
    if n > COLORING_CAP {
        return Err(ColoringError::CapExceeded { n, cap: COLORING_CAP });
    }
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(host.degree(v)), v));
    let mut f = VertexColoring(vec![0u8; n]);
    let mut count = 0u64;
    let mut stop = false;
    fn go(
        host: &PlaneGraph,
        order: &[Vertex],
        i: usize,
        f: &mut VertexColoring,
        count: &mut u64,
        stop: &mut bool,
        visit: &mut dyn FnMut(&VertexColoring) -> bool,
    ) {
        if *stop {
            return;
        }
        if i == order.len() {
            *count += 1;
            if !visit(f) {
                *stop = true;
            }
            return;
        }
        let v = order[i];
        for c in 1..=4u8 {
            if host.rotation(v).iter().any(|&w| f.0[w] == c) {
                continue;
            }
            f.0[v] = c;
            go(host, order, i + 1, f, count, stop, visit);
            f.0[v] = 0;
        }
    }
    go(host, &order, 0, &mut f, &mut count, &mut stop, &mut visit);
    Ok(count)
}

pub fn enumerate_4colorings(host: &PlaneGraph) -> Result<(u64, Vec<VertexColoring>), ColoringError> {
    let mut all = Vec::new();
    let count = for_each_4coloring(host, |f| {
        all.push(f.clone());
        true
    })?;
    Ok((count, all))
}

pub fn count_4colorings(host: &PlaneGraph) -> Result<u64, ColoringError> {
    for_each_4coloring(host, |_| true)
}

/// All six permutations of (r, g, b), identity first.
pub const PERMUTATIONS: [[EdgeColor; 3]; 6] = [
    [Red, Green, Blue],
    [Red, Blue, Green],
    [Green, Red, Blue],
    [Green, Blue, Red],
    [Blue, Red, Green],
    [Blue, Green, Red],
];

/// The orbit of `t` under the six permutations of red, green and blue.
pub fn synonyms(t: &EdgeColoring) -> [EdgeColoring; 6] {
    PERMUTATIONS.map(|p| t.permuted(&p))
}

pub fn canonical_synonym(t: &EdgeColoring) -> EdgeColoring {
    synonyms(t).into_iter().min().unwrap()
}

pub fn orbit_size(t: &EdgeColoring) -> usize {
    let mut all = synonyms(t).to_vec();
    all.sort();
    all.dedup();
    all.len()
}
