use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{self, EdgeColor, EdgeColoring, VertexColoring, Yellow, RGB};
use crate::planar::{EdgeId, PlaneGraph, Vertex};
use crate::tiling::{self, TilingMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KempeError {
    #[error("no unique canal exit in triangle {face:?}")]
    AmbiguousTrace { face: [Vertex; 3], partial: Vec<Crossing> },
    #[error("canal starting in triangle {0:?} has no {1} edge")]
    BadStart([Vertex; 3], EdgeColor),
    #[error("ring is not closed")]
    OpenRing,
    #[error("ring does not match the tiling: {0}")]
    StaleRing(String),
    #[error("switching along the ring breaks the tiling at triangle {0:?}")]
    BrokenTiling([Vertex; 3]),
    #[error("seed vertex {0} is not colored by the chosen pair")]
    SeedNotInPair(Vertex),
    #[error("state space exceeds cap {0}")]
    CapExceeded(usize),
    #[error("ring descriptor: {0}")]
    Descriptor(String),
}

/// A monochrome path (or walk) between two vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub color: EdgeColor,
    pub from: Vertex,
    pub to: Vertex,
    pub path: Vec<Vertex>,
    pub length: usize,
    pub even: bool,
}

impl Chain {
    pub fn from_path(color: EdgeColor, path: Vec<Vertex>) -> Self {
        let length = path.len() - 1;
        Chain {
            color,
            from: path[0],
            to: *path.last().unwrap(),
            path,
            length,
            even: length.is_multiple_of(2),
        }
    }
}

/// Shortest path from u to v using only `color` edges.
pub fn chain(host: &PlaneGraph, t: &EdgeColoring, color: EdgeColor, u: Vertex, v: Vertex) -> Option<Chain> {
    let mut prev = vec![usize::MAX; host.n()];
    prev[u] = u;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        if x == v {
            let mut path = vec![v];
            let mut cur = v;
            while cur != u {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(Chain::from_path(color, path));
        }
        for &y in host.rotation(x) {
            if prev[y] == usize::MAX && t.get(host.edge_between(x, y).unwrap()) == color {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingKind {
    Normal,
    Generalized,
}

/// One step of a canal: leave triangle `face` through `edge`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Crossing {
    pub face: usize,
    pub edge: usize,
    pub kind: CrossingKind,
}

/// A canal line of color `c`. For a closed ring the last crossing leads back into
/// the first face; an open path also records the boundary edge it enters through.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanalRing {
    pub color: EdgeColor,
    pub crossings: Vec<Crossing>,
    pub closed: bool,
    pub entry: Option<usize>,
}

impl CanalRing {
    pub fn edges(&self) -> BTreeSet<usize> {
        self.crossings.iter().map(|c| c.edge).collect()
    }

    pub fn faces(&self) -> Vec<usize> {
        self.crossings.iter().map(|c| c.face).collect()
    }

    /// Identity of the ring independent of where tracing started.
    pub fn key(&self) -> (EdgeColor, Vec<usize>) {
        (self.color, self.edges().into_iter().collect())
    }

    pub fn to_descriptor(&self, host: &PlaneGraph) -> RingDescriptor {
        RingDescriptor {
            color: self.color,
            crossings: self
                .crossings
                .iter()
                .map(|c| CrossingDoc {
                    face: Some(host.triangles()[c.face].to_vec()),
                    edge: host.edge(c.edge),
                    kind: c.kind,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingDoc {
    pub face: Option<Vec<Vertex>>,
    pub edge: EdgeId,
    pub kind: CrossingKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub color: EdgeColor,
    pub crossings: Vec<CrossingDoc>,
}

impl RingDescriptor {
    /// Resolve against a host; every crossing must name a triangle of the host.
    pub fn resolve(&self, host: &PlaneGraph) -> Result<CanalRing, KempeError> {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let face = c
                    .face
                    .as_ref()
                    .ok_or_else(|| KempeError::Descriptor("crossing without a face".into()))?;
                if face.len() != 3 {
                    return Err(KempeError::Descriptor(format!("face {face:?} is not a triangle")));
                }
                let face = host
                    .find_triangle([face[0], face[1], face[2]])
                    .ok_or_else(|| KempeError::Descriptor(format!("no triangle {face:?}")))?;
                let edge = host
                    .edge_index(c.edge)
                    .ok_or_else(|| KempeError::Descriptor(format!("no edge {}", c.edge)))?;
                Ok(Crossing {
                    face,
                    edge,
                    kind: c.kind,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CanalRing {
            color: self.color,
            crossings,
            closed: true,
            entry: None,
        })
    }
}

fn other_triangle(host: &PlaneGraph, edge: usize, face: usize) -> Option<usize> {
    host.edge_triangles(edge).iter().copied().find(|&f| f != face)
}

/// Pick the exit of `face` entered through `entry` by a `c`-canal whose last
/// normal crossing had color `last`.
pub fn canal_exit(
    host: &PlaneGraph,
    t: &EdgeColoring,
    c: EdgeColor,
    face: usize,
    entry: usize,
    last: Option<EdgeColor>,
) -> Option<(usize, CrossingKind)> {
    let cands: Vec<usize> = host.triangle_edges(face).into_iter().filter(|&e| e != entry).collect();
    let normal: Vec<usize> = cands
        .iter()
        .copied()
        .filter(|&e| {
            let k = t.get(e);
            k.is_rgb() && k != c && Some(k) != last
        })
        .collect();
    if normal.len() == 1 {
        return Some((normal[0], CrossingKind::Normal));
    }
    if !normal.is_empty() {
        return None;
    }
    for want in [Yellow, c] {
        let hits: Vec<usize> = cands.iter().copied().filter(|&e| t.get(e) == want).collect();
        if hits.len() == 1 {
            return Some((hits[0], CrossingKind::Generalized));
        }
        if hits.len() > 1 {
            return None;
        }
    }
    None
}

fn normal_color(t: &EdgeColoring, cr: &Crossing) -> Option<EdgeColor> {
    (cr.kind == CrossingKind::Normal).then(|| t.get(cr.edge))
}

/// Follow the `color`-canal through `start` in both directions until it closes
/// or reaches an outer facet at both ends.
pub fn trace_canal(
    host: &PlaneGraph,
    t: &EdgeColoring,
    start: usize,
    color: EdgeColor,
) -> Result<CanalRing, KempeError> {
    let face_of = |f: usize| host.triangles()[f];
    let es = host.triangle_edges(start);
    let sides: Vec<usize> = es
        .iter()
        .copied()
        .filter(|&e| t.get(e).is_rgb() && t.get(e) != color)
        .collect();
    if sides.len() != 2 || t.get(sides[0]) == t.get(sides[1]) {
        return Err(KempeError::BadStart(face_of(start), color));
    }
    let (fwd, back) = if sides[0] < sides[1] {
        (sides[0], sides[1])
    } else {
        (sides[1], sides[0])
    };

    // walk from `start` leaving through `first`; returns crossings and whether we
    // came back into `start` through `closing`
    let walk = |first: usize, closing: usize| -> Result<(Vec<Crossing>, bool), KempeError> {
        let mut out = vec![Crossing {
            face: start,
            edge: first,
            kind: CrossingKind::Normal,
        }];
        let mut last = Some(t.get(first));
        let mut face = start;
        let mut edge = first;
        let mut seen = BTreeSet::from([(start, first)]);
        loop {
            let Some(next) = other_triangle(host, edge, face) else {
                return Ok((out, false));
            };
            if next == start {
                if edge == closing {
                    return Ok((out, true));
                }
                return Err(KempeError::AmbiguousTrace {
                    face: face_of(start),
                    partial: out,
                });
            }
            let Some((exit, kind)) = canal_exit(host, t, color, next, edge, last) else {
                return Err(KempeError::AmbiguousTrace {
                    face: face_of(next),
                    partial: out,
                });
            };
            if !seen.insert((next, exit)) {
                return Err(KempeError::AmbiguousTrace {
                    face: face_of(next),
                    partial: out,
                });
            }
            if kind == CrossingKind::Normal {
                last = Some(t.get(exit));
            }
            out.push(Crossing {
                face: next,
                edge: exit,
                kind,
            });
            face = next;
            edge = exit;
        }
    };

    let (forward, closed) = walk(fwd, back)?;
    if closed {
        return Ok(CanalRing {
            color,
            crossings: forward,
            closed: true,
            entry: None,
        });
    }
    let (backward, _) = walk(back, fwd)?;
    // backward runs start -> .. -> boundary through `back`; reverse it so the path
    // enters from the boundary and arrives at `start`
    let mut crossings = Vec::new();
    let mut entry = backward.last().map(|c| c.edge);
    for i in (1..backward.len()).rev() {
        crossings.push(Crossing {
            face: backward[i].face,
            edge: backward[i - 1].edge,
            kind: backward[i - 1].kind,
        });
    }
    if backward.len() == 1 {
        entry = Some(back);
    }
    crossings.extend(forward);
    Ok(CanalRing {
        color,
        crossings,
        closed: false,
        entry,
    })
}

/// Every canal of every color, deduplicated; closed rings first.
pub fn all_canals(host: &PlaneGraph, t: &EdgeColoring) -> Vec<CanalRing> {
    let mut seen = BTreeSet::new();
    let mut rings = Vec::new();
    let mut paths = Vec::new();
    for color in RGB {
        for face in 0..host.triangles().len() {
            if let Ok(r) = trace_canal(host, t, face, color) {
                if seen.insert(r.key()) {
                    if r.closed {
                        rings.push(r);
                    } else {
                        paths.push(r);
                    }
                }
            }
        }
    }
    rings.extend(paths);
    rings
}

pub fn closed_rings(host: &PlaneGraph, t: &EdgeColoring) -> Vec<CanalRing> {
    all_canals(host, t).into_iter().filter(|r| r.closed).collect()
}

fn crossing_kind(col: EdgeColor, c: EdgeColor) -> Option<CrossingKind> {
    if col.is_rgb() && col != c {
        Some(CrossingKind::Normal)
    } else if col == c || col == Yellow {
        Some(CrossingKind::Generalized)
    } else {
        None
    }
}

struct RingSearch<'a> {
    host: &'a PlaneGraph,
    t: &'a EdgeColoring,
    color: EdgeColor,
    max_len: usize,
    seen: BTreeSet<(EdgeColor, Vec<usize>)>,
    out: Vec<CanalRing>,
    /// Boundary edge an open path came in through.
    entered: Option<usize>,
}

impl RingSearch<'_> {
    /// Whether a canal may pass through `face` entering by `x` and leaving by `y`.
    fn passes(&self, face: usize, x: usize, y: usize) -> bool {
        let (c, t) = (self.color, self.t);
        let (Some(kx), Some(ky)) = (crossing_kind(t.get(x), c), crossing_kind(t.get(y), c)) else {
            return false;
        };
        if kx == CrossingKind::Normal && ky == CrossingKind::Normal && t.get(x) == t.get(y) {
            return false;
        }
        let cols = self.host.triangle_edges(face).map(|e| {
            if e == x {
                switched(t.get(e), c, kx)
            } else if e == y {
                switched(t.get(e), c, ky)
            } else {
                t.get(e)
            }
        });
        tiling::triangle_ok(TilingMode::Ergb, cols)
    }

    fn record(&mut self, ring: CanalRing) {
        let mut edges: Vec<usize> = ring.edges().into_iter().collect();
        edges.extend(ring.entry);
        edges.sort_unstable();
        if self.seen.insert((ring.color, edges)) {
            self.out.push(ring);
        }
    }

    fn walk(
        &mut self,
        start: usize,
        face: usize,
        entry: usize,
        path: &mut Vec<Crossing>,
        used: &mut Vec<bool>,
        open: bool,
    ) {
        if path.len() >= self.max_len {
            return;
        }
        for y in self.host.triangle_edges(face) {
            if y == entry || !self.passes(face, entry, y) {
                continue;
            }
            let kind = crossing_kind(self.t.get(y), self.color).unwrap();
            path.push(Crossing { face, edge: y, kind });
            match other_triangle(self.host, y, face) {
                None if open => {
                    let ring = CanalRing {
                        color: self.color,
                        crossings: path.clone(),
                        closed: false,
                        entry: self.entered,
                    };
                    self.record(ring);
                }
                Some(next) if !open && next == start => {
                    if self.passes(start, y, path[0].edge) {
                        let ring = CanalRing {
                            color: self.color,
                            crossings: path.clone(),
                            closed: true,
                            entry: None,
                        };
                        self.record(ring);
                    }
                }
                Some(next) if !used[next] && (open || next > start) => {
                    used[next] = true;
                    self.walk(start, next, y, path, used, open);
                    used[next] = false;
                }
                _ => {}
            }
            path.pop();
        }
    }
}

/// Every simple `color`-canal of at most `max_len` crossings whose switch keeps each
/// triangle locally valid, including generalized crossings that the tracer cannot
/// decide. Closed rings come first, then paths joining two boundary edges.
pub fn enumerate_canals(host: &PlaneGraph, t: &EdgeColoring, color: EdgeColor, max_len: usize) -> Vec<CanalRing> {
    let mut search = RingSearch {
        host,
        t,
        color,
        max_len,
        seen: BTreeSet::new(),
        out: Vec::new(),
        entered: None,
    };
    let nf = host.triangles().len();
    let mut used = vec![false; nf];
    for start in 0..nf {
        for first in host.triangle_edges(start) {
            // the closing edge is checked on return, so the entry here is a placeholder
            let Some(kind) = crossing_kind(t.get(first), color) else {
                continue;
            };
            let Some(next) = other_triangle(host, first, start) else {
                continue;
            };
            if next <= start {
                continue;
            }
            used[start] = true;
            used[next] = true;
            let mut path = vec![Crossing {
                face: start,
                edge: first,
                kind,
            }];
            search.walk(start, next, first, &mut path, &mut used, false);
            used[next] = false;
            used[start] = false;
        }
    }
    let closed = search.out.len();
    for b in 0..host.edge_count() {
        let tris = host.edge_triangles(b);
        if tris.len() != 1 || crossing_kind(t.get(b), color).is_none() {
            continue;
        }
        used[tris[0]] = true;
        search.entered = Some(b);
        search.walk(usize::MAX, tris[0], b, &mut Vec::new(), &mut used, true);
        used[tris[0]] = false;
    }
    search.out[closed..].sort_by_key(|r| r.crossings.len());
    search.out
}

fn switched(c: EdgeColor, ring_color: EdgeColor, kind: CrossingKind) -> EdgeColor {
    match kind {
        CrossingKind::Normal => {
            let others: Vec<EdgeColor> = RGB.iter().copied().filter(|&k| k != ring_color).collect();
            if c == others[0] {
                others[1]
            } else {
                others[0]
            }
        }
        CrossingKind::Generalized => {
            if c == Yellow {
                ring_color
            } else {
                Yellow
            }
        }
    }
}

/// Check that `ring` is a closed canal consistent with `t`.
pub fn validate_ring(host: &PlaneGraph, t: &EdgeColoring, ring: &CanalRing) -> Result<(), KempeError> {
    if !ring.closed || ring.crossings.is_empty() {
        return Err(KempeError::OpenRing);
    }
    let c = ring.color;
    let k = ring.crossings.len();
    let mut crossed = BTreeSet::new();
    for i in 0..k {
        let cur = ring.crossings[i];
        let prev = ring.crossings[(i + k - 1) % k];
        let next = ring.crossings[(i + 1) % k];
        let es = host.triangle_edges(cur.face);
        if !es.contains(&cur.edge) || !es.contains(&prev.edge) || cur.edge == prev.edge {
            return Err(KempeError::StaleRing(format!(
                "crossing {i} does not pass through its triangle"
            )));
        }
        if other_triangle(host, cur.edge, cur.face) != Some(next.face) {
            return Err(KempeError::StaleRing(format!(
                "crossing {i} does not lead into the next triangle"
            )));
        }
        if !crossed.insert(cur.edge) {
            return Err(KempeError::StaleRing(format!(
                "edge {} crossed twice",
                host.edge(cur.edge)
            )));
        }
        let col = t.get(cur.edge);
        let ok = match cur.kind {
            CrossingKind::Normal => col.is_rgb() && col != c,
            CrossingKind::Generalized => col == c || col == Yellow,
        };
        if !ok {
            return Err(KempeError::StaleRing(format!(
                "edge {} has color {col}, not a {:?} crossing",
                host.edge(cur.edge),
                cur.kind
            )));
        }
        if let (Some(a), Some(b)) = (normal_color(t, &prev), normal_color(t, &cur)) {
            if a == b {
                return Err(KempeError::StaleRing(format!(
                    "crossings {} and {i} do not alternate",
                    (i + k - 1) % k
                )));
            }
        }
    }
    Ok(())
}

/// Edge-color switching along a closed ring.
pub fn apply_ecs(host: &PlaneGraph, t: &EdgeColoring, ring: &CanalRing) -> Result<EdgeColoring, KempeError> {
    validate_ring(host, t, ring)?;
    let mut out = t.clone();
    for cr in &ring.crossings {
        out.set(cr.edge, switched(t.get(cr.edge), ring.color, cr.kind));
    }
    let mode = if out.0.contains(&Yellow) || t.0.contains(&Yellow) {
        TilingMode::Ergb
    } else {
        TilingMode::Rgb
    };
    let verdict = tiling::check_local(host, &out, mode);
    if let Some(v) = verdict.triangles.first() {
        return Err(KempeError::BrokenTiling(v.triangle));
    }
    Ok(out)
}

/// Swap colors x and y on the {x, y}-component of `seed`.
pub fn apply_vcs(
    host: &PlaneGraph,
    vc: &VertexColoring,
    pair: (u8, u8),
    seed: Vertex,
) -> Result<VertexColoring, KempeError> {
    let (x, y) = pair;
    let in_pair = |c: u8| c == x || c == y;
    if !in_pair(vc.0[seed]) {
        return Err(KempeError::SeedNotInPair(seed));
    }
    let mut out = vc.clone();
    let mut seen = vec![false; host.n()];
    seen[seed] = true;
    let mut stack = vec![seed];
    while let Some(u) = stack.pop() {
        out.0[u] = if vc.0[u] == x { y } else { x };
        for &w in host.rotation(u) {
            if !seen[w] && in_pair(vc.0[w]) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Skeleton {
    /// Colors of the boundary edges, in cycle order.
    pub boundary: Vec<(EdgeId, EdgeColor)>,
    /// For red, green and blue: blocks of boundary vertices joined by that color.
    pub partitions: [Vec<Vec<Vertex>>; 3],
}

pub fn components(host: &PlaneGraph, t: &EdgeColoring, color: EdgeColor) -> Vec<usize> {
    let mut comp = vec![usize::MAX; host.n()];
    let mut next = 0;
    for s in 0..host.n() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in host.rotation(u) {
                if comp[w] == usize::MAX && t.get(host.edge_between(u, w).unwrap()) == color {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

pub fn skeleton(q: &PlaneGraph, t: &EdgeColoring, omega: &[Vertex]) -> Skeleton {
    let k = omega.len();
    let boundary = (0..k)
        .filter_map(|i| {
            let e = EdgeId::new(omega[i], omega[(i + 1) % k]);
            q.edge_index(e).map(|j| (e, t.get(j)))
        })
        .collect();
    let partitions = RGB.map(|c| {
        let comp = components(q, t, c);
        let mut blocks: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
        for &v in omega {
            blocks.entry(comp[v]).or_default().push(v);
        }
        let mut out: Vec<Vec<Vertex>> = blocks
            .into_values()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        out.sort();
        out
    });
    Skeleton { boundary, partitions }
}

fn permute_skeleton(s: &Skeleton, perm: &[EdgeColor; 3]) -> Skeleton {
    let mut partitions: [Vec<Vec<Vertex>>; 3] = Default::default();
    for i in 0..3 {
        partitions[perm[i].rgb_index().unwrap()] = s.partitions[i].clone();
    }
    Skeleton {
        boundary: s
            .boundary
            .iter()
            .map(|&(e, c)| (e, c.rgb_index().map_or(c, |i| perm[i])))
            .collect(),
        partitions,
    }
}

/// Same skeleton up to a global permutation of red, green and blue.
pub fn equivalent(q: &PlaneGraph, t1: &EdgeColoring, t2: &EdgeColoring, omega: &[Vertex]) -> bool {
    let s1 = skeleton(q, t1, omega);
    let s2 = skeleton(q, t2, omega);
    coloring::PERMUTATIONS.iter().any(|p| permute_skeleton(&s2, p) == s1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Moves {
    pub ecs: bool,
    pub vcs: bool,
}

impl Moves {
    pub const ALL: Moves = Moves { ecs: true, vcs: true };
}

/// Tilings reachable from `t` in one move, before synonym normalization.
pub fn neighbors(host: &PlaneGraph, t: &EdgeColoring, moves: Moves) -> Vec<EdgeColoring> {
    let mut out = Vec::new();
    if moves.ecs {
        for ring in closed_rings(host, t) {
            if let Ok(u) = apply_ecs(host, t, &ring) {
                out.push(u);
            }
        }
    }
    if moves.vcs && !t.0.contains(&Yellow) {
        for c in RGB {
            let comp = components(host, t, c);
            let mut seeds = BTreeMap::new();
            for (v, &k) in comp.iter().enumerate() {
                seeds.entry(k).or_insert(v);
            }
            for &seed in seeds.values() {
                out.push(tiling::flip_component(host, t, c, seed));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    /// Indices into the input list, one vector per class.
    pub classes: Vec<Vec<usize>>,
    /// Number of synonym classes visited by the closure.
    pub explored: usize,
}

pub const CONGRUENCE_CAP: usize = 200_000;

/// Partition `tilings` into classes connected by ECS/VCS moves, working on
/// canonical synonyms.
pub fn congruence_classes(
    host: &PlaneGraph,
    tilings: &[EdgeColoring],
    moves: Moves,
    cap: usize,
) -> Result<CongruenceReport, KempeError> {
    let mut class_of: HashMap<EdgeColoring, usize> = HashMap::new();
    let mut next_class = 0;
    for t in tilings {
        let start = coloring::canonical_synonym(t);
        if class_of.contains_key(&start) {
            continue;
        }
        if class_of.len() >= cap {
            return Err(KempeError::CapExceeded(cap));
        }
        let id = next_class;
        next_class += 1;
        class_of.insert(start.clone(), id);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for w in neighbors(host, &u, moves) {
                let w = coloring::canonical_synonym(&w);
                if !class_of.contains_key(&w) {
                    if class_of.len() >= cap {
                        return Err(KempeError::CapExceeded(cap));
                    }
                    class_of.insert(w.clone(), id);
                    queue.push_back(w);
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, t) in tilings.iter().enumerate() {
        classes
            .entry(class_of[&coloring::canonical_synonym(t)])
            .or_default()
            .push(i);
    }
    Ok(CongruenceReport {
        classes: classes.into_values().collect(),
        explored: class_of.len(),
    })
}
