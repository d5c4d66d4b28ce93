use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Black, Blue, EdgeColor, EdgeColoring, Green, PartialColoring, Red, Yellow, RGB};
use crate::kempe::Chain;
use crate::planar::{self, EdgeId, PlaneGraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("{free} free edges exceed the enumeration cap {cap}")]
    CapExceeded { free: usize, cap: usize },
    #[error("edge {0} is still present")]
    EdgePresent(EdgeId),
    #[error("no 4-gon outer facet has {0} as a diagonal")]
    NoDiamond(EdgeId),
    #[error("unknown tiling mode '{0}'")]
    UnknownMode(String),
    #[error("coloring has {got} entries for {want} edges")]
    LengthMismatch { got: usize, want: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TilingMode {
    /// One tile color plus black; `Mono(Red)` is the R-tiling.
    Mono(EdgeColor),
    Rgb,
    Ergb,
}

impl TilingMode {
    pub const R: TilingMode = TilingMode::Mono(Red);

    pub fn palette(self) -> Vec<EdgeColor> {
        match self {
            TilingMode::Mono(c) => vec![c, Black],
            TilingMode::Rgb => RGB.to_vec(),
            TilingMode::Ergb => vec![Red, Green, Blue, Yellow],
        }
    }
}

impl fmt::Display for TilingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TilingMode::Mono(c) => write!(f, "{c}"),
            TilingMode::Rgb => write!(f, "rgb"),
            TilingMode::Ergb => write!(f, "ergb"),
        }
    }
}

impl FromStr for TilingMode {
    type Err = TilingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "r" => Ok(TilingMode::Mono(Red)),
            "g" => Ok(TilingMode::Mono(Green)),
            "b" => Ok(TilingMode::Mono(Blue)),
            "rgb" => Ok(TilingMode::Rgb),
            "ergb" => Ok(TilingMode::Ergb),
            _ => Err(TilingError::UnknownMode(s.to_string())),
        }
    }
}

impl Serialize for TilingMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TilingMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Union-find over vertices where every member carries a parity relative to its root.
#[derive(Clone, Debug)]
pub struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    pub fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
        }
    }

    pub fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, pp) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= pp;
        (root, self.parity[x])
    }

    /// Record that x and y differ by `odd`; false on contradiction.
    pub fn union(&mut self, x: usize, y: usize, odd: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == odd;
        }
        self.parent[rx] = ry;
        self.parity[rx] = px ^ py ^ odd;
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleViolation {
    pub triangle: [Vertex; 3],
    pub colors: [EdgeColor; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeViolation {
    pub edge: EdgeId,
    pub color: EdgeColor,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub triangles: Vec<TriangleViolation>,
    pub edges: Vec<EdgeViolation>,
}

pub fn triangle_ok(mode: TilingMode, c: [EdgeColor; 3]) -> bool {
    match mode {
        TilingMode::Mono(x) => c.iter().filter(|&&k| k == x).count() == 1 && c.iter().all(|&k| k == x || k == Black),
        TilingMode::Rgb => rainbow(c),
        TilingMode::Ergb => rainbow(c) || yellow_triangle(c),
    }
}

fn rainbow(c: [EdgeColor; 3]) -> bool {
    c.iter().all(|k| k.is_rgb()) && c[0] != c[1] && c[1] != c[2] && c[0] != c[2]
}

/// Exactly one yellow edge, the other two share an rgb color.
fn yellow_triangle(c: [EdgeColor; 3]) -> bool {
    let ys = c.iter().filter(|&&k| k == Yellow).count();
    if ys != 1 {
        return false;
    }
    let rest: Vec<EdgeColor> = c.iter().copied().filter(|&k| k != Yellow).collect();
    rest[0].is_rgb() && rest[0] == rest[1]
}

pub fn triangle_colors(host: &PlaneGraph, t: &EdgeColoring, tri: usize) -> [EdgeColor; 3] {
    host.triangle_edges(tri).map(|e| t.get(e))
}

/// Check `t` against the rules of `mode`. In ERGB mode every yellow diamond must be
/// Type A or B with blocking chains found inside the host.
pub fn check_tiling(host: &PlaneGraph, t: &EdgeColoring, mode: TilingMode) -> Verdict {
    let mut verdict = check_local(host, t, mode);
    if mode == TilingMode::Ergb && verdict.edges.is_empty() {
        for (i, &c) in t.0.iter().enumerate() {
            if c != Yellow {
                continue;
            }
            let d = Diamond::around(host, host.edge(i)).expect("yellow edge has two triangles");
            let surround = d.surround_colors(t);
            let ok = match yellow_requirement(surround) {
                Some(required) => required.iter().all(|&x| even_walk(host, t, x, d.a, d.b, &[]).is_some()),
                None => false,
            };
            if !ok {
                verdict.edges.push(EdgeViolation {
                    edge: host.edge(i),
                    color: Yellow,
                    reason: "yellow diamond is neither Type A nor Type B".into(),
                });
            }
        }
        verdict.valid = verdict.triangles.is_empty() && verdict.edges.is_empty();
    }
    verdict
}

/// Triangle and palette rules only, without the yellow-diamond chain requirement.
pub fn check_local(host: &PlaneGraph, t: &EdgeColoring, mode: TilingMode) -> Verdict {
    let palette = mode.palette();
    let mut edges = Vec::new();
    if t.len() != host.edge_count() {
        edges.push(EdgeViolation {
            edge: EdgeId::new(0, 0),
            color: Black,
            reason: format!("coloring has {} entries for {} edges", t.len(), host.edge_count()),
        });
        return Verdict {
            valid: false,
            triangles: vec![],
            edges,
        };
    }
    for (i, &c) in t.0.iter().enumerate() {
        if !palette.contains(&c) {
            edges.push(EdgeViolation {
                edge: host.edge(i),
                color: c,
                reason: format!("color not allowed in {mode} mode"),
            });
        } else if c == Yellow && host.edge_triangles(i).len() != 2 {
            edges.push(EdgeViolation {
                edge: host.edge(i),
                color: c,
                reason: "yellow on an outer facet edge".into(),
            });
        }
    }
    let triangles: Vec<TriangleViolation> = (0..host.triangles().len())
        .filter_map(|k| {
            let colors = triangle_colors(host, t, k);
            (!triangle_ok(mode, colors)).then(|| TriangleViolation {
                triangle: host.triangles()[k],
                colors,
            })
        })
        .collect();
    Verdict {
        valid: triangles.is_empty() && edges.is_empty(),
        triangles,
        edges,
    }
}

pub fn is_valid(host: &PlaneGraph, t: &EdgeColoring, mode: TilingMode) -> bool {
    check_tiling(host, t, mode).valid
}

pub const TILING_CAP: usize = 40;

/// Visit every tiling extending `fixed`, honoring only the per-triangle rules.
/// Triangles are filled in canonical order, colors tried in the order r < g < b < k < Y.
pub fn for_each_local_tiling(
    host: &PlaneGraph,
    mode: TilingMode,
    fixed: &PartialColoring,
    cap: usize,
    visit: &mut dyn FnMut(&EdgeColoring) -> bool,
) -> Result<u64, TilingError> {
    let m = host.edge_count();
    if fixed.0.len() != m {
        return Err(TilingError::LengthMismatch {
            got: fixed.0.len(),
            want: m,
        });
    }
    let free = fixed.0.iter().filter(|c| c.is_none()).count();
    if free > cap {
        return Err(TilingError::CapExceeded { free, cap });
    }
    let palette = mode.palette();
    let tri_edges: Vec<[usize; 3]> = (0..host.triangles().len()).map(|k| host.triangle_edges(k)).collect();
    let loose: Vec<usize> = (0..m).filter(|&e| host.edge_triangles(e).is_empty()).collect();

    struct Search<'a> {
        host: &'a PlaneGraph,
        mode: TilingMode,
        palette: Vec<EdgeColor>,
        tri_edges: Vec<[usize; 3]>,
        loose: Vec<usize>,
        cur: Vec<Option<EdgeColor>>,
        count: u64,
        stop: bool,
    }

    impl Search<'_> {
        fn allowed(&self, e: usize, c: EdgeColor) -> bool {
            c != Yellow || self.host.edge_triangles(e).len() == 2
        }

        fn tri(&mut self, k: usize, visit: &mut dyn FnMut(&EdgeColoring) -> bool) {
            if self.stop {
                return;
            }
            if k == self.tri_edges.len() {
                self.loose_edge(0, visit);
                return;
            }
            let es = self.tri_edges[k];
            let open: Vec<usize> = es.iter().copied().filter(|&e| self.cur[e].is_none()).collect();
            self.fill(k, &es, &open, 0, visit);
        }

        fn fill(
            &mut self,
            k: usize,
            es: &[usize; 3],
            open: &[usize],
            j: usize,
            visit: &mut dyn FnMut(&EdgeColoring) -> bool,
        ) {
            if self.stop {
                return;
            }
            if j == open.len() {
                let colors = es.map(|e| self.cur[e].unwrap());
                if triangle_ok(self.mode, colors) {
                    self.tri(k + 1, visit);
                }
                return;
            }
            let e = open[j];
            for ci in 0..self.palette.len() {
                let c = self.palette[ci];
                if !self.allowed(e, c) {
                    continue;
                }
                self.cur[e] = Some(c);
                self.fill(k, es, open, j + 1, visit);
                self.cur[e] = None;
            }
        }

        fn loose_edge(&mut self, j: usize, visit: &mut dyn FnMut(&EdgeColoring) -> bool) {
            if self.stop {
                return;
            }
            if j == self.loose.len() {
                let t = EdgeColoring(self.cur.iter().map(|c| c.unwrap()).collect());
                self.count += 1;
                if !visit(&t) {
                    self.stop = true;
                }
                return;
            }
            let e = self.loose[j];
            if self.cur[e].is_some() {
                self.loose_edge(j + 1, visit);
                return;
            }
            for ci in 0..self.palette.len() {
                let c = self.palette[ci];
                if c == Yellow {
                    continue;
                }
                self.cur[e] = Some(c);
                self.loose_edge(j + 1, visit);
                self.cur[e] = None;
            }
        }
    }

    let mut s = Search {
        host,
        mode,
        palette,
        tri_edges,
        loose,
        cur: fixed.0.clone(),
        count: 0,
        stop: false,
    };
    s.tri(0, visit);
    Ok(s.count)
}

/// Visit every valid tiling extending `fixed` (ERGB tilings are also checked for
/// Type A/B yellow diamonds).
pub fn for_each_tiling(
    host: &PlaneGraph,
    mode: TilingMode,
    fixed: &PartialColoring,
    visit: &mut dyn FnMut(&EdgeColoring) -> bool,
) -> Result<u64, TilingError> {
    let mut count = 0;
    for_each_local_tiling(host, mode, fixed, TILING_CAP, &mut |t| {
        if mode == TilingMode::Ergb && !check_tiling(host, t, mode).valid {
            return true;
        }
        count += 1;
        visit(t)
    })?;
    Ok(count)
}

pub fn enumerate_tilings(
    host: &PlaneGraph,
    mode: TilingMode,
    fixed: &PartialColoring,
) -> Result<Vec<EdgeColoring>, TilingError> {
    let mut out = Vec::new();
    for_each_tiling(host, mode, fixed, &mut |t| {
        out.push(t.clone());
        true
    })?;
    Ok(out)
}

pub fn all_tilings(host: &PlaneGraph, mode: TilingMode) -> Result<Vec<EdgeColoring>, TilingError> {
    enumerate_tilings(host, mode, &PartialColoring::empty(host))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrandWitness {
    pub v13: BTreeSet<Vertex>,
    pub v24: BTreeSet<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotGrand {
    /// The edge whose color contradicts the parity forced by the others.
    pub clash: EdgeId,
    pub color: EdgeColor,
}

/// Grandness of the R-tiling seen from `tile` (edges of that color stay inside a part,
/// all other non-yellow edges cross).
pub fn is_grand_in(host: &PlaneGraph, t: &EdgeColoring, tile: EdgeColor) -> Result<GrandWitness, NotGrand> {
    let mut uf = ParityUnionFind::new(host.n());
    for (i, e) in host.edges().iter().enumerate() {
        let c = t.get(i);
        if c == Yellow {
            continue;
        }
        if !uf.union(e.lo(), e.hi(), c != tile) {
            return Err(NotGrand { clash: *e, color: c });
        }
    }
    let mut v13 = BTreeSet::new();
    let mut v24 = BTreeSet::new();
    let (r0, p0) = uf.find(0);
    for v in 0..host.n() {
        let (r, p) = uf.find(v);
        if r == r0 && p == p0 {
            v13.insert(v);
        } else {
            v24.insert(v);
        }
    }
    Ok(GrandWitness { v13, v24 })
}

pub fn is_grand(host: &PlaneGraph, t: &EdgeColoring) -> Result<GrandWitness, NotGrand> {
    is_grand_in(host, t, Red)
}

/// An odd cycle made of `color` edges, if the color class is not bipartite.
pub fn mono_odd_cycle(host: &PlaneGraph, t: &EdgeColoring, color: EdgeColor) -> Option<Vec<Vertex>> {
    let n = host.n();
    let mut adj = vec![Vec::new(); n];
    for (i, e) in host.edges().iter().enumerate() {
        if t.get(i) == color {
            adj[e.lo()].push(e.hi());
            adj[e.hi()].push(e.lo());
        }
    }
    let mut depth = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        if depth[s] != usize::MAX {
            continue;
        }
        depth[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if depth[v] % 2 == depth[u] % 2 {
                    let (mut x, mut y) = (u, v);
                    let mut left = vec![x];
                    let mut right = vec![y];
                    while x != y {
                        if depth[x] >= depth[y] {
                            x = parent[x];
                            left.push(x);
                        } else {
                            y = parent[y];
                            right.push(y);
                        }
                    }
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    return Some(left);
                }
            }
        }
    }
    None
}

/// A walk of even length from `a` to `b` along `color` edges, if one exists.
/// Extra links `(u, v, odd)` stand for connections outside the host.
pub fn even_walk(
    host: &PlaneGraph,
    t: &EdgeColoring,
    color: EdgeColor,
    a: Vertex,
    b: Vertex,
    links: &[(Vertex, Vertex, bool)],
) -> Option<Chain> {
    let n = host.n();
    let mut adj: Vec<Vec<(Vertex, bool)>> = vec![Vec::new(); n];
    for (i, e) in host.edges().iter().enumerate() {
        if t.get(i) == color {
            adj[e.lo()].push((e.hi(), true));
            adj[e.hi()].push((e.lo(), true));
        }
    }
    for &(u, v, odd) in links {
        adj[u].push((v, odd));
        adj[v].push((u, odd));
    }
    let idx = |v: Vertex, p: bool| 2 * v + p as usize;
    let mut prev = vec![usize::MAX; 2 * n];
    let mut seen = vec![false; 2 * n];
    seen[idx(a, false)] = true;
    let mut queue = VecDeque::from([(a, false)]);
    while let Some((u, p)) = queue.pop_front() {
        if u == b && !p {
            let mut path = vec![b];
            let mut cur = idx(b, false);
            while cur != idx(a, false) {
                cur = prev[cur];
                path.push(cur / 2);
            }
            path.reverse();
            return Some(Chain::from_path(color, path));
        }
        for &(v, odd) in &adj[u] {
            let q = p ^ odd;
            if !seen[idx(v, q)] {
                seen[idx(v, q)] = true;
                prev[idx(v, q)] = idx(u, p);
                queue.push_back((v, q));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ColorTriple {
    pub r: usize,
    pub g: usize,
    pub b: usize,
}

impl ColorTriple {
    pub fn sorted(self) -> [usize; 3] {
        let mut s = [self.r, self.g, self.b];
        s.sort_unstable();
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetSignature {
    pub facet: Vec<Vertex>,
    pub triple: ColorTriple,
    pub black: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundarySignature {
    pub facets: Vec<FacetSignature>,
    pub pass: bool,
}

/// Color counts along the outer facets, with the parity verdict taken over all
/// facets together (shared edges counted twice).
pub fn boundary_signature(host: &PlaneGraph, t: &EdgeColoring, mode: TilingMode) -> BoundarySignature {
    let facets: Vec<FacetSignature> = host
        .outer_facets()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let es = host.facet_edges(i);
            let count = |c: EdgeColor| es.iter().filter(|&&e| t.get(e) == c).count();
            FacetSignature {
                facet: f.clone(),
                triple: ColorTriple {
                    r: count(Red),
                    g: count(Green),
                    b: count(Blue),
                },
                black: count(Black),
            }
        })
        .collect();
    let total = facets.iter().fold((0, 0, 0, 0, 0), |acc, f| {
        (
            acc.0 + f.triple.r,
            acc.1 + f.triple.g,
            acc.2 + f.triple.b,
            acc.3 + f.black,
            acc.4 + f.facet.len(),
        )
    });
    let pass = match mode {
        TilingMode::Mono(_) => total.3 % 2 == 0,
        TilingMode::Rgb | TilingMode::Ergb => {
            let want = total.4 % 2;
            total.0 % 2 == want && total.1 % 2 == want && total.2 % 2 == want
        }
    };
    BoundarySignature { facets, pass }
}

/// The four edges around a (present or removed) edge ab.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Diamond {
    pub a: Vertex,
    pub b: Vertex,
    pub north: Vertex,
    pub south: Vertex,
    /// Edge indices of aN, Nb, bS, Sa.
    pub surround: [usize; 4],
}

impl Diamond {
    /// Diamond of an edge present in `host` with triangles abN and baS.
    pub fn around(host: &PlaneGraph, e: EdgeId) -> Option<Diamond> {
        let i = host.edge_index(e)?;
        let (a, b) = e.ends();
        let ts = host.edge_triangles(i);
        if ts.len() != 2 {
            return None;
        }
        let mut north = None;
        let mut south = None;
        for &t in ts {
            let f = host.triangles()[t];
            let k = (0..3).find(|&k| f[k] == a).unwrap();
            if f[(k + 1) % 3] == b {
                north = Some(f[(k + 2) % 3]);
            } else {
                south = Some(f[(k + 1) % 3]);
            }
        }
        Diamond::build(host, a, b, north?, south?)
    }

    /// Diamond of a removed edge ab that is a diagonal of a 4-gon outer facet.
    pub fn across(q: &PlaneGraph, e: EdgeId) -> Option<Diamond> {
        let (a, b) = e.ends();
        for f in q.outer_facets() {
            if f.len() != 4 {
                continue;
            }
            let ia = f.iter().position(|&v| v == a)?;
            if f[(ia + 2) % 4] != b {
                continue;
            }
            // the hole is traced b N a S
            let south = f[(ia + 1) % 4];
            let north = f[(ia + 3) % 4];
            return Diamond::build(q, a, b, north, south);
        }
        None
    }

    fn build(host: &PlaneGraph, a: Vertex, b: Vertex, north: Vertex, south: Vertex) -> Option<Diamond> {
        let e = |x, y| host.edge_between(x, y);
        Some(Diamond {
            a,
            b,
            north,
            south,
            surround: [e(a, north)?, e(north, b)?, e(b, south)?, e(south, a)?],
        })
    }

    pub fn surround_colors(&self, t: &EdgeColoring) -> [EdgeColor; 4] {
        self.surround.map(|e| t.get(e))
    }
}

/// Colors whose chains a yellow edge needs: both others for a monochrome
/// surround (Type A), the third for paired north/south sides (Type B).
pub fn yellow_requirement(s: [EdgeColor; 4]) -> Option<Vec<EdgeColor>> {
    if !s.iter().all(|c| c.is_rgb()) || s[0] != s[1] || s[2] != s[3] {
        return None;
    }
    if s[0] == s[2] {
        Some(RGB.iter().copied().filter(|&c| c != s[0]).collect())
    } else {
        Some(vec![EdgeColor::third(s[0], s[2])])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiamondKind {
    A,
    B,
    C,
    D,
    NoCandidate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiamondVerdict {
    pub kind: DiamondKind,
    pub diamond: Diamond,
    pub surround: [EdgeColor; 4],
    pub candidates: Vec<EdgeColor>,
    /// Blocking chains (A and B).
    pub chains: Vec<Chain>,
    /// Color given to e in the extension (C and D).
    pub extension_color: Option<EdgeColor>,
    /// Extended RGB-tiling of the full host (C and D), in the host's edge order.
    pub extension: Option<EdgeColoring>,
}

/// Swap the two colors other than `x` on every edge with exactly one endpoint
/// in the `x`-component of `seed`.
pub fn flip_component(host: &PlaneGraph, t: &EdgeColoring, x: EdgeColor, seed: Vertex) -> EdgeColoring {
    let mut comp = vec![false; host.n()];
    comp[seed] = true;
    let mut stack = vec![seed];
    while let Some(u) = stack.pop() {
        for &v in host.rotation(u) {
            if !comp[v] && t.get(host.edge_between(u, v).unwrap()) == x {
                comp[v] = true;
                stack.push(v);
            }
        }
    }
    let others: Vec<EdgeColor> = RGB.iter().copied().filter(|&c| c != x).collect();
    let mut out = t.clone();
    for (i, e) in host.edges().iter().enumerate() {
        if comp[e.lo()] != comp[e.hi()] {
            let c = t.get(i);
            if c == others[0] {
                out.set(i, others[1]);
            } else if c == others[1] {
                out.set(i, others[0]);
            }
        }
    }
    out
}

fn lift(q: &PlaneGraph, m: &PlaneGraph, t: &EdgeColoring, e: EdgeId, c: EdgeColor) -> EdgeColoring {
    EdgeColoring(
        m.edges()
            .iter()
            .map(|&f| if f == e { c } else { t.get(q.edge_index(f).unwrap()) })
            .collect(),
    )
}

/// Classify the e-diamond of a tiling of Q = M - e.
///
/// Candidates are the rgb colors absent from the four surrounding edges. A candidate X
/// is blocked when an even X-walk joins a and b (coloring e by X would close an odd
/// X-cycle). Monochrome surround: A when both candidates are blocked, else C. Paired
/// north/south sides: B when the candidate is blocked, else D. Surrounds whose opposite
/// or a/b-side edges already match give the third color directly (D).
pub fn classify_diamond(q: &PlaneGraph, t: &EdgeColoring, e: EdgeId) -> Result<DiamondVerdict, TilingError> {
    if q.edge_index(e).is_some() {
        return Err(TilingError::EdgePresent(e));
    }
    let d = Diamond::across(q, e).ok_or(TilingError::NoDiamond(e))?;
    let m = planar::add_edge(q, e).map_err(|_| TilingError::NoDiamond(e))?;
    let s = d.surround_colors(t);
    let mut verdict = DiamondVerdict {
        kind: DiamondKind::NoCandidate,
        diamond: d,
        surround: s,
        candidates: Vec::new(),
        chains: Vec::new(),
        extension_color: None,
        extension: None,
    };
    if !s.iter().all(|c| c.is_rgb()) {
        return Ok(verdict);
    }
    let present: BTreeSet<EdgeColor> = s.iter().copied().collect();
    verdict.candidates = RGB.iter().copied().filter(|c| !present.contains(c)).collect();
    let direct = s[0] != s[1] && s[2] != s[3] && present.len() == 2;
    let paired = s[0] == s[1] && s[2] == s[3];
    if direct {
        let x = verdict.candidates[0];
        verdict.kind = DiamondKind::D;
        verdict.extension_color = Some(x);
        verdict.extension = Some(lift(q, &m, t, e, x));
        return Ok(verdict);
    }
    if !paired || verdict.candidates.is_empty() {
        return Ok(verdict);
    }
    let mut unblocked = None;
    for &x in &verdict.candidates {
        match even_walk(q, t, x, d.a, d.b, &[]) {
            Some(chain) => verdict.chains.push(chain),
            None => {
                if unblocked.is_none() {
                    unblocked = Some(x);
                }
            }
        }
    }
    let mono = verdict.candidates.len() == 2;
    match unblocked {
        None => verdict.kind = if mono { DiamondKind::A } else { DiamondKind::B },
        Some(x) => {
            verdict.kind = if mono { DiamondKind::C } else { DiamondKind::D };
            verdict.chains.clear();
            let flipped = flip_component(q, t, x, d.a);
            verdict.extension_color = Some(x);
            verdict.extension = Some(lift(q, &m, &flipped, e, x));
        }
    }
    Ok(verdict)
}

/// Colors that extend `t` over e directly, keeping the full host free of new
/// monochrome odd cycles.
pub fn extend_over_edge(q: &PlaneGraph, t: &EdgeColoring, e: EdgeId) -> Vec<EdgeColor> {
    let Ok(m) = planar::add_edge(q, e) else {
        return Vec::new();
    };
    RGB.iter()
        .copied()
        .filter(|&x| {
            let ext = lift(q, &m, t, e, x);
            check_tiling(&m, &ext, TilingMode::Rgb).valid && mono_odd_cycle(&m, &ext, x).is_none()
        })
        .collect()
}
