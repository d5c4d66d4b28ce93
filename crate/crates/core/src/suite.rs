use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coloring::{self, EdgeColoring, PartialColoring, Red};
use crate::planar::{self, EdgeId, GraphDoc, PlanarError, PlaneGraph, StackedMode};
use crate::tiling::{self, DiamondKind, TilingMode};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite '{0}' (one-piece, equivalence, parity, induced-diamond)")]
    UnknownSuite(String),
    #[error("max-n {0} is outside 4..={cap}", cap = planar::EXHAUSTIVE_CAP)]
    MaxN(usize),
    #[error("corpus {path}: {source}")]
    Corpus { path: PathBuf, source: PlanarError },
    #[error("reading {0}: {1}")]
    Io(PathBuf, std::io::Error),
}

pub const SUITES: [&str; 4] = ["one-piece", "equivalence", "parity", "induced-diamond"];

#[derive(Clone, Debug, Serialize)]
pub struct CheckStatus {
    pub name: String,
    pub pass: bool,
    pub examined: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub check: String,
    pub graph: GraphDoc,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub max_n: usize,
    pub graphs: usize,
    pub tilings: usize,
    pub checks: Vec<CheckStatus>,
    pub failures: Vec<Failure>,
    pub warnings: Vec<String>,
    pub elapsed_ms: u128,
    pub pass: bool,
}

/// Stacked triangulations on 4..=max_n vertices plus every corpus graph with at most
/// max_n vertices. Missing corpus files only produce a warning.
pub fn corpus(max_n: usize, paths: &[PathBuf], warnings: &mut Vec<String>) -> Result<Vec<PlaneGraph>, SuiteError> {
    if !(4..=planar::EXHAUSTIVE_CAP).contains(&max_n) {
        return Err(SuiteError::MaxN(max_n));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 4..=max_n {
        let level = planar::generate_stacked(n, StackedMode::Exhaustive, 0).map_err(|source| SuiteError::Corpus {
            path: "<stacked>".into(),
            source,
        })?;
        for g in level {
            if seen.insert(planar::canonical_code(&g)) {
                out.push(g);
            }
        }
    }
    for path in paths {
        if !path.exists() {
            warnings.push(format!(
                "corpus {} not found, using generated graphs only",
                path.display()
            ));
            continue;
        }
        let bytes = std::fs::read(path).map_err(|e| SuiteError::Io(path.clone(), e))?;
        let graphs = planar::parse_planar_code(&bytes).map_err(|source| SuiteError::Corpus {
            path: path.clone(),
            source,
        })?;
        for g in graphs {
            if g.n() <= max_n && seen.insert(planar::canonical_code(&g)) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// `g` with vertex `v` deleted; the link of `v` becomes the outer facet.
pub fn delete_vertex(g: &PlaneGraph, v: usize) -> Result<PlaneGraph, PlanarError> {
    let id = |w: usize| if w > v { w - 1 } else { w };
    let faces: Vec<Vec<usize>> = g
        .triangles()
        .iter()
        .filter(|t| !t.contains(&v))
        .map(|t| t.iter().map(|&w| id(w)).collect())
        .collect();
    let hole: Vec<usize> = g.rotation(v).iter().map(|&w| id(w)).collect();
    PlaneGraph::from_faces(g.n() - 1, &faces, std::slice::from_ref(&hole)).or_else(|_| {
        let rev: Vec<usize> = hole.into_iter().rev().collect();
        PlaneGraph::from_faces(g.n() - 1, &faces, &[rev])
    })
}

/// Restrict a tiling of `m` to the edges of a subgraph `q`.
pub fn restrict(m: &PlaneGraph, t: &EdgeColoring, q: &PlaneGraph) -> EdgeColoring {
    EdgeColoring(
        q.edges()
            .iter()
            .map(|&e| t.get(m.edge_index(e).expect("subgraph edge")))
            .collect(),
    )
}

#[derive(Default)]
struct Tally {
    tilings: usize,
    examined: Vec<usize>,
    failures: Vec<(usize, String)>,
}

impl Tally {
    fn new(checks: usize) -> Self {
        Tally {
            tilings: 0,
            examined: vec![0; checks],
            failures: Vec::new(),
        }
    }

    fn check(&mut self, i: usize, ok: bool, detail: impl FnOnce() -> String) {
        self.examined[i] += 1;
        if !ok {
            self.failures.push((i, detail()));
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.tilings += other.tilings;
        for (a, b) in self.examined.iter_mut().zip(other.examined) {
            *a += b;
        }
        self.failures.extend(other.failures);
        self
    }
}

fn check_names(suite: &str) -> &'static [&'static str] {
    match suite {
        "one-piece" => &["mpg-grand", "semi-mpg-grand"],
        "equivalence" => &["coloring-iff-rgb-iff-r", "induced-proper"],
        "parity" => &["even-4gon-triples", "triangle-host-111"],
        _ => &["induced-c-or-d"],
    }
}

fn all_r_grand(g: &PlaneGraph, tally: &mut Tally, check: usize, what: &str) {
    let res = tiling::for_each_tiling(g, TilingMode::Mono(Red), &PartialColoring::empty(g), &mut |t| {
        tally.tilings += 1;
        let res = tiling::is_grand(g, t);
        tally.check(check, res.is_ok(), || {
            format!("{what}: R-tiling {} not grand: {:?}", t.letters(), res.err())
        });
        true
    });
    if let Err(e) = res {
        tally.check(check, false, || format!("{what}: {e}"));
    }
}

fn one_piece(g: &PlaneGraph) -> Tally {
    let mut tally = Tally::new(2);
    all_r_grand(g, &mut tally, 0, "M");
    for v in 0..g.n() {
        match delete_vertex(g, v) {
            Ok(h) => all_r_grand(&h, &mut tally, 1, &format!("M-{v}")),
            Err(e) => tally.check(1, false, || format!("M-{v}: {e}")),
        }
    }
    for &e in g.edges() {
        match planar::remove_edge(g, e) {
            Ok(q) => all_r_grand(&q, &mut tally, 1, &format!("M-{e}")),
            Err(err) => tally.check(1, false, || format!("M-{e}: {err}")),
        }
    }
    tally
}

fn equivalence(g: &PlaneGraph) -> Tally {
    let mut tally = Tally::new(2);
    let mut four = false;
    let colorable = coloring::for_each_4coloring(g, |_| {
        four = true;
        false
    });
    let empty = PartialColoring::empty(g);
    let mut rgb = false;
    let mut r_even = false;
    let res_rgb = tiling::for_each_tiling(g, TilingMode::Rgb, &empty, &mut |t| {
        rgb = true;
        tally.tilings += 1;
        let ok = coloring::induce_vertex_coloring(g, t).is_ok_and(|vc| coloring::is_proper(g, &vc));
        tally.check(1, ok, || {
            format!("RGB-tiling {} induces no proper coloring", t.letters())
        });
        true
    });
    let res_r = tiling::for_each_tiling(g, TilingMode::Mono(Red), &empty, &mut |t| {
        tally.tilings += 1;
        r_even = tiling::mono_odd_cycle(g, t, Red).is_none();
        !r_even
    });
    let ok = colorable.is_ok() && res_rgb.is_ok() && res_r.is_ok() && four == rgb && rgb == r_even;
    tally.check(0, ok, || {
        format!("4-coloring {four}, RGB-tiling {rgb}, R-tiling without red odd cycle {r_even}")
    });
    tally
}

fn parity(g: &PlaneGraph) -> Tally {
    let mut tally = Tally::new(2);
    for &e in g.edges() {
        let q = match planar::remove_edge(g, e) {
            Ok(q) => q,
            Err(err) => {
                tally.check(0, false, || format!("M-{e}: {err}"));
                continue;
            }
        };
        let res = tiling::for_each_tiling(&q, TilingMode::Rgb, &PartialColoring::empty(&q), &mut |t| {
            tally.tilings += 1;
            let sig = tiling::boundary_signature(&q, t, TilingMode::Rgb);
            let tr = sig.facets[0].triple;
            let even = tr.r.is_multiple_of(2) && tr.g.is_multiple_of(2) && tr.b.is_multiple_of(2);
            tally.check(0, even, || {
                format!(
                    "M-{e}: tiling {} has 4-gon triple ({},{},{})",
                    t.letters(),
                    tr.r,
                    tr.g,
                    tr.b
                )
            });
            true
        });
        if let Err(err) = res {
            tally.check(0, false, || format!("M-{e}: {err}"));
        }
    }
    tally
}

fn triangle_host(tally: &mut Tally) {
    let tri = planar::builtin::triangle();
    let all = tiling::all_tilings(&tri, TilingMode::Rgb).unwrap_or_default();
    tally.check(1, !all.is_empty(), || "triangle host has no RGB-tiling".into());
    for t in all {
        tally.tilings += 1;
        let tr = tiling::boundary_signature(&tri, &t, TilingMode::Rgb).facets[0].triple;
        tally.check(1, tr.sorted() == [1, 1, 1], || {
            format!("triangle host triple ({},{},{})", tr.r, tr.g, tr.b)
        });
    }
}

fn induced_diamond(g: &PlaneGraph) -> Tally {
    let mut tally = Tally::new(1);
    let mut tilings = BTreeSet::new();
    let res = coloring::for_each_4coloring(g, |vc| {
        if let Ok(t) = coloring::induce_edge_coloring(g, vc) {
            tilings.insert(coloring::canonical_synonym(&t));
        }
        true
    });
    if let Err(err) = res {
        tally.check(0, false, || err.to_string());
        return tally;
    }
    let minus: Vec<(EdgeId, PlaneGraph)> = g
        .edges()
        .iter()
        .filter_map(|&e| planar::remove_edge(g, e).ok().map(|q| (e, q)))
        .collect();
    for t in &tilings {
        tally.tilings += 1;
        for (e, q) in &minus {
            let tq = restrict(g, t, q);
            let kind = tiling::classify_diamond(q, &tq, *e).map(|v| v.kind);
            tally.check(0, matches!(kind, Ok(DiamondKind::C | DiamondKind::D)), || {
                format!("induced tiling {} on M-{e} classified {kind:?}", t.letters())
            });
        }
    }
    tally
}

pub fn run_suite(name: &str, max_n: usize, corpus_paths: &[PathBuf]) -> Result<SuiteReport, SuiteError> {
    let run: fn(&PlaneGraph) -> Tally = match name {
        "one-piece" => one_piece,
        "equivalence" => equivalence,
        "parity" => parity,
        "induced-diamond" => induced_diamond,
        _ => return Err(SuiteError::UnknownSuite(name.to_string())),
    };
    let start = Instant::now();
    let mut warnings = Vec::new();
    let graphs = corpus(max_n, corpus_paths, &mut warnings)?;
    let names = check_names(name);
    let per_graph: Vec<Tally> = graphs.par_iter().map(run).collect();
    let mut total = Tally::new(names.len());
    let mut failures = Vec::new();
    for (g, t) in graphs.iter().zip(per_graph) {
        failures.extend(t.failures.iter().map(|(i, d)| Failure {
            check: names[*i].to_string(),
            graph: g.to_doc(),
            detail: d.clone(),
        }));
        total = total.merge(Tally {
            failures: Vec::new(),
            ..t
        });
    }
    if name == "parity" {
        let mut tri = Tally::new(names.len());
        triangle_host(&mut tri);
        failures.extend(tri.failures.iter().map(|(i, d)| Failure {
            check: names[*i].to_string(),
            graph: planar::builtin::triangle().to_doc(),
            detail: d.clone(),
        }));
        total = total.merge(Tally {
            failures: Vec::new(),
            ..tri
        });
    }
    let checks = names
        .iter()
        .enumerate()
        .map(|(i, n)| CheckStatus {
            name: n.to_string(),
            pass: !failures.iter().any(|f| f.check == *n),
            examined: total.examined[i],
        })
        .collect();
    Ok(SuiteReport {
        suite: name.to_string(),
        max_n,
        graphs: graphs.len(),
        tilings: total.tilings,
        checks,
        pass: failures.is_empty(),
        failures,
        warnings,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

impl SuiteReport {
    pub fn render(&self) -> String {
        let mut s = format!(
            "suite {} (n <= {}): {} graphs, {} tilings, {} ms\n",
            self.suite, self.max_n, self.graphs, self.tilings, self.elapsed_ms
        );
        for w in &self.warnings {
            s += &format!("warning: {w}\n");
        }
        for c in &self.checks {
            s += &format!(
                "  {:<24} {} ({} checked)\n",
                c.name,
                if c.pass { "ok" } else { "FAILED" },
                c.examined
            );
        }
        for f in self.failures.iter().take(20) {
            s += &format!("  failure [{}] n={}: {}\n", f.check, f.graph.n, f.detail);
        }
        if self.failures.len() > 20 {
            s += &format!("  ... {} more failures\n", self.failures.len() - 20);
        }
        s += if self.pass { "PASS\n" } else { "FAIL\n" };
        s
    }
}
