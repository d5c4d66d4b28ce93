//! Acceptance run: one line per criterion, exit status 1 if any criterion fails.
//! A6 count mismatches are reported as SOFT-FAIL and do not fail the run.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rgbt::coloring::{self, Black, Blue, EdgeColoring, Green, PartialColoring, Red, RGB};
use rgbt::kempe;
use rgbt::planar::{self, builtin, PlaneGraph};
use rgbt::scenario::{self, StepStatus};
use rgbt::suite::{self, run_suite};
use rgbt::tiling::{self, TilingMode};

const MAX_N: usize = 9;
const A1_LIMIT: Duration = Duration::from_secs(1);
const SUITE_LIMIT: Duration = Duration::from_secs(600);
const A7_LIMIT: Duration = Duration::from_secs(1);
const ECS_TRIALS: usize = 1000;
const ATLAS_TRIPLES: [[usize; 3]; 3] = [[0, 0, 6], [0, 2, 4], [2, 2, 2]];
const ATLAS_PATTERNS: usize = 15;
const ATLAS_FORCING: usize = 8;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

enum Outcome {
    Pass(String),
    Fail(String),
    Soft(String),
}

fn verdict(ok: bool, msg: String) -> Outcome {
    if ok {
        Outcome::Pass(msg)
    } else {
        Outcome::Fail(msg)
    }
}

/// Non-stacked triangulations on 6..=9 vertices, written as a planar_code corpus.
fn flipped_corpus(dir: &std::path::Path) -> PathBuf {
    let graphs: Vec<PlaneGraph> = (0..80u64)
        .map(|s| planar::random_triangulation(6 + (s as usize % 4), 25, 1000 + s))
        .collect();
    let path = dir.join("flipped.pc");
    std::fs::write(&path, planar::write_planar_code(&graphs)).unwrap();
    path
}

fn a1() -> Outcome {
    let start = Instant::now();
    let k4 = builtin::k4();
    let r = tiling::all_tilings(&k4, TilingMode::Mono(Red)).unwrap();
    let rgb = tiling::all_tilings(&k4, TilingMode::Rgb).unwrap();
    let oracle_r = common::brute_tilings(&k4, &[Red, Black], common::one_red);
    let oracle_rgb = common::brute_tilings(&k4, &[Red, Green, Blue], common::rainbow);
    let orbits: BTreeSet<EdgeColoring> = rgb.iter().map(coloring::canonical_synonym).collect();
    let grand = r.iter().all(|t| tiling::is_grand(&k4, t).is_ok());
    let same =
        |a: &[EdgeColoring], b: &[EdgeColoring]| a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>();
    let took = start.elapsed();
    verdict(
        r.len() == 3 && rgb.len() == 6 && orbits.len() == 1 && grand && same(&r, &oracle_r) && same(&rgb, &oracle_rgb) && took < A1_LIMIT,
        format!(
            "K4: {} R-tilings (oracle {}), {} RGB-tilings (oracle {}) in {} synonym orbit, all grand {grand}, {took:.2?} < {A1_LIMIT:?}",
            r.len(),
            oracle_r.len(),
            rgb.len(),
            oracle_rgb.len(),
            orbits.len()
        ),
    )
}

fn suite_line(name: &str, corpus: &[PathBuf]) -> Outcome {
    match run_suite(name, MAX_N, corpus) {
        Ok(rep) => {
            let took = Duration::from_millis(rep.elapsed_ms as u64);
            let checks: Vec<String> = rep
                .checks
                .iter()
                .map(|c| format!("{} {}", c.name, c.examined))
                .collect();
            verdict(
                rep.pass && took < SUITE_LIMIT,
                format!(
                    "{name} suite, n <= {MAX_N}: {} graphs, {} tilings, {} failures [{}], {took:.1?} < {SUITE_LIMIT:?}",
                    rep.graphs,
                    rep.tilings,
                    rep.failures.len(),
                    checks.join(", ")
                ),
            )
        }
        Err(e) => Outcome::Fail(format!("{name} suite: {e}")),
    }
}

fn a6() -> Outcome {
    let sc = scenario::builtin("atlas_55").unwrap();
    let rep = match sc.atlas() {
        Ok(r) => r,
        Err(e) => return Outcome::Fail(format!("atlas: {e}")),
    };
    let triples_ok = rep.triples == ATLAS_TRIPLES;
    let msg = format!(
        "TD55 atlas: triples {:?} (want {:?}), {} patterns (want {ATLAS_PATTERNS}), {} forcing (want {ATLAS_FORCING})",
        rep.triples, ATLAS_TRIPLES, rep.patterns, rep.forcing
    );
    if !triples_ok {
        return Outcome::Fail(msg);
    }
    if rep.patterns != ATLAS_PATTERNS || rep.forcing != ATLAS_FORCING {
        let forcing: Vec<String> = rep
            .boundaries
            .iter()
            .filter(|b| !b.four_colorable && b.ergb_completions > 0)
            .map(|b| {
                format!(
                    "{} {:?} e.g. {}",
                    b.pattern,
                    b.triple,
                    b.exemplar.as_deref().unwrap_or("-")
                )
            })
            .collect();
        return Outcome::Soft(format!("{msg}; DISCREPANCY, forcing patterns: {}", forcing.join("; ")));
    }
    Outcome::Pass(msg)
}

fn a7() -> Outcome {
    let start = Instant::now();
    let sc = scenario::builtin("fig7_rotation").unwrap();
    let initial = sc.border_string(&sc.initial_state());
    let t = match sc.run_script() {
        Ok(t) => t,
        Err(e) => return Outcome::Fail(format!("fig7_rotation: {e}")),
    };
    let took = start.elapsed();
    let ecs: Vec<&scenario::StepRecord> = t.steps.iter().filter(|r| r.step == "apply_ecs").collect();
    let checks: Vec<&scenario::StepRecord> = t.steps.iter().filter(|r| r.step == "assert_boundary").collect();
    let mid_ok = ecs.len() == 10
        && checks.len() == 2
        && checks[0].status == StepStatus::Pass
        && checks[0].index > ecs[4].index
        && checks[0].index < ecs[5].index
        && checks[0].border == ecs[4].border;
    let end_ok =
        ecs.len() == 10 && ecs[9].border == initial && checks.last().is_some_and(|c| c.status == StepStatus::Pass);
    verdict(
        t.pass && mid_ok && end_ok && took < A7_LIMIT,
        format!(
            "fig7 rotation: {} ECS steps, borders {} -> {} (T_beta check {}) -> {}, transcript {}, {took:.2?} < {A7_LIMIT:?}",
            ecs.len(),
            initial,
            ecs.get(4).map_or("-", |r| r.border.as_str()),
            if mid_ok { "ok" } else { "failed" },
            ecs.last().map_or("-", |r| r.border.as_str()),
            if t.pass { "PASS" } else { "FAIL" }
        ),
    )
}

fn a8(corpus: &[PathBuf]) -> Outcome {
    let mut warnings = Vec::new();
    let graphs = suite::corpus(MAX_N, corpus, &mut warnings).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut tilings: Vec<Vec<EdgeColoring>> = vec![Vec::new(); graphs.len()];
    let mut failures = Vec::new();
    for trial in 0..ECS_TRIALS {
        let gi = rng.gen_range(0..graphs.len());
        let g = &graphs[gi];
        if tilings[gi].is_empty() {
            tiling::for_each_tiling(g, TilingMode::Rgb, &PartialColoring::empty(g), &mut |t| {
                tilings[gi].push(t.clone());
                tilings[gi].len() < 200
            })
            .unwrap();
        }
        let t = &tilings[gi][rng.gen_range(0..tilings[gi].len())];
        let face = rng.gen_range(0..g.triangles().len());
        let color = RGB[rng.gen_range(0..3)];
        let ring = match kempe::trace_canal(g, t, face, color) {
            Ok(r) if r.closed => r,
            other => {
                failures.push(format!("trial {trial}: trace gave {other:?}"));
                continue;
            }
        };
        let once = match kempe::apply_ecs(g, t, &ring) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("trial {trial}: {e}"));
                continue;
            }
        };
        let on = ring.edges();
        let off_ok = (0..g.edge_count()).all(|e| on.contains(&e) || once.get(e) == t.get(e));
        let valid = tiling::is_valid(g, &once, TilingMode::Rgb);
        let back = kempe::apply_ecs(g, &once, &ring).ok();
        if !(off_ok && valid && back.as_ref() == Some(t)) {
            failures.push(format!(
                "trial {trial}: off-ring {off_ok}, valid {valid}, involution {}",
                back.as_ref() == Some(t)
            ));
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "ECS on {ECS_TRIALS} random (graph, tiling, traced ring) triples over {} graphs: {} failures{}",
            graphs.len(),
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

fn a9() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["c2c3", "perp_angle", "angle", "triangle_delta", "fig11_4deg5"] {
        let pass = scenario::builtin(name).and_then(|sc| sc.run_script()).map(|t| t.pass);
        ok &= pass == Ok(true);
        parts.push(format!("{name} {}", if pass == Ok(true) { "PASS" } else { "FAIL" }));
    }
    verdict(ok, format!("scenario conclusions: {}", parts.join(", ")))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().unwrap();
    let mut corpus = vec![flipped_corpus(dir.path())];
    if let Some(extra) = std::env::var_os("RGBT_CORPUS") {
        corpus.push(PathBuf::from(extra));
    }

    let criteria: Vec<Criterion> = vec![
        ("A1", Box::new(a1)),
        ("A2", Box::new(|| suite_line("one-piece", &corpus))),
        ("A3", Box::new(|| suite_line("equivalence", &corpus))),
        ("A4", Box::new(|| suite_line("parity", &corpus))),
        ("A5", Box::new(|| suite_line("induced-diamond", &corpus))),
        ("A6", Box::new(a6)),
        ("A7", Box::new(a7)),
        ("A8", Box::new(|| a8(&corpus))),
        ("A9", Box::new(a9)),
    ];
    let mut failed = 0;
    for (id, run) in &criteria {
        match run() {
            Outcome::Pass(m) => println!("{id} PASS      {m}"),
            Outcome::Soft(m) => println!("{id} SOFT-FAIL {m}"),
            Outcome::Fail(m) => {
                failed += 1;
                println!("{id} FAIL      {m}");
            }
        }
    }
    println!("acceptance: {} of {} criteria failed", failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
