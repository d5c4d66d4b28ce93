mod common;

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rgbt::coloring::{Blue, EdgeColor, EdgeColoring, Green, PartialColoring, Red, Yellow, RGB};
use rgbt::planar::{self, PlaneGraph};
use rgbt::scenario::{
    builtin, builtin_doc, chain_parity, load_scenario, ChainParity, ScenarioDoc, ScenarioError, StepDoc, StepStatus,
    WalkDoc, BUILTINS,
};
use rgbt::tiling::TilingMode;

fn walk(color: EdgeColor, from: &str, to: &str, closing: &[&str]) -> WalkDoc {
    WalkDoc {
        color,
        from: from.into(),
        to: to.into(),
        closing: closing.iter().map(|s| s.to_string()).collect(),
    }
}

// Color of the edge between two vertex colors in 1..=4, written out from the Klein pairing.
fn pair_color(x: u8, y: u8) -> EdgeColor {
    match (x.min(y), x.max(y)) {
        (1, 3) | (2, 4) => Red,
        (1, 4) | (2, 3) => Green,
        (1, 2) | (3, 4) => Blue,
        _ => unreachable!(),
    }
}

#[test]
fn atlas_region_shape() {
    let sc = builtin("atlas_55").unwrap();
    assert_eq!(sc.sigma.n(), 8);
    assert_eq!(sc.sigma.edge_count(), 15);
    assert_eq!(sc.sigma.triangles().len(), 8);
    let omega: Vec<&str> = sc.omega.iter().map(|&v| sc.labels[v].as_str()).collect();
    assert_eq!(omega, ["v1", "v2", "c", "v4", "v5", "d"]);
}

#[test]
fn dumbbell_border() {
    let sc = builtin("dumbbell").unwrap();
    let omega: Vec<&str> = sc.omega.iter().map(|&v| sc.labels[v].as_str()).collect();
    assert_eq!(omega, ["d", "u1", "u2", "u3", "c", "u4", "u5", "u6"]);
    for v in ["a", "b", "v1", "v2", "v4", "v5"] {
        assert_eq!(sc.sigma.degree(sc.vertex(v).unwrap()), 5, "{v}");
    }
}

#[test]
fn every_builtin_loads() {
    for (name, _) in BUILTINS {
        let sc = builtin(name).unwrap();
        assert_eq!(&sc.name, name);
        assert!(sc.sigma.edge_count() > 0);
    }
    assert!(matches!(builtin("nope"), Err(ScenarioError::UnknownBuiltin(_))));
}

#[test]
fn yellow_border_edge_is_rejected() {
    let mut doc = builtin_doc("atlas_55").unwrap();
    doc.fixed.insert("v1-v2".into(), Yellow);
    assert!(matches!(
        load_scenario(&doc),
        Err(ScenarioError::InconsistentFixedColors(_))
    ));
}

#[test]
fn bichromatic_triangle_is_rejected() {
    let mut doc = builtin_doc("atlas_55").unwrap();
    for (e, c) in [("a-b", Red), ("a-c", Red), ("b-c", Green)] {
        doc.fixed.insert(e.into(), c);
    }
    assert!(matches!(
        load_scenario(&doc),
        Err(ScenarioError::InconsistentFixedColors(_))
    ));
}

#[test]
fn border_without_exterior_coloring_is_rejected() {
    let mut doc = builtin_doc("atlas_55").unwrap();
    // one red edge on a hexagon breaks the parity of the border
    for (e, c) in [
        ("v1-v2", Red),
        ("v2-c", Blue),
        ("c-v4", Blue),
        ("v4-v5", Blue),
        ("v5-d", Blue),
        ("d-v1", Blue),
    ] {
        doc.fixed.insert(e.into(), c);
    }
    assert!(matches!(
        load_scenario(&doc),
        Err(ScenarioError::InconsistentFixedColors(_))
    ));
}

#[test]
fn unknown_labels_are_reported() {
    let mut doc = builtin_doc("atlas_55").unwrap();
    doc.fixed.insert("a-zz".into(), Red);
    assert!(matches!(load_scenario(&doc), Err(ScenarioError::UnknownVertex(_))));
    let mut doc = builtin_doc("atlas_55").unwrap();
    doc.fixed.insert("v1-v4".into(), Red);
    assert!(matches!(load_scenario(&doc), Err(ScenarioError::UnknownEdge(_))));
}

fn all_blue_55() -> ScenarioDoc {
    let mut doc = builtin_doc("atlas_55").unwrap();
    for e in ["v1-v2", "v2-c", "c-v4", "v4-v5", "v5-d", "d-v1"] {
        doc.fixed.insert(e.into(), Blue);
    }
    doc
}

#[test]
fn over_constrained_region_has_no_retiling() {
    let mut doc = all_blue_55();
    // a-c blue meets the blue border edge c-v2 in triangle a c v2
    doc.fixed.insert("a-c".into(), Blue);
    let sc = load_scenario(&doc).unwrap();
    let st = sc.initial_state();
    let keep = [sc.edge_by_label("a-c").unwrap()];
    assert!(sc.sigma_adjust(&st, TilingMode::Rgb, &keep).unwrap().is_empty());
    assert!(sc.sigma_adjust(&st, TilingMode::Ergb, &keep).unwrap().is_empty());
    assert!(!sc.sigma_adjust(&st, TilingMode::Rgb, &[]).unwrap().is_empty());
}

#[test]
fn all_blue_hexagon_retilings() {
    let sc = load_scenario(&all_blue_55()).unwrap();
    let st = sc.initial_state();
    let rgb = sc.sigma_adjust(&st, TilingMode::Rgb, &[]).unwrap();
    assert_eq!(rgb.len(), 2);
    let ab = sc.edge_by_label("a-b").unwrap();
    let ergb = sc.sigma_adjust(&st, TilingMode::Ergb, &[]).unwrap();
    // a has no blue edge once ab is yellow, so its diamond cannot be blocked
    assert!(ergb.iter().all(|t| t.get(ab) != Yellow));
    for t in &rgb {
        assert!(rgbt::tiling::check_tiling(&sc.sigma, t, TilingMode::Rgb).valid);
    }
}

#[test]
fn retilings_are_sorted_and_keep_the_border() {
    let sc = builtin("five_cubed").unwrap();
    let mut st = sc.initial_state();
    let all = sc.sigma_adjust(&st, TilingMode::Ergb, &[]).unwrap();
    assert!(!all.is_empty());
    let letters: Vec<String> = all.iter().map(|t| t.letters()).collect();
    let mut sorted = letters.clone();
    sorted.sort();
    assert_eq!(letters, sorted);
    for t in &all {
        for &e in &sc.omega_edges {
            assert_eq!(Some(t.get(e)), st.colors.0[e]);
        }
        st.colors = PartialColoring::from(t);
        st.mode = TilingMode::Ergb;
        assert!(rgbt::tiling::check_local(&sc.sigma, t, TilingMode::Ergb)
            .triangles
            .is_empty());
    }
}

#[test]
fn parity_examples() {
    assert_eq!(chain_parity(Red, [0, 0, 2]), ChainParity::Even);
    assert_eq!(chain_parity(Red, [0, 1, 1]), ChainParity::Odd);
    assert_eq!(chain_parity(Red, [0, 2, 1]), ChainParity::Impossible);
    assert_eq!(chain_parity(Blue, [1, 1, 0]), ChainParity::Odd);
    assert_eq!(chain_parity(Green, [2, 0, 2]), ChainParity::Even);

    let sc = builtin("five_cubed").unwrap();
    let st = sc.initial_state();
    assert_eq!(
        sc.deduce_chain_parity(&st, &walk(Red, "v1", "v3", &["v3", "v2", "v1"]))
            .unwrap(),
        ChainParity::Even
    );

    let sc = builtin("fig7_rotation").unwrap();
    let st = sc.initial_state();
    // v2-v1 blue then v1-d red
    assert_eq!(
        sc.deduce_chain_parity(&st, &walk(Green, "d", "v2", &["v2", "v1", "d"]))
            .unwrap(),
        ChainParity::Odd
    );
    assert_eq!(
        sc.deduce_chain_parity(&st, &walk(Red, "d", "v2", &["v2", "v1", "d"]))
            .unwrap(),
        ChainParity::Impossible
    );
    assert!(matches!(
        sc.deduce_chain_parity(&st, &walk(Red, "d", "v2", &["v2", "v4", "d"])),
        Err(ScenarioError::MalformedWalk(_))
    ));
    assert!(matches!(
        sc.deduce_chain_parity(&st, &walk(Red, "d", "v2", &["v1", "d"])),
        Err(ScenarioError::MalformedWalk(_))
    ));
}

// Any closed walk in an RGB-tiled triangulation, split into a chain of one color and the rest,
// must have a chain length of the deduced parity.
#[test]
fn parity_rule_matches_exhaustive_instantiation() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for seed in 0..6 {
        let g = planar::random_triangulation(7, 10, seed);
        let mut colorings = Vec::new();
        rgbt::coloring::for_each_4coloring(&g, |vc| {
            colorings.push(vc.0.clone());
            colorings.len() < 40
        })
        .unwrap();
        for f in &colorings {
            let t = EdgeColoring(g.edges().iter().map(|e| pair_color(f[e.lo()], f[e.hi()])).collect());
            for c in RGB {
                for _ in 0..20 {
                    let (chain_len, counts) = random_split_walk(&g, &t, c, &mut rng);
                    let Some(chain_len) = chain_len else { continue };
                    let expect = if chain_len % 2 == 0 {
                        ChainParity::Even
                    } else {
                        ChainParity::Odd
                    };
                    assert_eq!(chain_parity(c, counts), expect);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 500, "{checked}");
}

// A random c-colored path followed by a random walk back to its start.
fn random_split_walk(
    g: &PlaneGraph,
    t: &EdgeColoring,
    c: EdgeColor,
    rng: &mut impl Rng,
) -> (Option<usize>, [usize; 3]) {
    let n = g.n();
    let start = rng.gen_range(0..n);
    let mut at = start;
    let mut len = 0;
    for _ in 0..rng.gen_range(1..6) {
        let next: Vec<usize> = g
            .rotation(at)
            .iter()
            .copied()
            .filter(|&w| t.get(g.edge_between(at, w).unwrap()) == c)
            .collect();
        if next.is_empty() {
            break;
        }
        at = next[rng.gen_range(0..next.len())];
        len += 1;
    }
    if len == 0 {
        return (None, [0; 3]);
    }
    let mut counts = [0; 3];
    let mut steps = 0;
    while at != start || steps == 0 {
        let w = g.rotation(at)[rng.gen_range(0..g.degree(at))];
        counts[t.get(g.edge_between(at, w).unwrap()).rgb_index().unwrap()] += 1;
        at = w;
        steps += 1;
        if steps > 60 {
            return (None, [0; 3]);
        }
    }
    (Some(len), counts)
}

#[test]
fn transcripts_replay_identically() {
    for name in ["fig7_rotation", "five_cubed", "c2c3"] {
        let sc = builtin(name).unwrap();
        let a = serde_json::to_string(&sc.run_script().unwrap()).unwrap();
        let b = serde_json::to_string(&builtin(name).unwrap().run_script().unwrap()).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn builtin_scripts_pass() {
    for (name, _) in BUILTINS {
        let tr = builtin(name).unwrap().run_script().unwrap();
        assert!(
            tr.pass,
            "{name}: {:?}",
            tr.steps.iter().find(|s| s.status == StepStatus::Fail)
        );
        assert_eq!(tr.failed_at, None);
    }
}

#[test]
fn false_parity_claim_fails_the_transcript() {
    let mut doc = builtin_doc("five_cubed").unwrap();
    doc.script.insert(
        1,
        StepDoc::AssertParity {
            walk: walk(Red, "v1", "v3", &["v3", "v2", "v1"]),
            expect: ChainParity::Odd,
        },
    );
    let tr = load_scenario(&doc).unwrap().run_script().unwrap();
    assert!(!tr.pass);
    assert_eq!(tr.failed_at, Some(1));
    assert_eq!(tr.steps.len(), 2);
    assert_eq!(tr.steps[1].status, StepStatus::Fail);
}

#[test]
fn false_contradiction_claim_fails() {
    let mut doc = builtin_doc("fig7_rotation").unwrap();
    doc.script = vec![StepDoc::AssertContradiction];
    let tr = load_scenario(&doc).unwrap().run_script().unwrap();
    assert!(!tr.pass);
}

#[test]
fn fig7_rotation_returns_to_start() {
    let tr = builtin("fig7_rotation").unwrap().run_script().unwrap();
    let ecs: Vec<_> = tr.steps.iter().filter(|s| s.step == "apply_ecs").collect();
    assert_eq!(ecs.len(), 10);
    assert_eq!(tr.steps.first().unwrap().border, tr.steps.last().unwrap().border);
    assert_eq!(ecs[4].label.as_deref(), Some("S5"));
}

#[test]
fn stale_ring_is_inapplicable() {
    let mut doc = builtin_doc("fig7_rotation").unwrap();
    let ring = doc.script.iter().find_map(|s| match s {
        StepDoc::ApplyEcs { ring, .. } => Some(ring.clone()),
        _ => None,
    });
    // the first ring applied twice in a row no longer runs along its banks
    let first = StepDoc::ApplyEcs {
        ring: ring.unwrap(),
        label: None,
    };
    doc.script = vec![first.clone(), first.clone(), first];
    let sc = load_scenario(&doc).unwrap();
    let out = sc.run_script();
    match out {
        Err(ScenarioError::StepInapplicable { .. }) => {}
        Ok(tr) => assert!(tr.pass, "a ring that applies twice must keep the state valid"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn atlas_triples() {
    let report = builtin("atlas_55").unwrap().atlas().unwrap();
    assert_eq!(report.triples, vec![[0, 0, 6], [0, 2, 4], [2, 2, 2]]);
    assert_eq!(report.boundaries.len(), 15);
    assert_eq!(report.patterns, 15);
    assert_eq!(report.forcing, 9);
    assert_eq!(report.discrepancies.len(), 1);
}

// RGB completions of each border class, counted from vertex 4-colorings of the region.
#[test]
fn atlas_counts_match_vertex_colorings() {
    let sc = builtin("atlas_55").unwrap();
    let report = sc.atlas().unwrap();
    let g = &sc.sigma;
    let mut by_border: BTreeMap<String, BTreeSet<Vec<EdgeColor>>> = BTreeMap::new();
    for code in 0..4u32.pow(g.n() as u32) {
        let f: Vec<u8> = (0..g.n()).map(|v| ((code >> (2 * v)) & 3) as u8 + 1).collect();
        if g.edges().iter().any(|e| f[e.lo()] == f[e.hi()]) {
            continue;
        }
        let colors: Vec<EdgeColor> = g.edges().iter().map(|e| pair_color(f[e.lo()], f[e.hi()])).collect();
        let border: String = sc.omega_edges.iter().map(|&e| colors[e].letter()).collect();
        by_border.entry(border).or_default().insert(colors);
    }
    for b in &report.boundaries {
        let n = by_border.get(&b.pattern).map_or(0, |s| s.len());
        assert_eq!(b.rgb_completions, n, "{}", b.pattern);
    }
    let total: usize = report.boundaries.iter().map(|b| b.orbit).sum();
    let realizable: usize = (0..3usize.pow(6))
        .filter(|&code| {
            let mut x = code;
            let colors: Vec<Option<EdgeColor>> = (0..6)
                .map(|_| {
                    let c = RGB[x % 3];
                    x /= 3;
                    Some(c)
                })
                .collect();
            rgbt::scenario::border_coloring(&colors).is_some()
        })
        .count();
    assert_eq!(total, realizable);
}

#[test]
fn sigma_adjust_respects_the_cap() {
    // a triangulated disk with a triangular border and 51 free edges
    let g = planar::random_triangulation(20, 30, 3);
    let label = |v: usize| format!("x{v}");
    let outer = g.triangles()[0];
    let doc = ScenarioDoc {
        name: "big".into(),
        notes: String::new(),
        vertices: (0..g.n()).map(label).collect(),
        faces: g.triangles()[1..].iter().map(|t| t.map(label)).collect(),
        omega: outer.iter().map(|&v| label(v)).collect(),
        fixed: (0..3)
            .map(|i| (format!("{}-{}", label(outer[i]), label(outer[(i + 1) % 3])), RGB[i]))
            .collect(),
        constraints: Vec::new(),
        symmetries: Vec::new(),
        script: Vec::new(),
        atlas: None,
    };
    let sc = load_scenario(&doc).unwrap();
    let st = sc.initial_state();
    assert!(matches!(
        sc.sigma_adjust(&st, TilingMode::Rgb, &[]),
        Err(ScenarioError::CapExceeded { free: 51, cap: 40 })
    ));
}

#[test]
fn mono_retiling_without_odd_cycle() {
    let sc = builtin("triangle_delta").unwrap();
    let st = sc.initial_state();
    let ext = sc.exterior(&st).unwrap();
    let all = sc.sigma_adjust(&st, TilingMode::Mono(Red), &[]).unwrap();
    assert!(!all.is_empty());
    let good = all
        .iter()
        .filter(|t| {
            let s = rgbt::scenario::State {
                colors: PartialColoring::from(*t),
                mode: TilingMode::Mono(Red),
                ..st.clone()
            };
            sc.odd_cycle(&s, &ext, Red).is_none()
        })
        .count();
    assert!(good > 0);
}
