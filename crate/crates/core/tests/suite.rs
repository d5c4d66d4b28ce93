use std::path::PathBuf;

use rgbt::planar::{self, builtin};
use rgbt::suite::{self, run_suite, SuiteError, SUITES};
use rgbt::tiling::{self, TilingMode};

#[test]
fn every_suite_passes_on_small_graphs() {
    for name in SUITES {
        let r = run_suite(name, 7, &[]).unwrap();
        assert!(r.pass, "{}", r.render());
        assert!(r.failures.is_empty());
        assert_eq!(r.graphs, 1 + 1 + 1 + 3);
        assert!(r.checks.iter().all(|c| c.pass && c.examined > 0), "{}", r.render());
    }
}

#[test]
fn unknown_suite_and_bad_bounds() {
    assert!(matches!(
        run_suite("four-color", 6, &[]),
        Err(SuiteError::UnknownSuite(_))
    ));
    assert!(matches!(run_suite("parity", 3, &[]), Err(SuiteError::MaxN(3))));
    assert!(matches!(run_suite("parity", 11, &[]), Err(SuiteError::MaxN(11))));
}

#[test]
fn missing_corpus_degrades_with_a_warning() {
    let r = run_suite("equivalence", 6, &[PathBuf::from("/nonexistent/corpus.pc")]).unwrap();
    assert!(r.pass);
    assert_eq!(r.warnings.len(), 1);
    assert_eq!(r.graphs, 3);
}

#[test]
fn corpus_graphs_are_added_once() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.pc");
    // the octahedron is not stacked; K4 is already generated
    std::fs::write(
        &path,
        planar::write_planar_code(&[builtin::octahedron(), builtin::k4()]),
    )
    .unwrap();
    let mut warnings = Vec::new();
    let gs = suite::corpus(6, std::slice::from_ref(&path), &mut warnings).unwrap();
    assert_eq!(gs.len(), 4);
    assert!(warnings.is_empty());
    let r = run_suite("one-piece", 6, &[path]).unwrap();
    assert!(r.pass, "{}", r.render());

    std::fs::write(dir.path().join("bad.pc"), b"not a code").unwrap();
    assert!(matches!(
        run_suite("parity", 5, &[dir.path().join("bad.pc")]),
        Err(SuiteError::Corpus { .. })
    ));
}

#[test]
fn deleting_a_vertex_leaves_its_link_as_the_hole() {
    let ico = builtin::icosahedron();
    let h = suite::delete_vertex(&ico, 0).unwrap();
    assert_eq!(h.n(), 11);
    assert_eq!(h.outer_facets().len(), 1);
    assert_eq!(h.outer_facets()[0].len(), 5);
    assert_eq!(h.triangles().len(), 15);
    let k4 = builtin::k4();
    let t = suite::delete_vertex(&k4, 3).unwrap();
    assert_eq!(t.triangles().len(), 1);
    assert_eq!(
        tiling::all_tilings(&t, TilingMode::Mono(rgbt::coloring::Red))
            .unwrap()
            .len(),
        3
    );
}

#[test]
fn report_lists_failures() {
    let r = run_suite("parity", 5, &[]).unwrap();
    let text = r.render();
    assert!(text.ends_with("PASS\n"));
    assert!(text.contains("triangle-host-111"));
}
