mod common;

use rgbt::coloring::{self, Black, Blue, ColoringError, EdgeColor, EdgeColoring, Green, Red, VertexColoring};
use rgbt::planar::{builtin, PlaneGraph, StackedMode};
use rgbt::tiling::{self, TilingMode};

#[test]
fn k4_identity_coloring_gives_klein_pairs() {
    let k4 = builtin::k4();
    let vc = VertexColoring(vec![1, 2, 3, 4]);
    let t = coloring::induce_edge_coloring(&k4, &vc).unwrap();
    let color = |u, v| t.get(k4.edge_between(u, v).unwrap());
    assert_eq!((color(0, 2), color(1, 3)), (Red, Red));
    assert_eq!((color(0, 3), color(1, 2)), (Green, Green));
    assert_eq!((color(0, 1), color(2, 3)), (Blue, Blue));
}

#[test]
fn triangle_coloring_is_rainbow() {
    let tri = builtin::triangle();
    let t = coloring::induce_edge_coloring(&tri, &VertexColoring(vec![1, 2, 3])).unwrap();
    let mut colors = t.0.clone();
    colors.sort();
    assert_eq!(colors, vec![Red, Green, Blue]);
}

#[test]
fn improper_coloring_is_rejected() {
    let k4 = builtin::k4();
    let vc = VertexColoring(vec![1, 1, 2, 3]);
    assert!(!coloring::is_proper(&k4, &vc));
    assert!(matches!(
        coloring::induce_edge_coloring(&k4, &vc),
        Err(ColoringError::NotProper(_))
    ));
    assert!(!coloring::is_proper(&k4, &VertexColoring(vec![2; 4])));
}

#[test]
fn round_trip_on_k4() {
    let k4 = builtin::k4();
    for t in tiling::all_tilings(&k4, TilingMode::Rgb).unwrap() {
        let vc = coloring::induce_vertex_coloring(&k4, &t).unwrap();
        assert!(coloring::is_proper(&k4, &vc));
        assert_eq!(vc.0[0], 1);
        assert_eq!(coloring::induce_edge_coloring(&k4, &vc).unwrap(), t);
    }
}

#[test]
fn w5_completion_and_rim_red() {
    let w5 = builtin::wheel(5);
    let mut fixed = rgbt::coloring::PartialColoring::empty(&w5);
    for (u, v) in [(0, 1), (2, 3), (0, 4)] {
        fixed.0[w5.edge_between(u, v).unwrap()] = Some(Red);
    }
    let completions = tiling::enumerate_tilings(&w5, TilingMode::Rgb, &fixed).unwrap();
    assert!(!completions.is_empty());
    for t in &completions {
        let vc = coloring::induce_vertex_coloring(&w5, t).unwrap();
        assert!(coloring::is_proper(&w5, &vc));
    }
    let rim_red = EdgeColoring(
        w5.edges()
            .iter()
            .map(|e| if e.lo() == 0 { Black } else { Red })
            .collect(),
    );
    assert!(matches!(
        coloring::induce_vertex_coloring(&w5, &rim_red),
        Err(ColoringError::RedOddCycle(_))
    ));
}

#[test]
fn coloring_counts_match_brute_force() {
    assert_eq!(coloring::count_4colorings(&builtin::k4()).unwrap(), 24);
    assert_eq!(coloring::count_4colorings(&builtin::triangle()).unwrap(), 24);
    let oct = builtin::octahedron();
    let n = coloring::count_4colorings(&oct).unwrap();
    assert_eq!(n, common::brute_4colorings(&oct));
    assert_eq!(n, 96);
    for g in rgbt::planar::generate_stacked(7, StackedMode::Exhaustive, 0).unwrap() {
        assert_eq!(coloring::count_4colorings(&g).unwrap(), common::brute_4colorings(&g));
    }
}

#[test]
fn icosahedron_colorings_are_proper_and_round_trip() {
    let ico = builtin::icosahedron();
    let (count, all) = coloring::enumerate_4colorings(&ico).unwrap();
    assert_eq!(count as usize, all.len());
    assert!(count > 0);
    for vc in all.iter().take(24) {
        let t = coloring::induce_edge_coloring(&ico, vc).unwrap();
        assert!(tiling::is_valid(&ico, &t, TilingMode::Rgb));
        let back = coloring::induce_vertex_coloring(&ico, &t).unwrap();
        assert!(coloring::is_proper(&ico, &back));
        assert_eq!(coloring::induce_edge_coloring(&ico, &back).unwrap(), t);
    }
}

#[test]
fn synonym_orbits() {
    let k4 = builtin::k4();
    let rgb = tiling::all_tilings(&k4, TilingMode::Rgb).unwrap();
    let orbit = coloring::synonyms(&rgb[0]);
    let mut sorted = orbit.to_vec();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 6);
    let mut all = rgb.clone();
    all.sort();
    assert_eq!(sorted, all);

    // an R-tiling is fixed by g<->b, so its orbit has three members
    let r = &tiling::all_tilings(&k4, TilingMode::R).unwrap()[0];
    assert_eq!(coloring::orbit_size(r), 3);
    assert_eq!(coloring::orbit_size(&EdgeColoring::uniform(&k4, Black)), 1);
}

fn stacked_upto(n: usize) -> Vec<PlaneGraph> {
    (4..=n)
        .flat_map(|k| rgbt::planar::generate_stacked(k, StackedMode::Exhaustive, 0).unwrap())
        .collect()
}

#[test]
fn colors_parse_and_print() {
    for c in [Red, Green, Blue, Black, EdgeColor::Yellow] {
        assert_eq!(c.letter().to_string().parse::<EdgeColor>().unwrap(), c);
    }
    assert!("x".parse::<EdgeColor>().is_err());
    assert_eq!(stacked_upto(6).len(), 3);
}
