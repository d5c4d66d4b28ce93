use rgbt::planar::{self, builtin, EdgeId, PlanarError, PlaneGraph, StackedMode};

#[test]
fn builtins_are_valid() {
    let k4 = builtin::k4();
    assert_eq!((k4.n(), k4.edge_count(), k4.triangles().len()), (4, 6, 4));
    assert!(k4.is_mpg());
    let oct = builtin::octahedron();
    assert_eq!((oct.edge_count(), oct.triangles().len()), (12, 8));
    let ico = builtin::icosahedron();
    assert_eq!((ico.edge_count(), ico.triangles().len()), (30, 20));
    assert!((0..12).all(|v| ico.degree(v) == 5));
    let w5 = builtin::wheel(5);
    assert_eq!(w5.triangles().len(), 5);
    assert_eq!(w5.outer_facets().len(), 1);
    assert!(w5.is_one_piece() && !w5.is_mpg());
    let t = builtin::triangle();
    assert_eq!((t.triangles().len(), t.outer_facets().len()), (1, 1));
}

#[test]
fn reversed_rotation_list_breaks_euler() {
    let mut doc = builtin::k4().to_doc();
    doc.rotation[0].reverse();
    assert!(matches!(
        PlaneGraph::from_doc(&doc),
        Err(PlanarError::NotPlanarRotation(_))
    ));
}

#[test]
fn validation_errors() {
    let doc = |rotation: Vec<Vec<usize>>| planar::GraphDoc {
        n: rotation.len(),
        rotation,
        outer_facets: vec![],
        shared_edge_allowed: false,
    };
    assert!(matches!(
        PlaneGraph::from_doc(&doc(vec![vec![1, 1, 2], vec![0, 2], vec![0, 1]])),
        Err(PlanarError::MultiEdge(0, 1))
    ));
    assert!(matches!(
        PlaneGraph::from_doc(&doc(vec![
            vec![1, 2],
            vec![0, 2],
            vec![0, 1],
            vec![4, 5],
            vec![3, 5],
            vec![3, 4]
        ])),
        Err(PlanarError::DisconnectedGraph)
    ));
    // a square with no declared hole
    let sq = doc(vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]);
    assert!(matches!(
        PlaneGraph::from_doc(&sq),
        Err(PlanarError::NonTriangleFace(_))
    ));
}

#[test]
fn planar_code_round_trip_and_errors() {
    let gs = vec![builtin::k4(), builtin::octahedron()];
    let bytes = planar::write_planar_code(&gs);
    let back = planar::parse_planar_code(&bytes).unwrap();
    assert_eq!(back.len(), 2);
    assert_eq!(back[0], gs[0]);
    assert_eq!(planar::parse_planar_code(&bytes[15..]).unwrap().len(), 2);
    assert_eq!(
        planar::parse_planar_code(&bytes[..bytes.len() - 1]),
        Err(PlanarError::TruncatedStream)
    );
    assert_eq!(
        planar::parse_planar_code(b">>planar_xx<<"),
        Err(PlanarError::HeaderMismatch)
    );
    let bad = [4u8, 2, 9, 0];
    assert!(matches!(
        planar::parse_planar_code(&bad),
        Err(PlanarError::VertexIndexOutOfRange { index: 9, n: 4 })
    ));
    assert_eq!(
        planar::parse_planar_code(&[0u8]),
        Err(PlanarError::UnsupportedVertexCount(0))
    );
}

#[test]
fn canonical_code_distinguishes_and_identifies() {
    let k4 = builtin::k4();
    let perm = [2, 0, 3, 1];
    assert_eq!(
        planar::canonical_code(&k4),
        planar::canonical_code(&k4.relabel(&perm).unwrap())
    );
    assert_ne!(planar::canonical_code(&k4), planar::canonical_code(&builtin::wheel(5)));
    let ico = builtin::icosahedron();
    assert_eq!(planar::canonical_code(&ico), planar::canonical_code(&ico.mirror()));
}

#[test]
fn stacked_counts() {
    let count = |n| planar::generate_stacked(n, StackedMode::Exhaustive, 0).unwrap().len();
    assert_eq!(count(4), 1);
    assert_eq!(count(5), 1);
    assert_eq!(count(6), 1);
    assert!(matches!(
        planar::generate_stacked(11, StackedMode::Exhaustive, 0),
        Err(PlanarError::CapExceeded { n: 11, cap: 10 })
    ));
    let r = planar::generate_stacked(16, StackedMode::Random { count: 3 }, 7).unwrap();
    assert!(r.iter().all(|g| g.n() == 16 && g.edge_count() == 42));
}

#[test]
fn remove_and_contract() {
    let k4 = builtin::k4();
    let q = planar::remove_edge(&k4, EdgeId::new(0, 1)).unwrap();
    assert_eq!(q.triangles().len(), 2);
    assert_eq!(q.outer_facets()[0].len(), 4);
    let back = planar::add_edge(&q, EdgeId::new(0, 1)).unwrap();
    assert_eq!(planar::canonical_code(&back), planar::canonical_code(&k4));
    let ico = builtin::icosahedron();
    let q = planar::remove_edge(&ico, ico.edge(0)).unwrap();
    assert_eq!(q.triangles().len(), 18);
    let t = planar::contract_edge(&k4, EdgeId::new(0, 1)).unwrap();
    assert_eq!(t.n(), 3);
    let oct = builtin::octahedron();
    let c = planar::contract_edge(&oct, EdgeId::new(0, 1)).unwrap();
    assert_eq!((c.n(), c.edge_count(), c.triangles().len()), (5, 9, 6));
}

#[test]
fn link_of_vertex_and_pair() {
    let ico = builtin::icosahedron();
    let omega = planar::link_cycle(&ico, &[0]).unwrap();
    assert_eq!(omega, vec![1, 2, 3, 4, 5]);
    let phi = planar::link_cycle(&ico, &[0, 1]).unwrap();
    assert_eq!(phi.len(), 6);
    let region = planar::interior_of(&ico, &phi).unwrap();
    let same = planar::transplant(&ico, &phi, &region.graph, &region.boundary).unwrap();
    assert_eq!(planar::canonical_code(&same), planar::canonical_code(&ico));
}

fn brute_isomorphic(g: &PlaneGraph, h: &PlaneGraph) -> bool {
    let n = g.n();
    if n != h.n() {
        return false;
    }
    let mut dg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    fn extend(g: &PlaneGraph, h: &PlaneGraph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let v = map.len();
        if v == g.n() {
            return true;
        }
        for w in 0..h.n() {
            if used[w] || g.degree(v) != h.degree(w) {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == h.has_edge(map[u], w)) {
                map.push(w);
                used[w] = true;
                if extend(g, h, map, used) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    extend(g, h, &mut Vec::new(), &mut vec![false; n])
}

#[test]
fn stacked_n7_matches_orbit_oracle() {
    // every labeled stacking sequence, grouped by brute-force isomorphism
    let mut all = vec![builtin::k4()];
    for _ in 4..7 {
        all = all
            .iter()
            .flat_map(|g| (0..g.triangles().len()).map(move |t| planar::stack_vertex(g, t)))
            .collect();
    }
    let mut reps: Vec<PlaneGraph> = Vec::new();
    for g in all {
        if !reps.iter().any(|r| brute_isomorphic(r, &g)) {
            reps.push(g);
        }
    }
    let generated = planar::generate_stacked(7, StackedMode::Exhaustive, 0).unwrap();
    assert_eq!(generated.len(), reps.len());
    assert_eq!(generated.len(), 3);
}

#[test]
fn chiral_mirror_has_same_canonical_code() {
    let chiral = (4..=9)
        .flat_map(|n| planar::generate_stacked(n, StackedMode::Exhaustive, 0).unwrap())
        .find(|g| planar::oriented_code(g) != planar::oriented_code(&g.mirror()))
        .expect("a chiral stacked triangulation exists");
    assert_eq!(
        planar::canonical_code(&chiral),
        planar::canonical_code(&chiral.mirror())
    );
}

#[test]
fn remove_two_edges_sharing_a_triangle() {
    let oct = builtin::octahedron();
    let q = planar::remove_edge(&oct, EdgeId::new(0, 1)).unwrap();
    let q2 = planar::remove_edge(&q, EdgeId::new(0, 2)).unwrap();
    assert_eq!(q2.outer_facets().len(), 1);
    assert_eq!(q2.outer_facets()[0].len(), 5);
    let q3 = planar::remove_edge(&q, EdgeId::new(3, 5)).unwrap();
    assert_eq!(q3.outer_facets().len(), 2);
}

#[test]
fn contraction_with_extra_common_neighbor_is_rejected() {
    // stacking a vertex into K4 gives vertices sharing three neighbors
    let g = planar::stack_vertex(&builtin::k4(), 0);
    let bad = g
        .edges()
        .iter()
        .copied()
        .find(|e| planar::contract_edge(&g, *e) == Err(PlanarError::ContractionCreatesMultiEdge(*e)));
    assert!(bad.is_some());
}

#[test]
fn pinched_neighborhood_is_not_a_simple_cycle() {
    // a path of three vertices whose outer neighbors touch the path twice
    let pinched = (6..=8).any(|n| {
        planar::generate_stacked(n, StackedMode::Exhaustive, 0)
            .unwrap()
            .iter()
            .any(|g| {
                (0..g.n()).any(|u| {
                    g.rotation(u).iter().any(|&v| {
                        g.rotation(v).iter().any(|&w| {
                            w != u
                                && !g.has_edge(u, w)
                                && planar::link_cycle(g, &[u, v, w]) == Err(PlanarError::NotSimpleCycle)
                        })
                    })
                })
            })
    });
    assert!(pinched);
    let k4 = builtin::k4();
    assert_eq!(planar::link_cycle(&k4, &[0, 1, 2]), Err(PlanarError::NotSimpleCycle));
    let oct = builtin::octahedron();
    assert_eq!(planar::link_cycle(&oct, &[0, 5]), Err(PlanarError::NotConnectedTD));
}

#[test]
fn transplant_checks_boundary_length() {
    let ico = builtin::icosahedron();
    let phi = planar::link_cycle(&ico, &[0, 1]).unwrap();
    let w5 = builtin::wheel(5);
    let boundary: Vec<usize> = vec![1, 2, 3, 4, 5];
    assert!(matches!(
        planar::transplant(&ico, &phi, &w5, &boundary),
        Err(PlanarError::BoundaryMismatch(_))
    ));
    let omega = planar::link_cycle(&ico, &[0]).unwrap();
    let swapped = planar::transplant(&ico, &omega, &w5, &boundary).unwrap();
    assert_eq!(planar::canonical_code(&swapped), planar::canonical_code(&ico));
}
