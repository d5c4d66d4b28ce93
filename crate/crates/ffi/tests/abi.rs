use std::ffi::{CStr, CString};
use std::ptr;

use rgbt_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(rgbt_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn builtin(name: &str) -> *mut RgbtGraph {
    let name = CString::new(name).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { rgbt_graph_builtin(name.as_ptr(), &mut g) }, RgbtStatus::Ok);
    g
}

fn edges(g: *const RgbtGraph) -> Vec<(usize, usize)> {
    (0..unsafe { rgbt_graph_edge_count(g) })
        .map(|i| {
            let (mut u, mut v) = (0, 0);
            assert_eq!(unsafe { rgbt_graph_edge(g, i, &mut u, &mut v) }, RgbtStatus::Ok);
            (u, v)
        })
        .collect()
}

/// All letter strings over `palette` in which every vertex triple of K4 satisfies `ok`.
fn k4_oracle(es: &[(usize, usize)], palette: &[char], ok: fn([char; 3]) -> bool) -> usize {
    let m = es.len();
    let idx = |a: usize, b: usize| es.iter().position(|&e| e == (a.min(b), a.max(b))).unwrap();
    let mut count = 0;
    for code in 0..palette.len().pow(m as u32) {
        let mut c = code;
        let s: Vec<char> = (0..m)
            .map(|_| {
                let x = palette[c % palette.len()];
                c /= palette.len();
                x
            })
            .collect();
        let tris = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        if tris
            .iter()
            .all(|&[a, b, d]| ok([s[idx(a, b)], s[idx(b, d)], s[idx(a, d)]]))
        {
            count += 1;
        }
    }
    count
}

#[test]
fn k4_counts_match_brute_force() {
    let g = builtin("k4");
    assert_eq!(unsafe { rgbt_graph_vertex_count(g) }, 4);
    let es = edges(g);
    assert_eq!(es.len(), 6);
    let rainbow = |t: [char; 3]| t[0] != t[1] && t[1] != t[2] && t[0] != t[2];
    let one_red = |t: [char; 3]| t.iter().filter(|&&c| c == 'r').count() == 1;
    for (mode, want) in [
        (c"rgb", k4_oracle(&es, &['r', 'g', 'b'], rainbow)),
        (c"r", k4_oracle(&es, &['r', 'k'], one_red)),
    ] {
        let mut n = 0;
        assert_eq!(unsafe { rgbt_count_tilings(g, mode.as_ptr(), &mut n) }, RgbtStatus::Ok);
        assert_eq!(n as usize, want, "{mode:?}");
    }
    let mut n = 0;
    assert_eq!(unsafe { rgbt_count_tilings(g, ptr::null(), &mut n) }, RgbtStatus::Ok);
    assert_eq!(n, 6);
    unsafe { rgbt_graph_free(g) };
}

#[test]
fn graph_from_json_and_tiling_round_trip() {
    let json = CString::new(r#"{"n":4,"rotation":[[1,2,3],[0,3,2],[0,1,3],[0,2,1]]}"#).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { rgbt_graph_from_json(json.as_ptr(), &mut g) },
        RgbtStatus::Ok,
        "{}",
        last_error()
    );
    assert_eq!(unsafe { rgbt_graph_edge_count(g) }, 6);

    let mut t = ptr::null_mut();
    assert_eq!(unsafe { rgbt_tiling_first(g, c"rgb".as_ptr(), &mut t) }, RgbtStatus::Ok);
    let letters = unsafe { rgbt_tiling_letters(t) };
    let s = unsafe { CStr::from_ptr(letters) }.to_str().unwrap().to_owned();
    unsafe { rgbt_string_free(letters) };
    assert_eq!(s.len(), 6);

    let again = CString::new(s.clone()).unwrap();
    let mut t2 = ptr::null_mut();
    assert_eq!(
        unsafe { rgbt_tiling_from_letters(g, again.as_ptr(), &mut t2) },
        RgbtStatus::Ok
    );
    let mut valid = false;
    assert_eq!(
        unsafe { rgbt_tiling_check(g, t2, c"rgb".as_ptr(), &mut valid) },
        RgbtStatus::Ok
    );
    assert!(valid);
    assert_eq!(
        unsafe { rgbt_tiling_check(g, t2, c"r".as_ptr(), &mut valid) },
        RgbtStatus::Ok
    );
    assert!(!valid);

    unsafe {
        rgbt_tiling_free(t);
        rgbt_tiling_free(t2);
        rgbt_graph_free(g);
    }
}

#[test]
fn red_tiling_of_k4_is_grand() {
    let g = builtin("k4");
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { rgbt_tiling_first(g, c"r".as_ptr(), &mut t) }, RgbtStatus::Ok);
    let mut grand = false;
    assert_eq!(unsafe { rgbt_tiling_is_grand(g, t, &mut grand) }, RgbtStatus::Ok);
    assert!(grand);
    unsafe {
        rgbt_tiling_free(t);
        rgbt_graph_free(g);
    }
}

#[test]
fn ring_switch_is_an_involution() {
    let g = builtin("octahedron");
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { rgbt_tiling_first(g, ptr::null(), &mut t) }, RgbtStatus::Ok);
    let letters = |t| unsafe {
        let p = rgbt_tiling_letters(t);
        let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
        rgbt_string_free(p);
        s
    };
    let before = letters(t);
    let mut rings = 0;
    assert_eq!(unsafe { rgbt_ring_count(g, t, &mut rings) }, RgbtStatus::Ok);
    assert!(rings > 0);
    for i in 0..rings {
        let (mut once, mut twice) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(
            unsafe { rgbt_apply_ring(g, t, i, &mut once) },
            RgbtStatus::Ok,
            "{}",
            last_error()
        );
        let mut valid = false;
        assert_eq!(
            unsafe { rgbt_tiling_check(g, once, ptr::null(), &mut valid) },
            RgbtStatus::Ok
        );
        assert!(valid);
        assert_ne!(letters(once), before);

        let mut back_rings = 0;
        assert_eq!(unsafe { rgbt_ring_count(g, once, &mut back_rings) }, RgbtStatus::Ok);
        let back = (0..back_rings).find(|&j| {
            assert_eq!(unsafe { rgbt_apply_ring(g, once, j, &mut twice) }, RgbtStatus::Ok);
            let same = letters(twice) == before;
            unsafe { rgbt_tiling_free(twice) };
            same
        });
        assert!(back.is_some(), "ring {i} has no inverse");
        unsafe { rgbt_tiling_free(once) };
    }
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { rgbt_apply_ring(g, t, rings, &mut out) }, RgbtStatus::NotFound);
    assert!(out.is_null());
    unsafe {
        rgbt_tiling_free(t);
        rgbt_graph_free(g);
    }
}

#[test]
fn scenario_run_reports_transcript() {
    let mut sc = ptr::null_mut();
    assert_eq!(
        unsafe { rgbt_scenario_load(c"fig7_rotation".as_ptr(), &mut sc) },
        RgbtStatus::Ok,
        "{}",
        last_error()
    );
    let mut pass = false;
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { rgbt_scenario_run(sc, &mut pass, &mut json) },
        RgbtStatus::Ok,
        "{}",
        last_error()
    );
    assert!(pass);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    let ecs = v["steps"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["step"] == "apply_ecs")
        .count();
    assert_eq!(ecs, 10);
    unsafe {
        rgbt_string_free(json);
        assert_eq!(rgbt_scenario_run(sc, &mut pass, ptr::null_mut()), RgbtStatus::Ok);
        rgbt_scenario_free(sc);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { rgbt_graph_builtin(c"dodecahedron".as_ptr(), &mut g) },
        RgbtStatus::NotFound
    );
    assert!(g.is_null());
    assert!(last_error().contains("dodecahedron"));

    assert_eq!(
        unsafe { rgbt_graph_builtin(ptr::null(), &mut g) },
        RgbtStatus::NullArgument
    );
    assert_eq!(
        unsafe { rgbt_graph_builtin(c"k4".as_ptr(), ptr::null_mut()) },
        RgbtStatus::NullArgument
    );
    assert_eq!(
        unsafe { rgbt_graph_from_json(c"{not json".as_ptr(), &mut g) },
        RgbtStatus::Parse
    );
    let bad = c"{\"n\":4,\"rotation\":[[1],[0],[3],[2]]}";
    assert_eq!(
        unsafe { rgbt_graph_from_json(bad.as_ptr(), &mut g) },
        RgbtStatus::InvalidGraph
    );
    let utf = [0xffu8, 0];
    assert_eq!(
        unsafe { rgbt_graph_builtin(utf.as_ptr().cast(), &mut g) },
        RgbtStatus::InvalidUtf8
    );

    let k4 = builtin("k4");
    let oct = builtin("octahedron");
    let mut n = 0;
    assert_eq!(
        unsafe { rgbt_count_tilings(k4, c"purple".as_ptr(), &mut n) },
        RgbtStatus::Parse
    );
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { rgbt_tiling_from_letters(k4, c"rgb".as_ptr(), &mut t) },
        RgbtStatus::Mismatch
    );
    assert_eq!(
        unsafe { rgbt_tiling_from_letters(k4, c"rgbxyz".as_ptr(), &mut t) },
        RgbtStatus::Parse
    );
    assert_eq!(unsafe { rgbt_tiling_first(k4, ptr::null(), &mut t) }, RgbtStatus::Ok);
    let mut valid = true;
    assert_eq!(
        unsafe { rgbt_tiling_check(oct, t, ptr::null(), &mut valid) },
        RgbtStatus::Mismatch
    );
    assert!(last_error().contains("6 edges"));
    let (mut u, mut v) = (0, 0);
    assert_eq!(unsafe { rgbt_graph_edge(k4, 6, &mut u, &mut v) }, RgbtStatus::NotFound);

    assert_eq!(unsafe { rgbt_graph_vertex_count(ptr::null()) }, 0);
    assert!(unsafe { rgbt_tiling_letters(ptr::null()) }.is_null());

    let mut sc = ptr::null_mut();
    assert_eq!(
        unsafe { rgbt_scenario_load(c"nope".as_ptr(), &mut sc) },
        RgbtStatus::NotFound
    );
    assert_eq!(
        unsafe { rgbt_scenario_load(c"{\"omega\": 3}".as_ptr(), &mut sc) },
        RgbtStatus::Parse
    );

    assert_eq!(unsafe { rgbt_count_tilings(k4, ptr::null(), &mut n) }, RgbtStatus::Ok);
    assert_eq!(last_error(), "", "success clears the message");
    unsafe {
        rgbt_tiling_free(t);
        rgbt_graph_free(k4);
        rgbt_graph_free(oct);
        rgbt_graph_free(ptr::null_mut());
        rgbt_tiling_free(ptr::null_mut());
        rgbt_scenario_free(ptr::null_mut());
        rgbt_string_free(ptr::null_mut());
    }
}
