//! C ABI over rgbt-core.
//!
//! Every fallible call returns an [`RgbtStatus`]. On failure a message is kept per thread
//! and can be read with [`rgbt_last_error`]. Handles are opaque and must be released with
//! the matching `_free` function. Strings returned to the caller are released with
//! [`rgbt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rgbt::coloring::{EdgeColor, EdgeColoring, PartialColoring};
use rgbt::kempe;
use rgbt::planar::{builtin, GraphDoc, PlaneGraph};
use rgbt::scenario::{self, Scenario, ScenarioDoc, ScenarioError};
use rgbt::tiling::{self, TilingError, TilingMode};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RgbtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidGraph = 4,
    Mismatch = 5,
    NotFound = 6,
    CapExceeded = 7,
    Failed = 8,
    Panic = 9,
}

pub struct RgbtGraph {
    inner: PlaneGraph,
}

pub struct RgbtTiling {
    inner: EdgeColoring,
}

pub struct RgbtScenario {
    inner: Scenario,
}

struct Fail(RgbtStatus, String);

impl From<TilingError> for Fail {
    fn from(e: TilingError) -> Self {
        let status = match e {
            TilingError::CapExceeded { .. } => RgbtStatus::CapExceeded,
            TilingError::UnknownMode(_) => RgbtStatus::Parse,
            _ => RgbtStatus::Failed,
        };
        Fail(status, e.to_string())
    }
}

impl From<ScenarioError> for Fail {
    fn from(e: ScenarioError) -> Self {
        let status = match e {
            ScenarioError::CapExceeded { .. } => RgbtStatus::CapExceeded,
            ScenarioError::UnknownBuiltin(_) => RgbtStatus::NotFound,
            ScenarioError::Document(_) | ScenarioError::UnknownVertex(_) | ScenarioError::UnknownEdge(_) => {
                RgbtStatus::Parse
            }
            ScenarioError::Graph(_) => RgbtStatus::InvalidGraph,
            _ => RgbtStatus::Failed,
        };
        Fail(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RgbtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RgbtStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            RgbtStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(RgbtStatus::NullArgument, format!("{what} is NULL"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(RgbtStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn mode_arg(p: *const c_char) -> Result<TilingMode, Fail> {
    if p.is_null() {
        return Ok(TilingMode::Rgb);
    }
    Ok(str_arg(p, "mode")?.parse()?)
}

fn fitted<'a>(g: &PlaneGraph, t: &'a RgbtTiling) -> Result<&'a EdgeColoring, Fail> {
    if t.inner.len() != g.edge_count() {
        return Err(Fail(
            RgbtStatus::Mismatch,
            format!("tiling has {} edges, graph has {}", t.inner.len(), g.edge_count()),
        ));
    }
    Ok(&t.inner)
}

fn to_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Fail(RgbtStatus::Failed, e.to_string()))
}

/// Message for the last failed call on this thread, or "" after a success.
/// The pointer stays valid until the next rgbt call on the same thread.
#[no_mangle]
pub extern "C" fn rgbt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rgbt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a graph document (`{"n": 4, "rotation": [[1, 2, 3], ...]}`).
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rgbt_graph_from_json(json: *const c_char, out: *mut *mut RgbtGraph) -> RgbtStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let doc: GraphDoc =
            serde_json::from_str(str_arg(json, "json")?).map_err(|e| Fail(RgbtStatus::Parse, e.to_string()))?;
        let g = PlaneGraph::from_doc(&doc).map_err(|e| Fail(RgbtStatus::InvalidGraph, e.to_string()))?;
        *out = Box::into_raw(Box::new(RgbtGraph { inner: g }));
        Ok(())
    })
}

/// One of the builtin graphs: k4, octahedron, icosahedron, w5, triangle.
///
/// # Safety
/// `name` must be a NUL-terminated string, `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rgbt_graph_builtin(name: *const c_char, out: *mut *mut RgbtGraph) -> RgbtStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let name = str_arg(name, "name")?;
        let g =
            builtin::by_name(name).ok_or_else(|| Fail(RgbtStatus::NotFound, format!("no builtin graph '{name}'")))?;
        *out = Box::into_raw(Box::new(RgbtGraph { inner: g }));
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rgbt_graph_free(g: *mut RgbtGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle or NULL (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn rgbt_graph_vertex_count(g: *const RgbtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.n())
}

/// # Safety
/// `g` must be a live graph handle or NULL (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn rgbt_graph_edge_count(g: *const RgbtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// Endpoints of edge `index`, smaller vertex first. Tiling letters follow this edge order.
///
/// # Safety
/// `g` must be a live graph handle, `u` and `v` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn rgbt_graph_edge(
    g: *const RgbtGraph,
    index: usize,
    u: *mut usize,
    v: *mut usize,
) -> RgbtStatus {
    guard(|| {
        let g = &ref_arg(g, "graph")?.inner;
        let (u, v) = (out_arg(u, "u")?, out_arg(v, "v")?);
        if index >= g.edge_count() {
            return Err(Fail(
                RgbtStatus::NotFound,
                format!("edge {index} of {}", g.edge_count()),
            ));
        }
        (*u, *v) = g.edge(index).ends();
        Ok(())
    })
}

/// Number of tilings in `mode` ("r", "g", "b", "rgb", "ergb"; NULL means "rgb").
///
/// # Safety
/// `g` must be a live graph handle, `mode` NULL or a NUL-terminated string,
/// `count` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rgbt_count_tilings(g: *const RgbtGraph, mode: *const c_char, count: *mut u64) -> RgbtStatus {
    guard(|| {
        let g = &ref_arg(g, "graph")?.inner;
        let count = out_arg(count, "count")?;
        *count = tiling::for_each_tiling(g, mode_arg(mode)?, &PartialColoring::empty(g), &mut |_| true)?;
        Ok(())
    })
}

/// The first tiling in enumeration order. `RGBT_STATUS_NOT_FOUND` if there is none.
///
/// # Safety
/// `g` must be a live graph handle, `mode` NULL or a NUL-terminated string,
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rgbt_tiling_first(
    g: *const RgbtGraph,
    mode: *const c_char,
    out: *mut *mut RgbtTiling,
) -> RgbtStatus {
    guard(|| {
        let g = &ref_arg(g, "graph")?.inner;
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let mode = mode_arg(mode)?;
        let mut first = None;
        tiling::for_each_tiling(g, mode, &PartialColoring::empty(g), &mut |t| {
            first = Some(t.clone());
            false
        })?;
        let t = first.ok_or_else(|| Fail(RgbtStatus::NotFound, format!("graph has no {mode} tiling")))?;
        *out = Box::into_raw(Box::new(RgbtTiling { inner: t }));
        Ok(())
    })
}

/// A tiling from one letter per edge (r, g, b, k, Y) in edge order.
///
/// # Safety
/// `g` must be a live graph handle, `letters` a NUL-terminated string,
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rgbt_tiling_from_letters(
    g: *const RgbtGraph,
    letters: *const c_char,
    out: *mut *mut RgbtTiling,
) -> RgbtStatus {
    guard(|| {
        let g = &ref_arg(g, "graph")?.inner;
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let letters = str_arg(letters, "letters")?;
        let colors = letters
            .chars()
            .map(|c| {
                EdgeColor::from_letter(c).ok_or_else(|| Fail(RgbtStatus::Parse, format!("bad color letter '{c}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if colors.len() != g.edge_count() {
            return Err(Fail(
                RgbtStatus::Mismatch,
                format!("{} letters for {} edges", colors.len(), g.edge_count()),
            ));
        }
        *out = Box::into_raw(Box::new(RgbtTiling {
            inner: EdgeColoring(colors),
        }));
        Ok(())
    })
}

/// # Safety
/// `t` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rgbt_tiling_free(t: *mut RgbtTiling) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Letter string of the tiling. Release with `rgbt_string_free`. NULL if `t` is NULL.
///
/// # Safety
/// `t` must be a live tiling handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn rgbt_tiling_letters(t: *const RgbtTiling) -> *mut c_char {
    match t.as_ref() {
        Some(t) => to_c_string(t.inner.letters()).unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    }
}

/// Whether `t` is a valid tiling of `g` in `mode`.
///
/// # Safety
/// `g`, `t` must be live handles, `mode` NULL or a NUL-terminated string,
/// `valid` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rgbt_tiling_check(
    g: *const RgbtGraph,
    t: *const RgbtTiling,
    mode: *const c_char,
    valid: *mut bool,
) -> RgbtStatus {
    guard(|| {
        let g = &ref_arg(g, "graph")?.inner;
        let t = fitted(g, ref_arg(t, "tiling")?)?;
        let valid = out_arg(valid, "valid")?;
        *valid = tiling::is_valid(g, t, mode_arg(mode)?);
        Ok(())
    })
}

/// Whether the red tiling `t` is grand.
///
/// # Safety
/// `g`, `t` must be live handles, `grand` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rgbt_tiling_is_grand(
    g: *const RgbtGraph,
    t: *const RgbtTiling,
    grand: *mut bool,
) -> RgbtStatus {
    guard(|| {
        let g = &ref_arg(g, "graph")?.inner;
        let t = fitted(g, ref_arg(t, "tiling")?)?;
        let grand = out_arg(grand, "grand")?;
        *grand = tiling::is_grand(g, t).is_ok();
        Ok(())
    })
}

/// Number of closed canal rings of `t`. Rings are indexed 0..count.
///
/// # Safety
/// `g`, `t` must be live handles, `count` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rgbt_ring_count(g: *const RgbtGraph, t: *const RgbtTiling, count: *mut usize) -> RgbtStatus {
    guard(|| {
        let g = &ref_arg(g, "graph")?.inner;
        let t = fitted(g, ref_arg(t, "tiling")?)?;
        let count = out_arg(count, "count")?;
        *count = kempe::closed_rings(g, t).len();
        Ok(())
    })
}

/// Edge color switch along ring `index`, written to a new tiling handle.
///
/// # Safety
/// `g`, `t` must be live handles, `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rgbt_apply_ring(
    g: *const RgbtGraph,
    t: *const RgbtTiling,
    index: usize,
    out: *mut *mut RgbtTiling,
) -> RgbtStatus {
    guard(|| {
        let g = &ref_arg(g, "graph")?.inner;
        let t = fitted(g, ref_arg(t, "tiling")?)?;
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let rings = kempe::closed_rings(g, t);
        let ring = rings
            .get(index)
            .ok_or_else(|| Fail(RgbtStatus::NotFound, format!("ring {index} of {}", rings.len())))?;
        let next = kempe::apply_ecs(g, t, ring).map_err(|e| Fail(RgbtStatus::Failed, e.to_string()))?;
        *out = Box::into_raw(Box::new(RgbtTiling { inner: next }));
        Ok(())
    })
}

/// A builtin scenario name, or a scenario document when `source` starts with '{'.
///
/// # Safety
/// `source` must be a NUL-terminated string, `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rgbt_scenario_load(source: *const c_char, out: *mut *mut RgbtScenario) -> RgbtStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let source = str_arg(source, "source")?;
        let sc = if source.trim_start().starts_with('{') {
            let doc: ScenarioDoc = serde_json::from_str(source).map_err(|e| Fail(RgbtStatus::Parse, e.to_string()))?;
            scenario::load_scenario(&doc)?
        } else {
            scenario::builtin(source)?
        };
        *out = Box::into_raw(Box::new(RgbtScenario { inner: sc }));
        Ok(())
    })
}

/// # Safety
/// `sc` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rgbt_scenario_free(sc: *mut RgbtScenario) {
    if !sc.is_null() {
        drop(Box::from_raw(sc));
    }
}

/// Run the scenario script. `pass` receives the verdict. If `transcript` is not NULL it
/// receives the transcript as JSON, to be released with `rgbt_string_free`.
///
/// # Safety
/// `sc` must be a live handle, `pass` a writable pointer, `transcript` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rgbt_scenario_run(
    sc: *const RgbtScenario,
    pass: *mut bool,
    transcript: *mut *mut c_char,
) -> RgbtStatus {
    guard(|| {
        let sc = &ref_arg(sc, "scenario")?.inner;
        let pass = out_arg(pass, "pass")?;
        if let Some(t) = transcript.as_mut() {
            *t = ptr::null_mut();
        }
        let t = sc.run_script()?;
        *pass = t.pass;
        if let Some(out) = transcript.as_mut() {
            let json = serde_json::to_string(&t).map_err(|e| Fail(RgbtStatus::Failed, e.to_string()))?;
            *out = to_c_string(json)?;
        }
        Ok(())
    })
}
