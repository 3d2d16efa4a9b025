//! C ABI over `lclkit`.
//!
//! Graphs and automata cross the boundary as opaque handles; everything else
//! is UTF-8 JSON in the same shapes the command-line tool reads and prints.
//! Every call returns an [`LclkitStatus`]. On failure a message is available
//! from [`lclkit_last_error`] on the same thread. Strings returned through
//! `out` parameters are owned by the caller and released with
//! [`lclkit_string_free`]; handles are released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lclkit::gadget::{decode, encode, GadgetError};
use lclkit::graph::{Coloring, StructuredGraph};
use lclkit::lcl::{verify, CheckMode, LclError, LocalProblem};
use lclkit::problems::{lenient_mode, problem_by_name};
use lclkit::regtree::{decide_f, truncate, TreeAutomaton};
use lclkit::sigma_pi::{build_component, ComponentSpec};
use lclkit::solver::solve_finite_palette;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LclkitStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// JSON that does not parse or violates the schema or graph invariants.
    MalformedInput = 3,
    /// Well-formed input the operation does not accept (unknown problem,
    /// unencodable graph, empty palette, ...).
    InvalidArgument = 4,
    /// `lclkit_gadget_decode` input is not an encoded graph.
    NotInImage = 5,
    /// A panic was caught at the boundary.
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LclkitMode {
    Strict = 0,
    /// Check the truncation interior only; see `lclkit_verify`.
    Lenient = 1,
}

/// Opaque structured graph.
pub struct LclkitGraph {
    inner: StructuredGraph,
}

/// Opaque pruned tree automaton.
pub struct LclkitAutomaton {
    inner: TreeAutomaton,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(LclkitStatus, String);

impl Failure {
    fn malformed(e: impl std::fmt::Display) -> Failure {
        Failure(LclkitStatus::MalformedInput, e.to_string())
    }

    fn invalid(e: impl std::fmt::Display) -> Failure {
        Failure(LclkitStatus::InvalidArgument, e.to_string())
    }
}

impl From<GadgetError> for Failure {
    fn from(e: GadgetError) -> Failure {
        match e {
            GadgetError::NotInImage(_) => Failure(LclkitStatus::NotInImage, e.to_string()),
            GadgetError::NotStructured(_) => Failure::invalid(e),
        }
    }
}

impl From<LclError> for Failure {
    fn from(e: LclError) -> Failure {
        match e {
            LclError::ColoringNotTotal(_) | LclError::UnknownCheckedVertex(_) => {
                Failure::malformed(e)
            }
            _ => Failure::invalid(e),
        }
    }
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

/// Runs `body`, records any failure and converts it to a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> LclkitStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => LclkitStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal error");
            LclkitStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(
            LclkitStatus::NullPointer,
            "null string argument".into(),
        ));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(LclkitStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(LclkitStatus::NullPointer, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            LclkitStatus::NullPointer,
            "null out pointer".into(),
        ));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let s = CString::new(s).map_err(|e| Failure(LclkitStatus::Internal, e.to_string()))?;
    put(out, s.into_raw())
}

unsafe fn put_graph(out: *mut *mut LclkitGraph, g: StructuredGraph) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(LclkitGraph { inner: g })))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lclkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message describing the last failed call on this thread, or null. The
/// pointer stays valid until the next `lclkit_*` call on this thread.
#[no_mangle]
pub extern "C" fn lclkit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from an `lclkit_*` out parameter and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lclkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses graph JSON and validates the basic invariants.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lclkit_graph_from_json(
    json: *const c_char,
    out: *mut *mut LclkitGraph,
) -> LclkitStatus {
    guard(|| {
        let g = StructuredGraph::from_json(read_str(json)?).map_err(Failure::malformed)?;
        put_graph(out, g)
    })
}

/// Serializes a graph as pretty-printed JSON.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lclkit_graph_to_json(
    g: *const LclkitGraph,
    out: *mut *mut c_char,
) -> LclkitStatus {
    guard(|| put_string(out, deref(g)?.inner.to_json()))
}

/// Number of vertices; 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lclkit_graph_vertex_count(g: *const LclkitGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.len())
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lclkit_graph_free(g: *mut LclkitGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Parses automaton JSON; the automaton must be pruned.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lclkit_automaton_from_json(
    json: *const c_char,
    out: *mut *mut LclkitAutomaton,
) -> LclkitStatus {
    guard(|| {
        let a = TreeAutomaton::parse_pruned(read_str(json)?).map_err(Failure::malformed)?;
        put(out, Box::into_raw(Box::new(LclkitAutomaton { inner: a })))
    })
}

/// # Safety
/// `a` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lclkit_automaton_free(a: *mut LclkitAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Writes `{"kind":"in_f"}` or `{"kind":"not_in_f","stem":..,"cycle":..}`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lclkit_automaton_decide_f(
    a: *const LclkitAutomaton,
    out: *mut *mut c_char,
) -> LclkitStatus {
    guard(|| put_string(out, decide_f(&deref(a)?.inner).to_json()))
}

/// The tree of the automaton cut at `depth`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lclkit_automaton_truncate(
    a: *const LclkitAutomaton,
    depth: usize,
    out: *mut *mut LclkitGraph,
) -> LclkitStatus {
    guard(|| put_graph(out, truncate(&deref(a)?.inner, depth)))
}

/// Builds the anchored component described by `{"a0":..,"a1":..,"depth":d}`.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lclkit_component_build(
    spec_json: *const c_char,
    out: *mut *mut LclkitGraph,
) -> LclkitStatus {
    guard(|| {
        let spec = ComponentSpec::parse_json(read_str(spec_json)?).map_err(Failure::malformed)?;
        put_graph(out, build_component(&spec))
    })
}

/// Replaces every edge by its gadget.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lclkit_gadget_encode(
    g: *const LclkitGraph,
    out: *mut *mut LclkitGraph,
) -> LclkitStatus {
    guard(|| put_graph(out, encode(&deref(g)?.inner)?))
}

/// Recovers the structured graph from an encoding.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lclkit_gadget_decode(
    g: *const LclkitGraph,
    out: *mut *mut LclkitGraph,
) -> LclkitStatus {
    guard(|| put_graph(out, decode(&deref(g)?.inner)?))
}

unsafe fn setup<'a>(
    g: *const LclkitGraph,
    problem: *const c_char,
    palette: u64,
    mode: LclkitMode,
    depth: i64,
) -> Result<(&'a StructuredGraph, LocalProblem, CheckMode), Failure> {
    let g = &deref::<LclkitGraph>(g)?.inner;
    let name = read_str(problem)?;
    let palette = (palette > 0).then_some(palette);
    let p = problem_by_name(name, palette)
        .ok_or_else(|| Failure::invalid(format!("unknown problem `{name}` or missing palette")))?;
    let mode = match mode {
        LclkitMode::Strict => CheckMode::Strict,
        LclkitMode::Lenient => lenient_mode(g, usize::try_from(depth).ok())?,
    };
    Ok((g, p, mode))
}

/// Verifies a coloring (`{"colors":{..}}`) and writes `{"ok":..,"failures":[..]}`.
/// `problem` is `sigma`, `pi`, `pi-star` or `proper-k`; `palette` is the k of
/// `proper-k` (0 otherwise). In lenient mode a negative `depth` means the
/// deepest tree vertex.
///
/// # Safety
/// Pointers must be live handles or NUL-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lclkit_verify(
    g: *const LclkitGraph,
    coloring_json: *const c_char,
    problem: *const c_char,
    palette: u64,
    mode: LclkitMode,
    depth: i64,
    out: *mut *mut c_char,
) -> LclkitStatus {
    guard(|| {
        let (g, p, mode) = setup(g, problem, palette, mode, depth)?;
        let f = Coloring::from_json(read_str(coloring_json)?).map_err(Failure::malformed)?;
        let verdict = verify(g, &f, &p, &mode)?;
        put_string(out, verdict.to_json())
    })
}

/// Solves with colors `0..palette` and writes `{"result":"unsat"}` or
/// `{"result":"sat","colors":{..}}`. Other arguments as in `lclkit_verify`.
///
/// # Safety
/// Pointers must be live handles or NUL-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lclkit_solve(
    g: *const LclkitGraph,
    problem: *const c_char,
    palette: u64,
    mode: LclkitMode,
    depth: i64,
    out: *mut *mut c_char,
) -> LclkitStatus {
    guard(|| {
        let (g, p, mode) = setup(g, problem, palette, mode, depth)?;
        let outcome = solve_finite_palette(g, &p, palette, &mode)?;
        put_string(out, outcome.to_json())
    })
}
