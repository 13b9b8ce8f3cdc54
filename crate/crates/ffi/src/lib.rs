//! C ABI for `rainbow-core`.
//!
//! Every function returns an [`RbStatus`]; values come back through out
//! pointers. Objects are opaque handles released with their `_free`
//! function. On failure, [`rb_last_error`] describes the error on the
//! calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rainbow_core::coloring::{self, ColoredGraph};
use rainbow_core::exact::{self, HamiltonianSearch, SearchLimits};
use rainbow_core::heuristics::{self, SolveReport};
use rainbow_core::paths::Path;
use rainbow_core::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    SizeCap = 4,
    BoundViolated = 5,
    BudgetExhausted = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbMethod {
    Greedy = 0,
    Maximalize = 1,
    Ladder = 2,
    Naive = 3,
    Exact = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbHamiltonian {
    Exists = 0,
    NotExists = 1,
    Unknown = 2,
}

/// A properly edge-colored complete graph.
pub struct RbGraph {
    inner: ColoredGraph,
}

/// The result of a solver run.
pub struct RbReport {
    report: SolveReport,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> RbStatus {
    match e {
        Error::SizeCap { .. } => RbStatus::SizeCap,
        Error::Parse { .. } => RbStatus::Parse,
        Error::BoundViolated { .. } => RbStatus::BoundViolated,
        _ => RbStatus::InvalidArgument,
    }
}

fn fail(status: RbStatus, msg: impl Into<String>) -> RbStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> RbStatus) -> RbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(RbStatus::Panic, "internal panic"),
    }
}

fn core<T>(r: rainbow_core::Result<T>) -> Result<T, RbStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn graph<'a>(g: *const RbGraph) -> Result<&'a ColoredGraph, RbStatus> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| fail(RbStatus::NullPointer, "null graph"))
}

unsafe fn report<'a>(r: *const RbReport) -> Result<&'a RbReport, RbStatus> {
    r.as_ref().ok_or_else(|| fail(RbStatus::NullPointer, "null report"))
}

unsafe fn put<T>(out: *mut T, value: T) -> RbStatus {
    if out.is_null() {
        return fail(RbStatus::NullPointer, "null out pointer");
    }
    out.write(value);
    RbStatus::Ok
}

fn run(f: impl FnOnce() -> Result<RbStatus, RbStatus>) -> RbStatus {
    guard(|| f().unwrap_or_else(|s| s))
}

unsafe fn put_graph(out: *mut *mut RbGraph, g: rainbow_core::Result<ColoredGraph>) -> Result<RbStatus, RbStatus> {
    if out.is_null() {
        return Err(fail(RbStatus::NullPointer, "null out pointer"));
    }
    let g = core(g)?;
    out.write(Box::into_raw(Box::new(RbGraph { inner: g })));
    Ok(RbStatus::Ok)
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// XOR coloring on `2^m` vertices.
#[no_mangle]
pub unsafe extern "C" fn rb_graph_mm(m: u32, out: *mut *mut RbGraph) -> RbStatus {
    run(|| put_graph(out, coloring::mm_coloring(m)))
}

/// Round-robin coloring on an even number of vertices.
#[no_mangle]
pub unsafe extern "C" fn rb_graph_round_robin(n: usize, out: *mut *mut RbGraph) -> RbStatus {
    run(|| put_graph(out, coloring::round_robin_coloring(n)))
}

#[no_mangle]
pub unsafe extern "C" fn rb_graph_random(n: usize, seed: u64, out: *mut *mut RbGraph) -> RbStatus {
    run(|| put_graph(out, coloring::random_proper_coloring(n, seed)))
}

/// Parses the edge-list text format.
#[no_mangle]
pub unsafe extern "C" fn rb_graph_from_text(text: *const c_char, out: *mut *mut RbGraph) -> RbStatus {
    run(|| {
        if text.is_null() {
            return Err(fail(RbStatus::NullPointer, "null text"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| fail(RbStatus::Parse, "text is not UTF-8"))?;
        put_graph(out, coloring::read_coloring(s))
    })
}

/// Writes the edge-list text format. Free the result with [`rb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rb_graph_to_text(g: *const RbGraph, out: *mut *mut c_char) -> RbStatus {
    run(|| {
        let g = graph(g)?;
        let s = CString::new(coloring::write_coloring(g)).map_err(|_| fail(RbStatus::Panic, "nul in text"))?;
        Ok(put(out, s.into_raw()))
    })
}

#[no_mangle]
pub unsafe extern "C" fn rb_graph_free(g: *mut RbGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

#[no_mangle]
pub unsafe extern "C" fn rb_graph_n(g: *const RbGraph, out: *mut usize) -> RbStatus {
    run(|| Ok(put(out, graph(g)?.n())))
}

#[no_mangle]
pub unsafe extern "C" fn rb_graph_palette_len(g: *const RbGraph, out: *mut usize) -> RbStatus {
    run(|| Ok(put(out, graph(g)?.palette_len())))
}

/// Color of edge `uv` (`u != v`).
#[no_mangle]
pub unsafe extern "C" fn rb_graph_color(g: *const RbGraph, u: usize, v: usize, out: *mut u32) -> RbStatus {
    run(|| {
        let g = graph(g)?;
        if u >= g.n() || v >= g.n() || u == v {
            return Err(fail(RbStatus::InvalidArgument, format!("no edge ({u}, {v})")));
        }
        Ok(put(out, g.color(u, v).get()))
    })
}

/// Runs a solver. `start` is used by greedy, maximalize and naive. For
/// `Ladder` the report is the last rung. For `Exact`, a nonzero
/// `node_budget` caps the search; an incomplete search still returns a
/// report and the status `BudgetExhausted`.
#[no_mangle]
pub unsafe extern "C" fn rb_solve(
    g: *const RbGraph,
    method: RbMethod,
    k: u32,
    start: usize,
    node_budget: u64,
    out: *mut *mut RbReport,
) -> RbStatus {
    run(|| {
        let g = graph(g)?;
        if out.is_null() {
            return Err(fail(RbStatus::NullPointer, "null out pointer"));
        }
        if start >= g.n() {
            return Err(fail(RbStatus::InvalidArgument, format!("start vertex {start} out of range")));
        }
        let r = match method {
            RbMethod::Greedy => core(heuristics::greedy_extend(g, start, k))?,
            RbMethod::Maximalize => core(heuristics::maximalize(g, &Path::single(start), k))?,
            RbMethod::Naive => core(heuristics::naive_recursive(g, k, start))?,
            RbMethod::Ladder => core(heuristics::ladder(g, k))?.pop().expect("k >= 1 rungs"),
            RbMethod::Exact => {
                let limits = SearchLimits { node_budget: (node_budget > 0).then_some(node_budget), ..Default::default() };
                core(core(exact::max_k_rainbow_path_exact(g, k, &limits))?.into_report(g, k))?
            }
        };
        let json = serde_json::to_string(&r.to_record(g)).map_err(|e| fail(RbStatus::Panic, e.to_string()))?;
        let json = CString::new(json).map_err(|_| fail(RbStatus::Panic, "nul in json"))?;
        let status = if r.exhaustive == Some(false) {
            set_error("exact search stopped at its node budget");
            RbStatus::BudgetExhausted
        } else {
            RbStatus::Ok
        };
        out.write(Box::into_raw(Box::new(RbReport { report: r, json })));
        Ok(status)
    })
}

#[no_mangle]
pub unsafe extern "C" fn rb_report_free(r: *mut RbReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of vertices on the reported path.
#[no_mangle]
pub unsafe extern "C" fn rb_report_len(r: *const RbReport, out: *mut usize) -> RbStatus {
    run(|| Ok(put(out, report(r)?.report.len())))
}

/// Copies up to `cap` path vertices into `buf`; `written` receives the
/// full length. Pass a null `buf` to query the length only.
#[no_mangle]
pub unsafe extern "C" fn rb_report_vertices(
    r: *const RbReport,
    buf: *mut usize,
    cap: usize,
    written: *mut usize,
) -> RbStatus {
    run(|| {
        let v = report(r)?.report.path.vertices();
        if !buf.is_null() {
            ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len().min(cap));
        }
        Ok(put(written, v.len()))
    })
}

/// The guaranteed bound as a reduced fraction.
#[no_mangle]
pub unsafe extern "C" fn rb_report_bound(r: *const RbReport, num: *mut i64, den: *mut i64) -> RbStatus {
    run(|| {
        let b = report(r)?.report.guaranteed_bound;
        if num.is_null() || den.is_null() {
            return Err(fail(RbStatus::NullPointer, "null out pointer"));
        }
        let (Ok(n), Ok(d)) = (i64::try_from(*b.numer()), i64::try_from(*b.denom())) else {
            return Err(fail(RbStatus::InvalidArgument, "bound does not fit in 64 bits"));
        };
        num.write(n);
        den.write(d);
        Ok(RbStatus::Ok)
    })
}

/// The report as JSON. The string is owned by the report.
#[no_mangle]
pub unsafe extern "C" fn rb_report_json(r: *const RbReport) -> *const c_char {
    match r.as_ref() {
        Some(r) => r.json.as_ptr(),
        None => {
            set_error("null report");
            ptr::null()
        }
    }
}

#[no_mangle]
pub unsafe extern "C" fn rb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact Hamiltonian rainbow path check. `node_budget` of zero means
/// unlimited, which is refused above the default vertex cap.
#[no_mangle]
pub unsafe extern "C" fn rb_has_hamiltonian_rainbow_path(
    g: *const RbGraph,
    node_budget: u64,
    out: *mut RbHamiltonian,
) -> RbStatus {
    run(|| {
        let g = graph(g)?;
        let limits = SearchLimits { node_budget: (node_budget > 0).then_some(node_budget), ..Default::default() };
        let answer = match core(exact::has_hamiltonian_rainbow_path(g, &limits))? {
            HamiltonianSearch::Exists(_) => RbHamiltonian::Exists,
            HamiltonianSearch::NotExists => RbHamiltonian::NotExists,
            HamiltonianSearch::BudgetExhausted => RbHamiltonian::Unknown,
        };
        let status = put(out, answer);
        if status == RbStatus::Ok && answer == RbHamiltonian::Unknown {
            set_error("hamiltonian search stopped at its node budget");
            return Ok(RbStatus::BudgetExhausted);
        }
        Ok(status)
    })
}
