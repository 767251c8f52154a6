//! C ABI over the `pcs` library.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns a [`PcsStatus`]; on failure the message is
//! available from [`pcs_last_error`] until the next failing call on the same
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pcs::query::{oracle, query_advanced, query_basic, query_incre, Strategy};
use pcs::{codec, fixture, CpIndex, PcsError, ProfiledGraph, ResultSet};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Io = 4,
    OutOfRange = 5,
    Format = 6,
    InvalidArgument = 7,
    OracleBound = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcsAlgorithm {
    Basic = 0,
    Incre = 1,
    AdvI = 2,
    AdvD = 3,
    AdvP = 4,
    Oracle = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PcsCounters {
    pub subtrees_generated: u64,
    pub subtrees_verified: u64,
    pub gkt_computations: u64,
    pub candidate_volume: u64,
}

/// A profiled graph.
pub struct PcsGraph(ProfiledGraph);

/// A CP-tree index.
pub struct PcsIndex(CpIndex);

/// The communities of one query.
pub struct PcsResult(ResultSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &PcsError) -> PcsStatus {
    match e {
        PcsError::Parse { .. }
        | PcsError::DanglingVertex { .. }
        | PcsError::UnknownLabel { .. }
        | PcsError::GpTree(_) => PcsStatus::Parse,
        PcsError::VertexOutOfRange { .. } | PcsError::LabelOutOfRange(_) => PcsStatus::OutOfRange,
        PcsError::Io(_) => PcsStatus::Io,
        PcsError::Format(_) | PcsError::Version { .. } | PcsError::Checksum { .. } => {
            PcsStatus::Format
        }
        PcsError::OracleBound { .. } => PcsStatus::OracleBound,
        PcsError::EmptyTreeList
        | PcsError::InvalidCut(_)
        | PcsError::UnknownAlgorithm(_)
        | PcsError::Metric(_) => PcsStatus::InvalidArgument,
    }
}

enum Fail {
    Status(PcsStatus, String),
    Pcs(PcsError),
}

impl From<PcsError> for Fail {
    fn from(e: PcsError) -> Self {
        Fail::Pcs(e)
    }
}

/// Runs `f`, converting errors and panics into a status and a message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PcsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PcsStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Fail::Pcs(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            PcsStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(PcsStatus::NullArgument, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(PcsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn pcs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a graph from the three text sources (edges, P-trees, GP-tree).
///
/// # Safety
/// The strings must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcs_graph_load(
    edges: *const c_char,
    ptrees: *const c_char,
    gptree: *const c_char,
    out: *mut *mut PcsGraph,
) -> PcsStatus {
    guard(|| {
        let g = ProfiledGraph::load(
            text(edges, "edges")?,
            text(ptrees, "ptrees")?,
            text(gptree, "gptree")?,
        )?;
        emit(out, PcsGraph(g))
    })
}

/// Loads a graph from three files.
///
/// # Safety
/// The paths must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcs_graph_load_files(
    edges_path: *const c_char,
    ptrees_path: *const c_char,
    gptree_path: *const c_char,
    out: *mut *mut PcsGraph,
) -> PcsStatus {
    guard(|| {
        let g = ProfiledGraph::load_files(
            text(edges_path, "edges_path")?,
            text(ptrees_path, "ptrees_path")?,
            text(gptree_path, "gptree_path")?,
        )?;
        emit(out, PcsGraph(g))
    })
}

/// The bundled six-vertex example graph (vertices A..F are 0..5).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcs_graph_fixture(out: *mut *mut PcsGraph) -> PcsStatus {
    guard(|| emit(out, PcsGraph(fixture::graph())))
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn pcs_graph_num_vertices(g: *const PcsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_vertices())
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn pcs_graph_num_edges(g: *const PcsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_edges())
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcs_graph_free(g: *mut PcsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Builds the CP-tree index of `g`.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcs_index_build(g: *const PcsGraph, out: *mut *mut PcsIndex) -> PcsStatus {
    guard(|| {
        let g = handle(g, "graph")?;
        emit(out, PcsIndex(CpIndex::build(&g.0)))
    })
}

/// Writes `idx` to `path` in the `.cpt` format.
///
/// # Safety
/// `idx` must be a live index handle; `path` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn pcs_index_save(idx: *const PcsIndex, path: *const c_char) -> PcsStatus {
    guard(|| {
        let idx = handle(idx, "index")?;
        codec::save(&idx.0, text(path, "path")?)?;
        Ok(())
    })
}

/// Reads a `.cpt` index file.
///
/// # Safety
/// `path` nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcs_index_load(path: *const c_char, out: *mut *mut PcsIndex) -> PcsStatus {
    guard(|| {
        let idx = codec::load(text(path, "path")?)?;
        emit(out, PcsIndex(idx))
    })
}

/// # Safety
/// `idx` must be null or a live index handle.
#[no_mangle]
pub unsafe extern "C" fn pcs_index_num_vertices(idx: *const PcsIndex) -> usize {
    idx.as_ref().map_or(0, |i| i.0.num_vertices())
}

/// # Safety
/// `idx` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcs_index_free(idx: *mut PcsIndex) {
    if !idx.is_null() {
        drop(Box::from_raw(idx));
    }
}

/// Runs one query. `basic` and `oracle` use `g` when given and otherwise
/// the graph stored in `idx`; the other algorithms need only `idx`.
///
/// # Safety
/// `idx` must be a live index handle; `g` null or a live graph handle
/// describing the same graph; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcs_query(
    idx: *const PcsIndex,
    g: *const PcsGraph,
    q: u32,
    k: u32,
    algorithm: PcsAlgorithm,
    out: *mut *mut PcsResult,
) -> PcsStatus {
    guard(|| {
        let idx = &handle(idx, "index")?.0;
        let with_graph =
            |f: &dyn Fn(&ProfiledGraph) -> pcs::Result<ResultSet>| -> Result<ResultSet, Fail> {
                match g.as_ref() {
                    Some(g) => Ok(f(&g.0)?),
                    None => Ok(f(&idx.to_graph()?)?),
                }
            };
        let r = match algorithm {
            PcsAlgorithm::Basic => with_graph(&|g| query_basic(g, q, k))?,
            PcsAlgorithm::Oracle => with_graph(&|g| oracle(g, q, k))?,
            PcsAlgorithm::Incre => query_incre(idx, q, k)?,
            PcsAlgorithm::AdvI => query_advanced(idx, q, k, Strategy::I)?,
            PcsAlgorithm::AdvD => query_advanced(idx, q, k, Strategy::D)?,
            PcsAlgorithm::AdvP => query_advanced(idx, q, k, Strategy::P)?,
        };
        emit(out, PcsResult(r))
    })
}

/// Number of communities in `r`.
///
/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn pcs_result_len(r: *const PcsResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.len())
}

/// Sorted member ids of community `i`; `*len` receives their count. The
/// array lives as long as `r`. Null when `i` is out of range.
///
/// # Safety
/// `r` must be a live result handle; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcs_result_vertices(
    r: *const PcsResult,
    i: usize,
    len: *mut usize,
) -> *const u32 {
    slice_out(r, i, len, |c| &c.vertices)
}

/// Label ids of community `i`'s maximal common subtree, ascending; `*len`
/// receives their count. Null when `i` is out of range.
///
/// # Safety
/// `r` must be a live result handle; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcs_result_mct(
    r: *const PcsResult,
    i: usize,
    len: *mut usize,
) -> *const u32 {
    slice_out(r, i, len, |c| {
        let labels = c.mct.as_slice();
        // SAFETY: LabelId is a transparent u32 wrapper.
        std::slice::from_raw_parts(labels.as_ptr().cast::<u32>(), labels.len())
    })
}

unsafe fn slice_out(
    r: *const PcsResult,
    i: usize,
    len: *mut usize,
    pick: impl Fn(&pcs::Community) -> &[u32],
) -> *const u32 {
    let Some(c) = r.as_ref().and_then(|r| r.0.communities.get(i)) else {
        if !len.is_null() {
            *len = 0;
        }
        return ptr::null();
    };
    let s = pick(c);
    if !len.is_null() {
        *len = s.len();
    }
    s.as_ptr()
}

/// # Safety
/// `r` must be a live result handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcs_result_counters(
    r: *const PcsResult,
    out: *mut PcsCounters,
) -> PcsStatus {
    guard(|| {
        let c = handle(r, "result")?.0.counters;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = PcsCounters {
            subtrees_generated: c.subtrees_generated,
            subtrees_verified: c.subtrees_verified,
            gkt_computations: c.gkt_computations,
            candidate_volume: c.candidate_volume,
        };
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcs_result_free(r: *mut PcsResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
