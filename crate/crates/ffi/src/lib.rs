//! C ABI over `majperc`.
//!
//! Graphs are opaque handles created by `majperc_*_new` and released with
//! [`majperc_graph_free`]. Every fallible call returns a [`MajpercStatus`];
//! on failure, [`majperc_last_error`] describes the most recent error on the
//! calling thread. Activation states cross the boundary as one byte per
//! vertex, nonzero meaning active, with vertex `(x, y)` at index `y * n + x`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use majperc::harness::Instance;
use majperc::matchings::{deterministic_admissible, sample_admissible, AugmentedGraph};
use majperc::theory::{critical_prob, wheel_pplus};
use majperc::{engine, ActivationState, Error, Graph, Lattice, Rule};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MajpercStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Inadmissible = 3,
    SamplingFailed = 4,
    BufferTooSmall = 5,
    Internal = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MajpercRuleKind {
    /// Activate with at least `ceil((deg + param) / 2)` active neighbours.
    Majority = 0,
    /// Activate with at least `param` active neighbours.
    Neighbour = 1,
}

/// Opaque graph handle.
pub struct MajpercGraph {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MajpercStatus {
    match e {
        Error::InvalidParameter(_)
        | Error::WrappedNeighbourhood { .. }
        | Error::InvalidGraph(_) => MajpercStatus::InvalidArgument,
        Error::Inadmissible(_) | Error::MatchingConstruction(_) => MajpercStatus::Inadmissible,
        Error::SamplingFailed { .. } => MajpercStatus::SamplingFailed,
        _ => MajpercStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (MajpercStatus, String)>) -> MajpercStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MajpercStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside majperc");
            MajpercStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (MajpercStatus, String)>;
}

impl<T> IntoFfi<T> for majperc::Result<T> {
    fn ffi(self) -> Result<T, (MajpercStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (MajpercStatus, String) {
    (MajpercStatus::NullPointer, format!("{what} is null"))
}

fn boxed(out: *mut *mut MajpercGraph, inner: Instance) -> Result<(), (MajpercStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let h = Box::into_raw(Box::new(MajpercGraph { inner }));
    // SAFETY: `out` is non-null and the caller guarantees it is writable.
    unsafe { *out = h };
    Ok(())
}

fn graph<'a>(g: *const MajpercGraph) -> Result<&'a MajpercGraph, (MajpercStatus, String)> {
    // SAFETY: non-null handles come from `boxed` and live until freed.
    unsafe { g.as_ref() }.ok_or_else(|| null("graph"))
}

/// Creates `L(n, k)`.
///
/// # Safety
///
/// Pointer arguments are null or valid for the reads and writes the call performs.
#[no_mangle]
pub unsafe extern "C" fn majperc_lattice_new(
    n: u32,
    k: u32,
    out: *mut *mut MajpercGraph,
) -> MajpercStatus {
    guard(|| {
        let lat = Lattice::stencil(n, k).ffi()?;
        boxed(out, Instance::Lattice(lat))
    })
}

/// Creates `L*(n, k, r)` with either the cyclic matching construction or a
/// tuple sampled from `seed`.
///
/// # Safety
///
/// Pointer arguments are null or valid for the reads and writes the call performs.
#[no_mangle]
pub unsafe extern "C" fn majperc_augmented_new(
    n: u32,
    k: u32,
    r: u32,
    seed: u64,
    deterministic: bool,
    out: *mut *mut MajpercGraph,
) -> MajpercStatus {
    guard(|| {
        let lat = Lattice::stencil(n, k).ffi()?;
        let m = if deterministic {
            deterministic_admissible(n, k, r as usize)
        } else {
            sample_admissible(n, k, r as usize, seed)
        }
        .ffi()?;
        let g = AugmentedGraph::new(lat, m).ffi()?;
        boxed(out, Instance::Star(g))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
///
/// `g` is null or a live handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn majperc_graph_free(g: *mut MajpercGraph) {
    if !g.is_null() {
        // SAFETY: `g` was produced by `Box::into_raw` in `boxed`.
        drop(unsafe { Box::from_raw(g) });
    }
}

fn with_graph<T>(g: &MajpercGraph, f: impl FnOnce(&dyn DynGraph) -> T) -> T {
    match &g.inner {
        Instance::Lattice(l) => f(l),
        Instance::Star(s) => f(s),
    }
}

trait DynGraph {
    fn vertices(&self) -> usize;
    fn regular(&self) -> Option<usize>;
    fn neighbours_of(&self, v: usize) -> Vec<usize>;
}

impl<G: Graph> DynGraph for G {
    fn vertices(&self) -> usize {
        self.num_vertices()
    }

    fn regular(&self) -> Option<usize> {
        self.regular_degree()
    }

    fn neighbours_of(&self, v: usize) -> Vec<usize> {
        self.neighbours(v)
    }
}

/// # Safety
///
/// Pointer arguments are null or valid for the reads and writes the call performs.
#[no_mangle]
pub unsafe extern "C" fn majperc_graph_num_vertices(
    g: *const MajpercGraph,
    out: *mut usize,
) -> MajpercStatus {
    guard(|| {
        let g = graph(g)?;
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: checked non-null above.
        unsafe { *out = with_graph(g, |d| d.vertices()) };
        Ok(())
    })
}

/// # Safety
///
/// Pointer arguments are null or valid for the reads and writes the call performs.
#[no_mangle]
pub unsafe extern "C" fn majperc_graph_degree(
    g: *const MajpercGraph,
    out: *mut u32,
) -> MajpercStatus {
    guard(|| {
        let g = graph(g)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = with_graph(g, |d| d.regular())
            .ok_or((MajpercStatus::Internal, "graph is not regular".to_string()))?;
        // SAFETY: checked non-null above.
        unsafe { *out = d as u32 };
        Ok(())
    })
}

/// Writes the neighbours of `v` into `buf` (capacity `cap`) and their count
/// into `len`. Returns `BUFFER_TOO_SMALL` with `len` set when `cap` is
/// insufficient.
///
/// # Safety
///
/// Pointer arguments are null or valid for the reads and writes the call performs.
#[no_mangle]
pub unsafe extern "C" fn majperc_graph_neighbours(
    g: *const MajpercGraph,
    v: usize,
    buf: *mut u32,
    cap: usize,
    len: *mut usize,
) -> MajpercStatus {
    guard(|| {
        let g = graph(g)?;
        if len.is_null() {
            return Err(null("len"));
        }
        let nv = with_graph(g, |d| d.vertices());
        if v >= nv {
            return Err((
                MajpercStatus::InvalidArgument,
                format!("vertex {v} out of range"),
            ));
        }
        let list = with_graph(g, |d| d.neighbours_of(v));
        // SAFETY: checked non-null above.
        unsafe { *len = list.len() };
        if list.len() > cap {
            return Err((
                MajpercStatus::BufferTooSmall,
                format!("need {} slots", list.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        for (i, u) in list.into_iter().enumerate() {
            // SAFETY: `buf` holds at least `cap >= list.len()` elements.
            unsafe { *buf.add(i) = u as u32 };
        }
        Ok(())
    })
}

fn read_state(ptr: *const u8, len: usize) -> Result<ActivationState, (MajpercStatus, String)> {
    if ptr.is_null() {
        return Err(null("initial"));
    }
    // SAFETY: the caller provides `len` readable bytes.
    let bytes = unsafe { std::slice::from_raw_parts(ptr, len) };
    Ok(ActivationState::from_active(
        len,
        bytes
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(i, _)| i),
    ))
}

fn write_state(state: &ActivationState, out: *mut u8) {
    for i in 0..state.len() {
        // SAFETY: `out` holds `state.len()` writable bytes.
        unsafe { *out.add(i) = u8::from(state.is_active(i)) };
    }
}

/// Each vertex active independently with probability `p`, as one byte per
/// vertex into `out` (length `n_vertices`).
///
/// # Safety
///
/// Pointer arguments are null or valid for the reads and writes the call performs.
#[no_mangle]
pub unsafe extern "C" fn majperc_random_initial(
    n_vertices: usize,
    p: f64,
    seed: u64,
    out: *mut u8,
) -> MajpercStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = engine::random_initial(n_vertices, p, seed).ffi()?;
        write_state(&s, out);
        Ok(())
    })
}

/// Runs the process to its final state. `initial` and `final_state` hold
/// `len` bytes, which must equal the vertex count; `rounds` and
/// `disseminated` may be null.
///
/// # Safety
///
/// Pointer arguments are null or valid for the reads and writes the call performs.
#[no_mangle]
pub unsafe extern "C" fn majperc_run(
    g: *const MajpercGraph,
    kind: MajpercRuleKind,
    param: u32,
    initial: *const u8,
    len: usize,
    final_state: *mut u8,
    rounds: *mut u32,
    disseminated: *mut bool,
) -> MajpercStatus {
    guard(|| {
        let g = graph(g)?;
        let nv = with_graph(g, |d| d.vertices());
        if len != nv {
            return Err((
                MajpercStatus::InvalidArgument,
                format!("state has {len} entries, graph has {nv} vertices"),
            ));
        }
        if final_state.is_null() {
            return Err(null("final_state"));
        }
        let rule = match kind {
            MajpercRuleKind::Majority => Rule::majority(param),
            MajpercRuleKind::Neighbour => Rule::neighbour(param).ffi()?,
        };
        let init = read_state(initial, len)?;
        let fin = g.inner.run(rule, &init);
        write_state(&fin.state, final_state);
        // SAFETY: optional outputs are written only when non-null.
        unsafe {
            if let Some(r) = rounds.as_mut() {
                *r = fin.rounds;
            }
            if let Some(d) = disseminated.as_mut() {
                *d = fin.disseminated;
            }
        }
        Ok(())
    })
}

/// The strict-majority critical probability of random `d`-regular graphs.
///
/// # Safety
///
/// Pointer arguments are null or valid for the reads and writes the call performs.
#[no_mangle]
pub unsafe extern "C" fn majperc_critical_prob(d: u32, out: *mut f64) -> MajpercStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = critical_prob(d).ffi()?;
        // SAFETY: checked non-null above.
        unsafe { *out = r.p_tilde };
        Ok(())
    })
}

/// Root of `x + x^2 - x^3 = 1/2` in `[0, 1]`.
#[no_mangle]
pub extern "C" fn majperc_wheel_pplus() -> f64 {
    wheel_pplus()
}

/// The matching tuple of an augmented graph as a JSON document. Free the
/// string with [`majperc_string_free`].
///
/// # Safety
///
/// Pointer arguments are null or valid for the reads and writes the call performs.
#[no_mangle]
pub unsafe extern "C" fn majperc_graph_matchings_json(
    g: *const MajpercGraph,
    out: *mut *mut c_char,
) -> MajpercStatus {
    guard(|| {
        let g = graph(g)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let Instance::Star(s) = &g.inner else {
            return Err((
                MajpercStatus::InvalidArgument,
                "graph has no matchings".into(),
            ));
        };
        let text = serde_json::to_string(&s.matchings().to_document())
            .map_err(|e| (MajpercStatus::Internal, e.to_string()))?;
        let c = CString::new(text).map_err(|e| (MajpercStatus::Internal, e.to_string()))?;
        // SAFETY: checked non-null above.
        unsafe { *out = c.into_raw() };
        Ok(())
    })
}

/// # Safety
///
/// `s` is null or a string from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn majperc_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: `s` came from `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message for the last failed call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn majperc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
