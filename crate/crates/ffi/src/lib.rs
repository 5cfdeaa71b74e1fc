//! C interface to `fastmix`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! [`FmStatus`]; on failure [`fm_last_error`] describes the cause.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use fastmix::chains::{
    almost_mixing_weighting, continuous_time_weighting, perfect_mixing_schedule, schedule_worst_tv,
    ChainSchedule, TargetDistribution,
};
use fastmix::conductance::{global_conductances, Measure};
use fastmix::spectral::{lazify, TransitionMatrix};
use fastmix::{diameter, generate, Error, Family, Graph};

/// Passed as `root` to let the library choose a center vertex.
pub const FM_DEFAULT_ROOT: usize = usize::MAX;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Disconnected = 4,
    Domain = 5,
    TooLarge = 6,
    /// An output buffer is shorter than required.
    BufferTooSmall = 7,
    Numerical = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmMeasure {
    Edge = 0,
    Vertex = 1,
    Matching = 2,
}

/// Conductance as the fraction `num / den`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FmConductance {
    pub num: i64,
    pub den: i64,
    pub value: f64,
    /// True when the set is a proven minimiser.
    pub exact: bool,
    pub set_len: usize,
}

pub struct FmGraph {
    graph: Graph,
}

/// A reversible transition matrix with its stationary distribution.
pub struct FmChain {
    chain: TransitionMatrix,
    gap: f64,
}

pub struct FmSchedule {
    schedule: ChainSchedule,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> FmStatus {
    match err {
        Error::Parse { .. } | Error::Json(_) => FmStatus::Parse,
        Error::Argument(_) | Error::Dimension { .. } | Error::Io(_) => FmStatus::InvalidArgument,
        Error::Disconnected(_) => FmStatus::Disconnected,
        Error::TooLarge(_) => FmStatus::TooLarge,
        Error::Singular => FmStatus::Numerical,
        Error::Domain(_)
        | Error::Infeasible { .. }
        | Error::NotReversible { .. }
        | Error::Support { .. }
        | Error::Precondition(_) => FmStatus::Domain,
    }
}

struct Failure(FmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FmStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FmStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FmStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(p: *mut T, len: usize, need: usize) -> Result<&'a mut [T], Failure> {
    if len < need {
        return Err(Failure(
            FmStatus::BufferTooSmall,
            format!("buffer holds {len}, need {need}"),
        ));
    }
    if need == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null("output buffer"));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn target(g: &Graph, pi: *const f64) -> Result<TargetDistribution, Failure> {
    Ok(if pi.is_null() {
        TargetDistribution::uniform(g.n())?
    } else {
        TargetDistribution::normalized(slice::from_raw_parts(pi, g.n()).to_vec())?
    })
}

fn root_of(root: usize) -> Option<usize> {
    (root != FM_DEFAULT_ROOT).then_some(root)
}

fn boxed<T>(out: &mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn fm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Graph on `n` vertices from `m` edges stored as `2m` endpoint ids.
///
/// # Safety
/// `edges` must point to `2 * m` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fm_graph_new(
    n: usize,
    edges: *const usize,
    m: usize,
    out: *mut *mut FmGraph,
) -> FmStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let flat = input(edges, 2 * m, "edges")?;
        let graph = Graph::new(n, flat.chunks_exact(2).map(|c| (c[0], c[1])))?;
        boxed(out, FmGraph { graph });
        Ok(())
    })
}

/// Graph from the edge-list text format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fm_graph_parse(
    text_in: *const c_char,
    out: *mut *mut FmGraph,
) -> FmStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let graph = Graph::from_edge_list(text(text_in, "text")?)?;
        boxed(out, FmGraph { graph });
        Ok(())
    })
}

/// Member of a named family. `binary_tree` reads its depth from `n`;
/// `clique_source` needs `k > 0`, other families ignore `k`.
///
/// # Safety
/// `family` must be a nul-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fm_graph_generate(
    family: *const c_char,
    n: usize,
    k: usize,
    out: *mut *mut FmGraph,
) -> FmStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let name = text(family, "family")?;
        let fam = Family::from_name(name, Some(n), (k > 0).then_some(k), None)?;
        let graph = generate(fam)?;
        boxed(out, FmGraph { graph });
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fm_graph_free(g: *mut FmGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fm_graph_vertex_count(g: *const FmGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.n())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fm_graph_edge_count(g: *const FmGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.m())
}

/// Copies the edges as `2m` endpoint ids in the library's edge order.
///
/// # Safety
/// `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn fm_graph_edges(
    g: *const FmGraph,
    buf: *mut usize,
    len: usize,
) -> FmStatus {
    guard(|| {
        let g = &deref(g, "graph")?.graph;
        let dst = output(buf, len, 2 * g.m())?;
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            dst[2 * i] = u;
            dst[2 * i + 1] = v;
        }
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fm_graph_diameter(g: *const FmGraph, out: *mut usize) -> FmStatus {
    guard(|| {
        let g = &deref(g, "graph")?.graph;
        *out_ref(out, "out")? = diameter(g)?;
        Ok(())
    })
}

/// Global conductance of `which`, exact up to the enumeration limits and a
/// heuristic certificate beyond them. When `set` is non-null the minimising
/// set is copied into it; `set_cap` must then be at least `out->set_len`.
///
/// # Safety
/// `g` must be a live handle, `out` writable, and `set` null or `set_cap`
/// writable values.
#[no_mangle]
pub unsafe extern "C" fn fm_conductance(
    g: *const FmGraph,
    which: FmMeasure,
    out: *mut FmConductance,
    set: *mut usize,
    set_cap: usize,
) -> FmStatus {
    guard(|| {
        let g = &deref(g, "graph")?.graph;
        let out = out_ref(out, "out")?;
        let measure = match which {
            FmMeasure::Edge => Measure::Edge,
            FmMeasure::Vertex => Measure::Vertex,
            FmMeasure::Matching => Measure::Matching,
        };
        let cert = global_conductances(g, measure, None)?;
        let r = cert.value(measure);
        *out = FmConductance {
            num: *r.numer(),
            den: *r.denom(),
            value: *r.numer() as f64 / *r.denom() as f64,
            exact: cert.exact,
            set_len: cert.set.len(),
        };
        if !set.is_null() {
            output(set, set_cap, cert.set.len())?[..cert.set.len()].copy_from_slice(&cert.set);
        }
        Ok(())
    })
}

/// Lazy chain with stationary distribution `pi` (null for uniform; positive
/// weights, rescaled) whose gap is at least `epsilon / (48 diam²)`.
///
/// # Safety
/// `g` must be a live handle, `pi` null or `n` readable values, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fm_build_almost_mix(
    g: *const FmGraph,
    pi: *const f64,
    epsilon: f64,
    root: usize,
    out: *mut *mut FmChain,
) -> FmStatus {
    guard(|| {
        let g = &deref(g, "graph")?.graph;
        let out = out_ref(out, "out")?;
        let pi = target(g, pi)?;
        let report = almost_mixing_weighting(g, &pi, epsilon, None, root_of(root))?;
        if let Some(v) = report.check().into_iter().next() {
            return Err(Failure(FmStatus::Numerical, v));
        }
        let chain = lazify(&report.chain()?);
        boxed(
            out,
            FmChain {
                chain,
                gap: report.gap,
            },
        );
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a live chain handle.
#[no_mangle]
pub unsafe extern "C" fn fm_chain_free(c: *mut FmChain) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of states, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fm_chain_size(c: *const FmChain) -> usize {
    c.as_ref().map_or(0, |c| c.chain.n())
}

/// Spectral gap of the chain, or NaN for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fm_chain_gap(c: *const FmChain) -> f64 {
    c.as_ref().map_or(f64::NAN, |c| c.gap)
}

/// Copies the transition matrix row-major into `buf` (`n²` values) and, if
/// `pi` is non-null, the stationary distribution (`n` values).
///
/// # Safety
/// `buf` must hold `len` writable values and `pi` be null or `n` writable.
#[no_mangle]
pub unsafe extern "C" fn fm_chain_matrix(
    c: *const FmChain,
    buf: *mut f64,
    len: usize,
    pi: *mut f64,
) -> FmStatus {
    guard(|| {
        let chain = &deref(c, "chain")?.chain;
        let n = chain.n();
        let dst = output(buf, len, n * n)?;
        for i in 0..n {
            for j in 0..n {
                dst[i * n + j] = chain.get(i, j);
            }
        }
        if !pi.is_null() {
            slice::from_raw_parts_mut(pi, n).copy_from_slice(chain.pi());
        }
        Ok(())
    })
}

/// Continuous-time tree rates, one per edge in [`fm_graph_edges`] order
/// (zero off the tree). `max_hitting` receives the largest expected hitting
/// time of the root; it may be null.
///
/// # Safety
/// `g` must be a live handle, `rates` hold `len` writable values and
/// `max_hitting` be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fm_build_continuous(
    g: *const FmGraph,
    root: usize,
    rates: *mut f64,
    len: usize,
    max_hitting: *mut f64,
) -> FmStatus {
    guard(|| {
        let g = &deref(g, "graph")?.graph;
        let dst = output(rates, len, g.m())?;
        let report = continuous_time_weighting(g, root_of(root))?;
        if let Some(v) = report.check().into_iter().next() {
            return Err(Failure(FmStatus::Numerical, v));
        }
        dst[..g.m()].copy_from_slice(report.weighting.edge_weights());
        if let Some(h) = max_hitting.as_mut() {
            *h = report.max_hitting_time;
        }
        Ok(())
    })
}

/// Finite schedule of chains that maps every start to `pi` exactly.
///
/// # Safety
/// `g` must be a live handle, `pi` null or `n` readable values, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fm_build_schedule(
    g: *const FmGraph,
    pi: *const f64,
    root: usize,
    out: *mut *mut FmSchedule,
) -> FmStatus {
    guard(|| {
        let g = &deref(g, "graph")?.graph;
        let out = out_ref(out, "out")?;
        let pi = target(g, pi)?;
        let schedule = perfect_mixing_schedule(g, &pi, root_of(root))?;
        boxed(out, FmSchedule { schedule });
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a live schedule handle.
#[no_mangle]
pub unsafe extern "C" fn fm_schedule_free(s: *mut FmSchedule) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of steps, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fm_schedule_len(s: *const FmSchedule) -> usize {
    s.as_ref().map_or(0, |s| s.schedule.len())
}

/// Copies step `k` row-major into `buf` (`n²` values).
///
/// # Safety
/// `buf` must hold `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn fm_schedule_step(
    s: *const FmSchedule,
    k: usize,
    buf: *mut f64,
    len: usize,
) -> FmStatus {
    guard(|| {
        let s = &deref(s, "schedule")?.schedule;
        let step = s.steps.get(k).ok_or_else(|| {
            Failure(
                FmStatus::InvalidArgument,
                format!("step {k} of {}", s.len()),
            )
        })?;
        let n = step.n();
        let dst = output(buf, len, n * n)?;
        for i in 0..n {
            for j in 0..n {
                dst[i * n + j] = step.get(i, j);
            }
        }
        Ok(())
    })
}

/// Largest total-variation distance to the target after the whole schedule.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fm_schedule_worst_tv(s: *const FmSchedule, out: *mut f64) -> FmStatus {
    guard(|| {
        let s = &deref(s, "schedule")?.schedule;
        *out_ref(out, "out")? = schedule_worst_tv(s)?;
        Ok(())
    })
}
