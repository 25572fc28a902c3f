//! C interface to `beta_ensemble`.
//!
//! Every fallible function returns a [`BeStatus`] and writes its result
//! through out-pointers. On failure a description is kept per thread and
//! can be read with [`be_last_error_message`]. Handles are opaque and must
//! be released with their `_free` function; passing null to a `_free`
//! function is allowed.
//!
//! Array outputs follow one convention: the caller passes a buffer and its
//! capacity (in elements), the function always writes the required length
//! to `*len`, and returns `BE_STATUS_BUFFER_TOO_SMALL` without writing data
//! when the capacity is short. A null buffer with capacity 0 queries the
//! length.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use beta_ensemble::distributions::{
    digamma, expected_neg_x2log, sym_beta_moments, theta_moments, SymBetaParam, ThetaParam,
};
use beta_ensemble::ensembles::{count_in_arc, count_jacobi, points_from_path, EnsembleKind, EnsembleSpec};
use beta_ensemble::prufer::VerblunskyPath;
use beta_ensemble::rng::{mix64, stream};
use beta_ensemble::statistics::{run_fluctuation_experiment, summarize, FluctuationSample, Normalization};
use beta_ensemble::Error;

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

pub const BE_NORMALIZATION_THEOREM: u32 = 0;
pub const BE_NORMALIZATION_SECTION4: u32 = 1;

/// Raw moments and variance of a symmetric Beta law on (-1, 1).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BeSymBetaMoments {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub var: f64,
}

/// An ensemble specification.
pub struct BeEnsemble {
    spec: EnsembleSpec,
}

/// One coefficient path together with the ensemble it was drawn from.
pub struct BePath {
    spec: EnsembleSpec,
    path: VerblunskyPath,
}

/// The per-trial output of a fluctuation experiment.
pub struct BeFluctuations {
    sample: FluctuationSample,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> BeStatus {
    match e {
        Error::ParameterOutOfRange { .. } | Error::Config(_) | Error::InsufficientData { .. } => {
            BeStatus::InvalidArgument
        }
        Error::Domain(_) => BeStatus::Domain,
        Error::Degenerate(_)
        | Error::BracketFailure { .. }
        | Error::HistoryMissing
        | Error::QuadratureNonconvergence { .. } => BeStatus::Numerical,
    }
}

struct Fail(BeStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(BeStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BeStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BeStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            BeStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Copies `data` into `(buf, cap)` and reports the length.
unsafe fn write_array<T: Copy>(data: &[T], buf: *mut T, cap: usize, len: *mut usize) -> Result<(), Fail> {
    *out(len, "len")? = data.len();
    if data.is_empty() {
        return Ok(());
    }
    if cap < data.len() {
        return Err(Fail(
            BeStatus::BufferTooSmall,
            format!("buffer holds {cap} elements, {} needed", data.len()),
        ));
    }
    if buf.is_null() {
        return Err(null("buf"));
    }
    ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
    Ok(())
}

fn box_out<T>(value: T, dst: *mut *mut T) -> Result<(), Fail> {
    // SAFETY: checked non-null; caller owns the slot.
    let slot = unsafe { out(dst, "out")? };
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn be_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn be_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}

/// Seed of the random stream `index` under master seed `seed`.
#[no_mangle]
pub extern "C" fn be_mix64(seed: u64, index: u64) -> u64 {
    mix64(seed, index)
}

/// `E|X|²` and `E|X|⁴` for `X ~ Θ_ν`.
///
/// # Safety
/// `m2` and `m4` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_theta_moments(nu: f64, m2: *mut f64, m4: *mut f64) -> BeStatus {
    guard(|| {
        let m = theta_moments(ThetaParam::new(nu)?);
        *out(m2, "m2")? = m.m2;
        *out(m4, "m4")? = m.m4;
        Ok(())
    })
}

/// Moments of the symmetric Beta law `B(s, t)`.
///
/// # Safety
/// `moments` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_sym_beta_moments(s: f64, t: f64, moments: *mut BeSymBetaMoments) -> BeStatus {
    guard(|| {
        let m = sym_beta_moments(SymBetaParam::new(s, t)?);
        *out(moments, "moments")? = BeSymBetaMoments {
            m1: m.m1,
            m2: m.m2,
            m3: m.m3,
            m4: m.m4,
            var: m.var,
        };
        Ok(())
    })
}

/// `E[-X² log((1 - X)(1 + X))]` for `X ~ B(s, t)`, in closed form.
///
/// # Safety
/// `value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_expected_neg_x2log(s: f64, t: f64, value: *mut f64) -> BeStatus {
    guard(|| {
        *out(value, "value")? = expected_neg_x2log(SymBetaParam::new(s, t)?);
        Ok(())
    })
}

/// The digamma function.
///
/// # Safety
/// `value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_digamma(x: f64, value: *mut f64) -> BeStatus {
    guard(|| {
        *out(value, "value")? = digamma(x)?;
        Ok(())
    })
}

/// A circular ensemble of `n` points.
///
/// # Safety
/// `ensemble` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_ensemble_circular_new(n: usize, beta: f64, ensemble: *mut *mut BeEnsemble) -> BeStatus {
    guard(|| box_out(BeEnsemble { spec: EnsembleSpec::circular(n, beta)? }, ensemble))
}

/// A Jacobi ensemble of `n` points with edge exponents `a` (at 2) and `b`
/// (at -2).
///
/// # Safety
/// `ensemble` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_ensemble_jacobi_new(
    n: usize,
    beta: f64,
    a: f64,
    b: f64,
    ensemble: *mut *mut BeEnsemble,
) -> BeStatus {
    guard(|| box_out(BeEnsemble { spec: EnsembleSpec::jacobi(n, beta, a, b)? }, ensemble))
}

/// # Safety
/// `ensemble` must be null or come from a `be_ensemble_*_new` call and not
/// have been freed.
#[no_mangle]
pub unsafe extern "C" fn be_ensemble_free(ensemble: *mut BeEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

/// Draws a coefficient path from random stream `index` of `seed`, the same
/// stream trial `index` of a fluctuation run uses.
///
/// # Safety
/// `ensemble` must be a live handle and `path` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_path_draw(
    ensemble: *const BeEnsemble,
    seed: u64,
    index: u64,
    path: *mut *mut BePath,
) -> BeStatus {
    guard(|| {
        let spec = handle(ensemble, "ensemble")?.spec;
        let drawn = spec.draw_path(&mut stream(seed, index))?;
        box_out(BePath { spec, path: drawn }, path)
    })
}

/// # Safety
/// `path` must be null or a live handle from [`be_path_draw`].
#[no_mangle]
pub unsafe extern "C" fn be_path_free(path: *mut BePath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Number of coefficients in the path.
///
/// # Safety
/// `path` must be a live handle and `len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_path_len(path: *const BePath, len: *mut usize) -> BeStatus {
    guard(|| {
        *out(len, "len")? = handle(path, "path")?.path.len();
        Ok(())
    })
}

/// Points of a circular path in the arc `(lo, hi]`.
///
/// # Safety
/// `path` must be a live handle and `count` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_path_count_arc(path: *const BePath, lo: f64, hi: f64, count: *mut usize) -> BeStatus {
    guard(|| {
        let p = handle(path, "path")?;
        *out(count, "count")? = count_in_arc(&p.path, lo, hi)?.count;
        Ok(())
    })
}

/// Points of a Jacobi path in `[2 cos θ, 2]`.
///
/// # Safety
/// `path` must be a live handle and `count` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_path_count_cap(path: *const BePath, theta: f64, count: *mut usize) -> BeStatus {
    guard(|| {
        let p = handle(path, "path")?;
        *out(count, "count")? = count_jacobi(&p.path, theta)?.count;
        Ok(())
    })
}

/// The sorted points encoded by the path: angles in (-π, π) for a circular
/// path, values in (-2, 2) for a Jacobi path. Array convention as above.
///
/// # Safety
/// `path` must be a live handle, `buf` valid for `cap` writes (or null
/// with `cap = 0`), and `len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_path_points(path: *const BePath, buf: *mut f64, cap: usize, len: *mut usize) -> BeStatus {
    guard(|| {
        let p = handle(path, "path")?;
        let pts = points_from_path(&p.spec, &p.path)?;
        write_array(&pts.points, buf, cap, len)
    })
}

/// 1 for a circular ensemble, 0 for Jacobi.
///
/// # Safety
/// `ensemble` must be a live handle and `is_circular` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_ensemble_is_circular(ensemble: *const BeEnsemble, is_circular: *mut i32) -> BeStatus {
    guard(|| {
        let kind = handle(ensemble, "ensemble")?.spec.kind;
        *out(is_circular, "is_circular")? = i32::from(kind == EnsembleKind::Circular);
        Ok(())
    })
}

/// Runs `trials` trials and evaluates every window at the sorted angles
/// `thetas[0..n_thetas]`: all arcs between pairs of angles for a circular
/// ensemble, one cap per angle for Jacobi. `workers = 0` uses the default
/// pool; results do not depend on it.
///
/// # Safety
/// `ensemble` must be a live handle, `thetas` valid for `n_thetas` reads,
/// and `result` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_fluctuations_run(
    ensemble: *const BeEnsemble,
    thetas: *const f64,
    n_thetas: usize,
    trials: usize,
    seed: u64,
    normalization: u32,
    workers: usize,
    result: *mut *mut BeFluctuations,
) -> BeStatus {
    guard(|| {
        let spec = handle(ensemble, "ensemble")?.spec;
        if thetas.is_null() && n_thetas > 0 {
            return Err(null("thetas"));
        }
        let angles = if n_thetas == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(thetas, n_thetas)
        };
        let normalization = match normalization {
            BE_NORMALIZATION_THEOREM => Normalization::Theorem,
            BE_NORMALIZATION_SECTION4 => Normalization::Section4,
            other => {
                return Err(Fail(BeStatus::InvalidArgument, format!("unknown normalization {other}")));
            }
        };
        let workers = (workers > 0).then_some(workers);
        let sample = run_fluctuation_experiment(&spec, angles, trials, seed, normalization, workers)?;
        box_out(BeFluctuations { sample }, result)
    })
}

/// # Safety
/// `result` must be null or a live handle from [`be_fluctuations_run`].
#[no_mangle]
pub unsafe extern "C" fn be_fluctuations_free(result: *mut BeFluctuations) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Number of trials (rows) and windows (columns).
///
/// # Safety
/// `result` must be a live handle; `trials` and `windows` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn be_fluctuations_shape(
    result: *const BeFluctuations,
    trials: *mut usize,
    windows: *mut usize,
) -> BeStatus {
    guard(|| {
        let s = &handle(result, "result")?.sample;
        *out(trials, "trials")? = s.trials;
        *out(windows, "windows")? = s.columns();
        Ok(())
    })
}

/// Normalized statistics, row-major (trial, window).
///
/// # Safety
/// As for [`be_path_points`].
#[no_mangle]
pub unsafe extern "C" fn be_fluctuations_values(
    result: *const BeFluctuations,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> BeStatus {
    guard(|| write_array(&handle(result, "result")?.sample.values, buf, cap, len))
}

/// Raw counts, row-major (trial, window).
///
/// # Safety
/// As for [`be_path_points`].
#[no_mangle]
pub unsafe extern "C" fn be_fluctuations_counts(
    result: *const BeFluctuations,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> BeStatus {
    guard(|| {
        let counts: Vec<u64> = handle(result, "result")?.sample.counts.iter().map(|&c| c as u64).collect();
        write_array(&counts, buf, cap, len)
    })
}

/// Summary (means, covariance, KS fit, shape moments) as JSON. `len`
/// receives the byte length excluding the terminating NUL, and `cap` must
/// leave room for it.
///
/// # Safety
/// As for [`be_path_points`], with `buf` a byte buffer.
#[no_mangle]
pub unsafe extern "C" fn be_fluctuations_summary_json(
    result: *const BeFluctuations,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> BeStatus {
    guard(|| {
        let report = summarize(&handle(result, "result")?.sample)?;
        let json = serde_json::to_string(&report).map_err(|e| Fail(BeStatus::Numerical, e.to_string()))?;
        let mut bytes: Vec<c_char> = json.bytes().map(|b| b as c_char).collect();
        bytes.push(0);
        let written = write_array(&bytes, buf, cap, len);
        if let Some(l) = len.as_mut() {
            *l = bytes.len() - 1;
        }
        written
    })
}
