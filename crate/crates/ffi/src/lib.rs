//! C ABI over the roughflow library.
//!
//! Rough paths are opaque handles created and destroyed by this layer;
//! every fallible call returns an `RfStatus` and writes results through out
//! pointers. The last error message is kept per thread and can be fetched
//! with `rf_last_error`.
//!
//! The matching header is generated by cbindgen (`include/roughflow.h`).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use roughflow::error::Error;
use roughflow::io;
use roughflow::roughpath::{dist_p, dist_q, q_bound_constant, GridRoughPath};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    GridMismatch = 3,
    BadExponent = 4,
    IoError = 5,
    VerificationFailed = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn remember(err: &Error) -> RfStatus {
    let status = match err {
        Error::DimMismatch { .. } | Error::GridMismatch(_) => RfStatus::GridMismatch,
        Error::PRange(_) | Error::QRange { .. } => RfStatus::BadExponent,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => RfStatus::IoError,
        Error::Verification(_) => RfStatus::VerificationFailed,
        _ => RfStatus::InvalidInput,
    };
    let message = CString::new(err.to_string()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
    status
}

/// An opaque rough path.
pub struct RfRoughPath {
    inner: GridRoughPath,
}

/// The last error message raised on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|message| message.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Canonically lift a piecewise-linear path. `times` has `len` entries,
/// `points` is row-major `len × dim`. On success writes a new handle to
/// `out`; free it with `rf_roughpath_free`.
///
/// # Safety
/// `times`, `points` and `out` must be valid for the documented lengths.
#[no_mangle]
pub unsafe extern "C" fn rf_lift(
    times: *const f64,
    points: *const f64,
    len: usize,
    dim: usize,
    out: *mut *mut RfRoughPath,
) -> RfStatus {
    if times.is_null() || points.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    let times = std::slice::from_raw_parts(times, len);
    let flat = std::slice::from_raw_parts(points, len * dim);
    let rows: Vec<Vec<f64>> = flat.chunks(dim).map(|c| c.to_vec()).collect();
    match GridRoughPath::canonical_lift(times, &rows) {
        Ok(path) => {
            *out = Box::into_raw(Box::new(RfRoughPath { inner: path }));
            RfStatus::Ok
        }
        Err(err) => remember(&err),
    }
}

/// Load a rough path from a JSON file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rf_roughpath_read_json(
    path: *const c_char,
    out: *mut *mut RfRoughPath,
) -> RfStatus {
    if path.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        return RfStatus::InvalidInput;
    };
    match io::read_roughpath(Path::new(path)) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(RfRoughPath { inner }));
            RfStatus::Ok
        }
        Err(err) => remember(&err),
    }
}

/// Write a rough path to a JSON file.
///
/// # Safety
/// `handle` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rf_roughpath_write_json(
    handle: *const RfRoughPath,
    path: *const c_char,
) -> RfStatus {
    if handle.is_null() || path.is_null() {
        return RfStatus::NullPointer;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        return RfStatus::InvalidInput;
    };
    match io::write_roughpath(Path::new(path), &(*handle).inner) {
        Ok(()) => RfStatus::Ok,
        Err(err) => remember(&err),
    }
}

/// # Safety
/// `handle` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rf_roughpath_free(handle: *mut RfRoughPath) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Grid size (number of stored time points).
///
/// # Safety
/// `handle` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn rf_grid_len(handle: *const RfRoughPath) -> usize {
    if handle.is_null() {
        return 0;
    }
    (*handle).inner.times().len()
}

/// Copy the grid times into `out` (capacity `rf_grid_len` doubles).
///
/// # Safety
/// `out` must hold at least `rf_grid_len(handle)` doubles.
#[no_mangle]
pub unsafe extern "C" fn rf_times(handle: *const RfRoughPath, out: *mut f64) -> RfStatus {
    if handle.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    let times = (*handle).inner.times();
    std::ptr::copy_nonoverlapping(times.as_ptr(), out, times.len());
    RfStatus::Ok
}

/// Copy the running level-1 value X¹_{0,t_k} into `out` (`rf_dim` doubles).
///
/// # Safety
/// `out` must hold at least `rf_dim(handle)` doubles.
#[no_mangle]
pub unsafe extern "C" fn rf_level1_at(
    handle: *const RfRoughPath,
    k: usize,
    out: *mut f64,
) -> RfStatus {
    if handle.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    let path = &(*handle).inner;
    if k >= path.times().len() {
        return remember(&Error::IndexOutOfRange { index: k, len: path.times().len() });
    }
    let level1 = &path.signature(k).level1;
    std::ptr::copy_nonoverlapping(level1.as_ptr(), out, level1.len());
    RfStatus::Ok
}

/// Copy the running level-2 value X²_{0,t_k} into `out`, row-major
/// (`rf_dim` squared doubles).
///
/// # Safety
/// `out` must hold at least `rf_dim(handle)²` doubles.
#[no_mangle]
pub unsafe extern "C" fn rf_level2_at(
    handle: *const RfRoughPath,
    k: usize,
    out: *mut f64,
) -> RfStatus {
    if handle.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    let path = &(*handle).inner;
    if k >= path.times().len() {
        return remember(&Error::IndexOutOfRange { index: k, len: path.times().len() });
    }
    let level2 = &path.signature(k).level2;
    std::ptr::copy_nonoverlapping(level2.as_ptr(), out, level2.len());
    RfStatus::Ok
}

/// Path dimension.
///
/// # Safety
/// `handle` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn rf_dim(handle: *const RfRoughPath) -> usize {
    if handle.is_null() {
        return 0;
    }
    (*handle).inner.dim()
}

/// p-variation of one tensor level (level 1 or 2).
///
/// # Safety
/// `handle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rf_p_variation(
    handle: *const RfRoughPath,
    p: f64,
    level: u8,
    out: *mut f64,
) -> RfStatus {
    if handle.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    match (*handle).inner.p_variation(p, level) {
        Ok(v) => {
            *out = v;
            RfStatus::Ok
        }
        Err(err) => remember(&err),
    }
}

/// Largest Chen defect over every grid triple.
///
/// # Safety
/// `handle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rf_chen_residual(
    handle: *const RfRoughPath,
    out: *mut f64,
) -> RfStatus {
    if handle.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    *out = (*handle).inner.chen_residual();
    RfStatus::Ok
}

/// d_p between two rough paths on a shared grid.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rf_dist_p(
    left: *const RfRoughPath,
    right: *const RfRoughPath,
    p: f64,
    out: *mut f64,
) -> RfStatus {
    if left.is_null() || right.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    match dist_p(&(*left).inner, &(*right).inner, p) {
        Ok(v) => {
            *out = v;
            RfStatus::Ok
        }
        Err(err) => remember(&err),
    }
}

/// d_q (q > p) between two rough paths on a shared grid.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rf_dist_q(
    left: *const RfRoughPath,
    right: *const RfRoughPath,
    p: f64,
    q: f64,
    out: *mut f64,
) -> RfStatus {
    if left.is_null() || right.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    match dist_q(&(*left).inner, &(*right).inner, p, q) {
        Ok(v) => {
            *out = v;
            RfStatus::Ok
        }
        Err(err) => remember(&err),
    }
}

/// The constant C of the bound d_q <= C d_p^{p/q}.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rf_q_bound_constant(
    left: *const RfRoughPath,
    right: *const RfRoughPath,
    p: f64,
    q: f64,
    out: *mut f64,
) -> RfStatus {
    if left.is_null() || right.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    match q_bound_constant(&(*left).inner, &(*right).inner, p, q) {
        Ok(v) => {
            *out = v;
            RfStatus::Ok
        }
        Err(err) => remember(&err),
    }
}

/// Reparameterize onto the control scale; writes a new handle.
///
/// # Safety
/// `handle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rf_reparameterize(
    handle: *const RfRoughPath,
    p: f64,
    out: *mut *mut RfRoughPath,
) -> RfStatus {
    if handle.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    match (*handle).inner.reparameterize(p) {
        Ok((path, _)) => {
            *out = Box::into_raw(Box::new(RfRoughPath { inner: path }));
            RfStatus::Ok
        }
        Err(err) => remember(&err),
    }
}

/// (λX): level 1 scaled by λ, level 2 by λ²; writes a new handle.
///
/// # Safety
/// `handle` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rf_scalar_mul(
    handle: *const RfRoughPath,
    lambda: f64,
    out: *mut *mut RfRoughPath,
) -> RfStatus {
    if handle.is_null() || out.is_null() {
        return RfStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(RfRoughPath {
        inner: (*handle).inner.scalar_mul(lambda),
    }));
    RfStatus::Ok
}
