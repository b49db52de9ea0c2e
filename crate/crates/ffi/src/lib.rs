//! C ABI over the `frob` library: opaque parameter handles, plain-C result
//! structs, and integer status codes. Every entry point catches panics and
//! reports them as `FROB_STATUS_INTERNAL`; no Rust type crosses the
//! boundary.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use frob::circle::{self, ArcConfig, ArcMode, CircleError};
use frob::counts::{self, CountsError, ReportOptions};
use frob::semigroup::{self, SemigroupError, SemigroupParams};
use frob::sieve::{sieve_range, SieveError};

/// Status code returned by every fallible function.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobStatus {
    Ok = 0,
    NullPointer = 1,
    NotCoprime = 2,
    BadRange = 3,
    Overflow = 4,
    OracleRangeExceeded = 5,
    EnumerationTooLarge = 6,
    NotRepresentable = 7,
    InvalidRange = 8,
    RangeTooLarge = 9,
    OutOfTableRange = 10,
    TableCoverage = 11,
    BadT = 12,
    QTooLarge = 13,
    GridTooCoarse = 14,
    GridTooLarge = 15,
    BudgetExceeded = 16,
    Internal = 17,
}

/// Quadrature mode for the arc decomposition.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobArcMode {
    ExactGrid = 0,
    Sampled = 1,
}

/// Counting report for one (c, d, ell); mirrors the CSV columns.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FrobCountReport {
    pub c: u64,
    pub d: u64,
    pub ell: u64,
    pub g_ell: u64,
    pub pi_ell: u64,
    pub pi_of_g: u64,
    pub psi_ell: f64,
    pub theta_ell: f64,
    pub ratio: f64,
    pub half_g: f64,
    pub psi_over_half_g: f64,
    pub pi_reconstructed: f64,
}

/// Major/minor arc decomposition result plus the sampled minor-arc sup.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FrobArcReport {
    pub q: u64,
    pub grid_points: u64,
    pub major_re: f64,
    pub major_im: f64,
    pub minor_re: f64,
    pub minor_im: f64,
    pub total_exact: f64,
    pub half_g: f64,
    pub error_estimate: f64,
    pub minor_sup_estimate: f64,
}

/// Opaque handle wrapping validated (c, d, ell) parameters.
pub struct FrobParams(SemigroupParams);

fn status_of_semigroup(e: &SemigroupError) -> FrobStatus {
    match e {
        SemigroupError::NotCoprime { .. } => FrobStatus::NotCoprime,
        SemigroupError::BadRange { .. } => FrobStatus::BadRange,
        SemigroupError::Overflow { .. } => FrobStatus::Overflow,
        SemigroupError::OracleRangeExceeded { .. } => FrobStatus::OracleRangeExceeded,
        SemigroupError::EnumerationTooLarge { .. } => FrobStatus::EnumerationTooLarge,
        SemigroupError::NotRepresentable { .. } => FrobStatus::NotRepresentable,
    }
}

fn status_of_sieve(e: &SieveError) -> FrobStatus {
    match e {
        SieveError::InvalidRange { .. } => FrobStatus::InvalidRange,
        SieveError::RangeTooLarge { .. } => FrobStatus::RangeTooLarge,
        SieveError::OutOfTableRange { .. } => FrobStatus::OutOfTableRange,
    }
}

fn status_of_counts(e: &CountsError) -> FrobStatus {
    match e {
        CountsError::TableDoesNotCoverRange { .. } => FrobStatus::TableCoverage,
        CountsError::BadT { .. } => FrobStatus::BadT,
        CountsError::BudgetExceeded => FrobStatus::BudgetExceeded,
        CountsError::Semigroup(inner) => status_of_semigroup(inner),
        CountsError::Sieve(inner) => status_of_sieve(inner),
    }
}

fn status_of_circle(e: &CircleError) -> FrobStatus {
    match e {
        CircleError::QTooLarge { .. } => FrobStatus::QTooLarge,
        CircleError::GridTooCoarse { .. } => FrobStatus::GridTooCoarse,
        CircleError::GridTooLarge { .. } => FrobStatus::GridTooLarge,
        CircleError::EnumerationTooLarge { .. } => FrobStatus::EnumerationTooLarge,
        CircleError::TableDoesNotCoverRange { .. } => FrobStatus::TableCoverage,
    }
}

fn guarded(body: impl FnOnce() -> FrobStatus) -> FrobStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(FrobStatus::Internal)
}

/// Validate (c, d, ell) and allocate a parameter handle into `out`.
/// Free it with `frob_params_free`.
///
/// # Safety
/// `out` must be a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn frob_params_new(
    c: u64,
    d: u64,
    ell: u64,
    out: *mut *mut FrobParams,
) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    guarded(|| match SemigroupParams::new(c, d, ell) {
        Ok(p) => {
            unsafe { *out = Box::into_raw(Box::new(FrobParams(p))) };
            FrobStatus::Ok
        }
        Err(e) => status_of_semigroup(&e),
    })
}

/// Release a handle from `frob_params_new`. A null pointer is a no-op.
///
/// # Safety
/// `params` must be a pointer previously returned by `frob_params_new` and
/// not freed since.
#[no_mangle]
pub unsafe extern "C" fn frob_params_free(params: *mut FrobParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

/// The l-Frobenius number (l+1)cd - c - d of the handle.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frob_params_g_ell(
    params: *const FrobParams,
    out: *mut u64,
) -> FrobStatus {
    if params.is_null() || out.is_null() {
        return FrobStatus::NullPointer;
    }
    unsafe { *out = (*params).0.g_ell() };
    FrobStatus::Ok
}

/// Number of representations n = c*x + d*y over non-negative integers.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frob_rep_count(c: u64, d: u64, n: u64, out: *mut u64) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    guarded(|| match semigroup::rep_count(c, d, n) {
        Ok(v) => {
            unsafe { *out = v };
            FrobStatus::Ok
        }
        Err(e) => status_of_semigroup(&e),
    })
}

/// Whether n lies in the l-numerical semigroup (more than ell
/// representations).
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frob_is_member(
    params: *const FrobParams,
    n: u64,
    out: *mut bool,
) -> FrobStatus {
    if params.is_null() || out.is_null() {
        return FrobStatus::NullPointer;
    }
    guarded(|| match semigroup::is_member(unsafe { &(*params).0 }, n) {
        Ok(v) => {
            unsafe { *out = v };
            FrobStatus::Ok
        }
        Err(e) => status_of_semigroup(&e),
    })
}

/// Allocate the sorted gap list of the handle into `out_ptr`/`out_len`.
/// Free it with `frob_u64_buffer_free`.
///
/// # Safety
/// `params` must be a live handle; `out_ptr` and `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frob_gaps(
    params: *const FrobParams,
    out_ptr: *mut *mut u64,
    out_len: *mut usize,
) -> FrobStatus {
    if params.is_null() || out_ptr.is_null() || out_len.is_null() {
        return FrobStatus::NullPointer;
    }
    guarded(|| match semigroup::gaps(unsafe { &(*params).0 }) {
        Ok(v) => {
            let boxed = v.into_boxed_slice();
            unsafe {
                *out_len = boxed.len();
                *out_ptr = Box::into_raw(boxed) as *mut u64;
            }
            FrobStatus::Ok
        }
        Err(e) => status_of_semigroup(&e),
    })
}

/// Release a buffer from `frob_gaps`. A null pointer is a no-op.
///
/// # Safety
/// `(ptr, len)` must come from `frob_gaps` and not be freed since.
#[no_mangle]
pub unsafe extern "C" fn frob_u64_buffer_free(ptr: *mut u64, len: usize) {
    if !ptr.is_null() {
        drop(unsafe { Box::from_raw(ptr::slice_from_raw_parts_mut(ptr, len)) });
    }
}

/// Full counting report for (c, d, ell): sieves up to g_ell internally.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frob_count_report(
    c: u64,
    d: u64,
    ell: u64,
    out: *mut FrobCountReport,
) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    guarded(|| {
        let params = match SemigroupParams::new(c, d, ell) {
            Ok(p) => p,
            Err(e) => return status_of_semigroup(&e),
        };
        match counts::report(&params, &ReportOptions::default()) {
            Ok(rep) => {
                let row = rep.row();
                unsafe {
                    *out = FrobCountReport {
                        c: row.c,
                        d: row.d,
                        ell: row.ell,
                        g_ell: row.g_ell,
                        pi_ell: row.pi_ell,
                        pi_of_g: row.pi_of_g,
                        psi_ell: row.psi_ell,
                        theta_ell: row.theta_ell,
                        ratio: row.ratio,
                        half_g: row.half_g,
                        psi_over_half_g: row.psi_over_half_g,
                        pi_reconstructed: row.pi_reconstructed,
                    };
                }
                FrobStatus::Ok
            }
            Err(e) => status_of_counts(&e),
        }
    })
}

/// Major/minor arc decomposition plus the sampled sup of |f| on the minor
/// arcs.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn frob_arc_report(
    c: u64,
    d: u64,
    ell: u64,
    q: u64,
    grid_points: u64,
    mode: FrobArcMode,
    samples: u64,
    seed: u64,
    out: *mut FrobArcReport,
) -> FrobStatus {
    if out.is_null() {
        return FrobStatus::NullPointer;
    }
    guarded(|| {
        let params = match SemigroupParams::new(c, d, ell) {
            Ok(p) => p,
            Err(e) => return status_of_semigroup(&e),
        };
        let table = match sieve_range(params.ell_cd(), params.g_ell()) {
            Ok(t) => t,
            Err(e) => return status_of_sieve(&e),
        };
        let config = ArcConfig {
            q,
            grid_points,
            mode: match mode {
                FrobArcMode::ExactGrid => ArcMode::ExactGrid,
                FrobArcMode::Sampled => ArcMode::Sampled,
            },
        };
        match circle::arc_report(&params, &table, &config, samples, seed) {
            Ok(rep) => {
                let dec = rep.decomposition;
                unsafe {
                    *out = FrobArcReport {
                        q: dec.q,
                        grid_points: dec.grid_points,
                        major_re: dec.major.re,
                        major_im: dec.major.im,
                        minor_re: dec.minor.re,
                        minor_im: dec.minor.im,
                        total_exact: dec.total_exact,
                        half_g: dec.half_g,
                        error_estimate: dec.error_estimate,
                        minor_sup_estimate: rep.minor_sup_estimate,
                    };
                }
                FrobStatus::Ok
            }
            Err(e) => status_of_circle(&e),
        }
    })
}

/// Static name of a status code (never null).
#[no_mangle]
pub extern "C" fn frob_status_name(status: FrobStatus) -> *const c_char {
    let name: &'static str = match status {
        FrobStatus::Ok => "ok\0",
        FrobStatus::NullPointer => "null pointer\0",
        FrobStatus::NotCoprime => "not coprime\0",
        FrobStatus::BadRange => "bad range\0",
        FrobStatus::Overflow => "overflow\0",
        FrobStatus::OracleRangeExceeded => "oracle range exceeded\0",
        FrobStatus::EnumerationTooLarge => "enumeration too large\0",
        FrobStatus::NotRepresentable => "not representable\0",
        FrobStatus::InvalidRange => "invalid range\0",
        FrobStatus::RangeTooLarge => "range too large\0",
        FrobStatus::OutOfTableRange => "out of table range\0",
        FrobStatus::TableCoverage => "table does not cover range\0",
        FrobStatus::BadT => "bad t\0",
        FrobStatus::QTooLarge => "Q too large\0",
        FrobStatus::GridTooCoarse => "grid too coarse\0",
        FrobStatus::GridTooLarge => "grid too large\0",
        FrobStatus::BudgetExceeded => "budget exceeded\0",
        FrobStatus::Internal => "internal error\0",
    };
    name.as_ptr() as *const c_char
}
