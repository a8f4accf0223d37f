//! C ABI over the verification kernel.
//!
//! Every entry point returns an [`AltsumStatus`] code; results travel through
//! opaque [`AltsumReport`] handles carrying the verdict and the same JSON
//! document the CLI emits. Callers own returned reports and must release
//! them with [`altsum_report_free`]. The JSON pointer obtained from
//! [`altsum_report_json`] borrows from the report and is valid until the
//! report is freed.
//!
//! The generated header lives at `include/altsum.h`.

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Instant;

use altsum::error::Error;
use altsum::identity::{verify_numeric, verify_symbolic};
use altsum::integral::{cross_check, RationalExponentVector};
use altsum::qlimit::{check_limit_identity, ExponentVector};
use altsum::report::{emit_json, IntegralJson, LimitJson, VerifyJson};

/// Status codes for every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltsumStatus {
    /// The computation ran and every check passed.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument failed validation (bad syntax, zero entries, ...).
    InvalidArgument = 2,
    /// `k` exceeds the configured budget.
    BudgetExceeded = 3,
    /// The computation ran but the checked equality failed; the report is
    /// still written so the witness can be inspected.
    Disagreement = 4,
    /// An internal panic was caught at the boundary.
    InternalError = 5,
}

/// Opaque result handle.
pub struct AltsumReport {
    json: CString,
    equal: bool,
}

impl AltsumReport {
    fn new<T: serde::Serialize>(body: &T, equal: bool) -> Box<AltsumReport> {
        let json = CString::new(emit_json(body)).expect("JSON has no interior NUL");
        Box::new(AltsumReport { json, equal })
    }
}

fn status_for(error: &Error) -> AltsumStatus {
    match error {
        Error::BudgetExceeded { .. } => AltsumStatus::BudgetExceeded,
        _ => AltsumStatus::InvalidArgument,
    }
}

/// Runs `body` with panics contained, writing the report handle through
/// `out` on success.
fn guarded(
    out: *mut *mut AltsumReport,
    body: impl FnOnce() -> Result<(Box<AltsumReport>, bool), AltsumStatus>,
) -> AltsumStatus {
    if out.is_null() {
        return AltsumStatus::NullArgument;
    }
    unsafe { *out = ptr::null_mut() };
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok((report, equal))) => {
            unsafe { *out = Box::into_raw(report) };
            if equal {
                AltsumStatus::Ok
            } else {
                AltsumStatus::Disagreement
            }
        }
        Ok(Err(status)) => status,
        Err(_) => AltsumStatus::InternalError,
    }
}

unsafe fn parse_arg<T: std::str::FromStr<Err = Error>>(
    raw: *const c_char,
) -> Result<T, AltsumStatus> {
    if raw.is_null() {
        return Err(AltsumStatus::NullArgument);
    }
    let s = CStr::from_ptr(raw)
        .to_str()
        .map_err(|_| AltsumStatus::InvalidArgument)?;
    s.parse::<T>().map_err(|e| status_for(&e))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn altsum_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Symbolic identity verification at a given `k` (exact polynomial equality
/// after cross-multiplication). `max_symbolic_k` bounds the construction;
/// pass 5 for the default budget.
///
/// # Safety
/// `out` must be a valid pointer to a report-handle slot.
#[no_mangle]
pub unsafe extern "C" fn altsum_verify_symbolic(
    k: u32,
    max_symbolic_k: u32,
    out: *mut *mut AltsumReport,
) -> AltsumStatus {
    guarded(out, || {
        if k < 1 {
            return Err(AltsumStatus::InvalidArgument);
        }
        let report = verify_symbolic(k, max_symbolic_k).map_err(|e| status_for(&e))?;
        Ok((
            AltsumReport::new(&VerifyJson::new(&report, None, None), report.equal),
            report.equal,
        ))
    })
}

/// Numeric identity verification: `trials` random rational points, exact
/// equality of both sides at every pole-free point.
///
/// # Safety
/// `out` must be a valid pointer to a report-handle slot.
#[no_mangle]
pub unsafe extern "C" fn altsum_verify_numeric(
    k: u32,
    trials: u64,
    seed: u64,
    out: *mut *mut AltsumReport,
) -> AltsumStatus {
    guarded(out, || {
        if k < 1 || trials < 1 {
            return Err(AltsumStatus::InvalidArgument);
        }
        let report = verify_numeric(k, trials, seed).map_err(|e| status_for(&e))?;
        Ok((
            AltsumReport::new(
                &VerifyJson::new(&report, Some(trials), Some(seed)),
                report.equal,
            ),
            report.equal,
        ))
    })
}

/// Exact `q -> 1` limit comparison for the exponent list `a`, a
/// NUL-terminated string of comma-separated positive integers (`"1,2,3"`).
///
/// # Safety
/// `a` must be a valid NUL-terminated string and `out` a valid pointer to a
/// report-handle slot.
#[no_mangle]
pub unsafe extern "C" fn altsum_limit_check(
    a: *const c_char,
    out: *mut *mut AltsumReport,
) -> AltsumStatus {
    guarded(out, || {
        let a: ExponentVector = unsafe { parse_arg(a) }?;
        let start = Instant::now();
        let check = check_limit_identity(&a);
        let elapsed = start.elapsed().as_secs_f64();
        Ok((
            AltsumReport::new(&LimitJson::new(&check, elapsed), check.equal),
            check.equal,
        ))
    })
}

/// Four-way integral cross-check for the exponent list `a`, a NUL-terminated
/// string of comma-separated positive integers or slash rationals
/// (`"1,2"`, `"1/2,3/2"`). The exact integration and Monte Carlo paths run
/// only for integer entries.
///
/// # Safety
/// `a` must be a valid NUL-terminated string and `out` a valid pointer to a
/// report-handle slot.
#[no_mangle]
pub unsafe extern "C" fn altsum_integral_cross_check(
    a: *const c_char,
    samples: u64,
    seed: u64,
    out: *mut *mut AltsumReport,
) -> AltsumStatus {
    guarded(out, || {
        let a: RationalExponentVector = unsafe { parse_arg(a) }?;
        if samples < 1 {
            return Err(AltsumStatus::InvalidArgument);
        }
        let start = Instant::now();
        let check = cross_check(&a, samples, seed);
        let json = IntegralJson::from_cross_check(&check, start.elapsed().as_secs_f64());
        Ok((AltsumReport::new(&json, check.agree), check.agree))
    })
}

/// 1 when every check in the report passed, 0 when some check failed,
/// -1 for a null report.
///
/// # Safety
/// `report` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn altsum_report_equal(report: *const AltsumReport) -> c_int {
    if report.is_null() {
        return -1;
    }
    if (*report).equal {
        1
    } else {
        0
    }
}

/// The report as a NUL-terminated JSON document. Borrowed from the report:
/// valid until `altsum_report_free`. Null for a null report.
///
/// # Safety
/// `report` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn altsum_report_json(report: *const AltsumReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    (*report).json.as_ptr()
}

/// Releases a report handle. Null is a no-op.
///
/// # Safety
/// `report` must be null or a live handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn altsum_report_free(report: *mut AltsumReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
