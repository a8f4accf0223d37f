//! Exercises the C entry points from Rust exactly as a foreign caller would:
//! raw pointers in, status codes and JSON documents out.

use std::ffi::{CStr, CString};
use std::ptr;

use altsum_ffi::{
    altsum_integral_cross_check, altsum_limit_check, altsum_report_equal, altsum_report_free,
    altsum_report_json, altsum_verify_numeric, altsum_verify_symbolic, AltsumReport, AltsumStatus,
    altsum_version,
};

fn json_of(report: *mut AltsumReport) -> serde_json::Value {
    let raw = unsafe { altsum_report_json(report) };
    assert!(!raw.is_null());
    let text = unsafe { CStr::from_ptr(raw) }.to_str().unwrap();
    serde_json::from_str(text).unwrap()
}

#[test]
fn version_is_a_static_string() {
    let raw = altsum_version();
    assert!(!raw.is_null());
    let v = unsafe { CStr::from_ptr(raw) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn verify_symbolic_roundtrip() {
    let mut report: *mut AltsumReport = ptr::null_mut();
    let status = unsafe { altsum_verify_symbolic(3, 5, &mut report) };
    assert_eq!(status, AltsumStatus::Ok);
    assert_eq!(unsafe { altsum_report_equal(report) }, 1);
    let json = json_of(report);
    assert_eq!(json["command"], "verify");
    assert_eq!(json["k"], 3);
    assert_eq!(json["mode"], "symbolic");
    assert_eq!(json["equal"], true);
    assert_eq!(json["lhs_term_count"], 6);
    unsafe { altsum_report_free(report) };
}

#[test]
fn verify_symbolic_budget_exceeded() {
    let mut report: *mut AltsumReport = ptr::null_mut();
    let status = unsafe { altsum_verify_symbolic(7, 5, &mut report) };
    assert_eq!(status, AltsumStatus::BudgetExceeded);
    assert!(report.is_null());
}

#[test]
fn verify_numeric_roundtrip() {
    let mut report: *mut AltsumReport = ptr::null_mut();
    let status = unsafe { altsum_verify_numeric(4, 6, 42, &mut report) };
    assert_eq!(status, AltsumStatus::Ok);
    let json = json_of(report);
    assert_eq!(json["mode"], "numeric");
    assert_eq!(json["points_tested"], 6);
    assert_eq!(json["seed"], 42);
    unsafe { altsum_report_free(report) };
}

#[test]
fn limit_check_roundtrip() {
    let a = CString::new("1,2,3").unwrap();
    let mut report: *mut AltsumReport = ptr::null_mut();
    let status = unsafe { altsum_limit_check(a.as_ptr(), &mut report) };
    assert_eq!(status, AltsumStatus::Ok);
    let json = json_of(report);
    assert_eq!(json["lhs_limit"], "-1/180");
    assert_eq!(json["rhs_limit"], "-1/180");
    assert_eq!(json["equal"], true);
    unsafe { altsum_report_free(report) };
}

#[test]
fn limit_check_rejects_bad_input() {
    let bad = CString::new("0,2").unwrap();
    let mut report: *mut AltsumReport = ptr::null_mut();
    assert_eq!(
        unsafe { altsum_limit_check(bad.as_ptr(), &mut report) },
        AltsumStatus::InvalidArgument
    );
    assert!(report.is_null());

    assert_eq!(
        unsafe { altsum_limit_check(ptr::null(), &mut report) },
        AltsumStatus::NullArgument
    );
}

#[test]
fn null_out_pointer_is_rejected() {
    assert_eq!(
        unsafe { altsum_verify_symbolic(2, 5, ptr::null_mut()) },
        AltsumStatus::NullArgument
    );
}

#[test]
fn integral_cross_check_roundtrip() {
    let a = CString::new("1,2").unwrap();
    let mut report: *mut AltsumReport = ptr::null_mut();
    let status = unsafe { altsum_integral_cross_check(a.as_ptr(), 20_000, 7, &mut report) };
    assert_eq!(status, AltsumStatus::Ok);
    let json = json_of(report);
    assert_eq!(json["closed_form"], "-1/6");
    assert_eq!(json["perm_sum"], "-1/6");
    assert_eq!(json["nested"], "1/6");
    assert_eq!(json["sign_factor"], -1);
    assert_eq!(json["agree"], true);
    unsafe { altsum_report_free(report) };

    // rational entries: integration paths are skipped, exact paths still run
    let a = CString::new("1/2,3/2").unwrap();
    let status = unsafe { altsum_integral_cross_check(a.as_ptr(), 1, 0, &mut report) };
    assert_eq!(status, AltsumStatus::Ok);
    let json = json_of(report);
    assert_eq!(json["closed_form"], "-2/3");
    assert_eq!(json.get("nested"), None);
    unsafe { altsum_report_free(report) };
}

#[test]
fn freeing_null_is_a_noop() {
    unsafe { altsum_report_free(ptr::null_mut()) };
}
