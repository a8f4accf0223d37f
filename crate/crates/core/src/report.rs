//! JSON report shapes shared by the CLI and the C bindings.
//!
//! One JSON object per run. Exact rationals are lowest-terms strings
//! (`"-1/180"`), floats are rounded to 12 significant digits before
//! serialization, and field order is fixed by declaration, so identical
//! inputs produce byte-identical reports apart from `elapsed_s`.

use serde::Serialize;

use crate::identity::{VerificationReport, VerifyMode};
use crate::integral::{IntegralCheck, McEstimate, MC_RNG_LABEL};
use crate::qlimit::LimitCheck;
use crate::rational::format_rational;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rounds to 12 significant digits; keeps zero and non-finite values as-is.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Serialize)]
pub struct VerifyJson {
    pub command: &'static str,
    pub version: &'static str,
    pub k: u32,
    pub mode: VerifyMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub equal: bool,
    pub lhs_term_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numerator_monomials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_tested: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub elapsed_s: f64,
}

impl VerifyJson {
    pub fn new(report: &VerificationReport, trials: Option<u64>, seed: Option<u64>) -> Self {
        VerifyJson {
            command: "verify",
            version: VERSION,
            k: report.k,
            mode: report.mode,
            trials,
            seed,
            equal: report.equal,
            lhs_term_count: report.lhs_term_count,
            numerator_monomials: report.numerator_monomials,
            points_tested: report.points_tested,
            witness: report.witness.clone(),
            elapsed_s: report.elapsed_s,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LimitJson {
    pub command: &'static str,
    pub version: &'static str,
    pub a: Vec<u64>,
    pub k: u32,
    pub lhs_limit: String,
    pub rhs_limit: String,
    pub equal: bool,
    pub elapsed_s: f64,
}

impl LimitJson {
    pub fn new(check: &LimitCheck, elapsed_s: f64) -> Self {
        LimitJson {
            command: "limit",
            version: VERSION,
            a: check.a.entries().to_vec(),
            k: check.a.k(),
            lhs_limit: format_rational(&check.lhs),
            rhs_limit: format_rational(&check.rhs),
            equal: check.equal,
            elapsed_s,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct McJson {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub rng: &'static str,
}

impl From<&McEstimate> for McJson {
    fn from(e: &McEstimate) -> Self {
        McJson {
            estimate: round_sig12(e.estimate),
            stderr: round_sig12(e.stderr),
            samples: e.samples,
            seed: e.seed,
            rng: MC_RNG_LABEL,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct IntegralJson {
    pub command: &'static str,
    pub version: &'static str,
    pub a: Vec<String>,
    pub k: u32,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perm_sum: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nested: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_factor: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc: Option<McJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    pub elapsed_s: f64,
}

impl IntegralJson {
    pub fn empty(a: &crate::integral::RationalExponentVector, method: &str) -> Self {
        IntegralJson {
            command: "integral",
            version: VERSION,
            a: a.entries().iter().map(format_rational).collect(),
            k: a.k(),
            method: method.to_string(),
            closed_form: None,
            perm_sum: None,
            nested: None,
            sign_factor: None,
            mc: None,
            agree: None,
            elapsed_s: 0.0,
        }
    }

    pub fn from_cross_check(check: &IntegralCheck, elapsed_s: f64) -> Self {
        let mut out = Self::empty(&check.a, "all");
        out.closed_form = Some(format_rational(&check.closed));
        out.perm_sum = Some(format_rational(&check.perm));
        out.nested = check.nested.as_ref().map(format_rational);
        out.sign_factor = Some(check.sign_factor);
        out.mc = check.mc.as_ref().map(McJson::from);
        out.agree = Some(check.agree);
        out.elapsed_s = elapsed_s;
        out
    }
}

/// Serializes any report as a single compact JSON object.
pub fn emit_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string(report).expect("reports serialize")
}
