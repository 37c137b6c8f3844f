//! Randomized and configured checks of the identities implemented by the
//! crate, producing one [`CheckReport`] per comparison.

mod convergence;
mod duality;
mod identities;
mod operators;

pub use convergence::{convergence_study, ConvergenceRow, StudySpec, StudyTarget};
pub use duality::{
    check_duality, check_duality_height_normalized, duality_cases, duality_extraction_params, duality_reports,
    DualityCase,
};
pub use identities::{
    check_constant_suite, check_geometry_suite, check_identity_suite, check_lemma_suite, check_recurrence_suite,
    check_special_function_suite, identity_tolerance,
};
pub use operators::{
    check_bol_identity, check_laplacian_factorization, check_operator_theorem, check_parity_vanishing,
    check_single_term_suite, orbit_distance, stencil_tolerance, OperatorTheoremConfig,
};

use crate::error::Error;
use crate::num::{Cx, Real};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

/// Every identity a report may refer to, with a one-line statement.
pub const ANCHORS: &[(&str, &str)] = &[
    ("beta-integral", "β(Z;a,b) equals the integral of t^(a−1)(1−t)^(b−1) over [0,Z]"),
    ("beta0-reflection", "β₀(Z;a,b) = −β(1−Z;b,a) for b > 0"),
    ("beta-hypergeometric", "β(Z;a,b) = Z^a/a · ₂F₁(a,1−b;a+1;Z)"),
    ("beta0-offset", "β(Z;a,b) = β₀(Z;a,b) + C(a,b)"),
    ("hypergeometric-trivial", "₂F₁(a,b;c;Z) = 1 when a or b vanishes"),
    ("euler-transformation", "₂F₁(a,b;c;Z) = (1−Z)^(c−a−b) ₂F₁(c−a,c−b;c;Z)"),
    ("principal-constant", "C(2k−1,−n) = (−n−1)!(2k−2)!/(2k−2−n)! for n < 0"),
    ("distance-cosh", "cosh d(z,ϱ) = 1 + |z−ϱ|²/(2 Im z Im ϱ)"),
    ("distance-radius", "|X_ϱ(z)| = tanh(d(z,ϱ)/2)"),
    ("distance-invariance", "d(Mz,Mϱ) = d(z,ϱ) for M in SL₂(ℤ)"),
    ("fay-p-harmonic", "Fay's P̂ at s = 1−κ reduces to an incomplete-beta power term"),
    ("fay-q-harmonic", "Fay's Q̂ at s = 1−κ reduces to a_n η^κ β(1−r²;1−2κ,−n) term"),
    ("fay-q-diagonal", "Fay's Q̂ at s = κ, n < 0 reduces to a pure power term"),
    ("fay-q-diagonal-limit", "Q̂/Γ(s−κ) at s = κ, n ≥ 0 reduces to a pure power term"),
    ("radial-raise-p", "K̂_{κ,n} P̂ⁿ_{s,κ} = e · P̂ⁿ⁻¹_{s,κ+1}"),
    ("radial-raise-q", "K̂_{κ,n} Q̂ⁿ_{s,κ} = d · Q̂ⁿ⁻¹_{s,κ+1}"),
    ("radial-raise-vanishing", "K̂_{k−1,m} P̂ᵐ_{k,k−1} = 0 for 2−2k ≤ m ≤ 0"),
    ("xi-term", "ξ_{2−2k} of a harmonic summand is (4η)^(2k−1) ψ_{2k,−n−1}"),
    ("d-term", "D^(2k−1) of a harmonic summand is −(2k−2)!(η/π)^(2k−1) ψ_{2k,n+1−2k}"),
    ("xi-meromorphic-term", "ξ_{2−2k} annihilates (z−ϱ̄)^(2k−2) X^m"),
    ("d-meromorphic-term", "D^(2k−1) of (z−ϱ̄)^(2k−2) X^m"),
    ("laplacian-term", "Δ_{2−2k} annihilates harmonic summands"),
    ("bol-identity", "R^(2k−1)_{2−2k} = (−4π)^(2k−1) D^(2k−1)"),
    ("laplacian-factorization", "−Δ_{2κ} = L∘R_{2κ} + 2κ = R_{2κ−2}∘L"),
    ("xi-series", "ξ_{2−2k} ℙ_{2−2k,n} = (4η)^(2k−1) Ψ_{2k,−n−1}"),
    ("d-series", "D^(2k−1) ℙ_{2−2k,n} = −(2k−2)!(η/π)^(2k−1) Ψ_{2k,n+1−2k}"),
    ("parity-vanishing", "ℙ_{2−2k,n} vanishes identically at base i for even n"),
    ("duality", "c⁺ of ℙ around 𝔷₁ equals −c of Ψ around 𝔷₂ with swapped indices"),
    ("duality-height-normalized", "duality with each side divided by the height of its expansion point"),
];

pub fn anchor_statement(anchor: &str) -> Option<&'static str> {
    ANCHORS.iter().find(|(a, _)| *a == anchor).map(|(_, s)| *s)
}

fn registered(anchor: &'static str) -> &'static str {
    debug_assert!(anchor_statement(anchor).is_some(), "unregistered anchor {anchor}");
    anchor
}

pub type Parameters = BTreeMap<String, Value>;

/// Builds a parameter map from `(key, value)` pairs.
pub fn params<const N: usize>(pairs: [(&str, Value); N]) -> Parameters {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Outcome of one comparison. `lhs`/`rhs` are decimal strings at the
/// working precision of the check; errors and tolerance are rounded to
/// `f64`. `runtime_ms` is left out of the JSON form so that reruns compare
/// byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub anchor: &'static str,
    pub parameters: Parameters,
    pub lhs: [String; 2],
    pub rhs: [String; 2],
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub runtime_ms: u64,
}

fn decimal_pair<R: Real>(z: &Cx<R>) -> [String; 2] {
    [format!("{}", z.re), format!("{}", z.im)]
}

/// `rel_err ≤ tol`, or an absolute comparison when the reference is below
/// the tolerance.
pub fn passes(abs_err: f64, rel_err: f64, rhs_abs: f64, tolerance: f64) -> bool {
    rel_err <= tolerance || (rhs_abs < tolerance && abs_err <= tolerance)
}

impl CheckReport {
    /// Compares `lhs` against the reference `rhs`.
    pub fn compare<R: Real>(
        anchor: &'static str,
        index: usize,
        parameters: Parameters,
        lhs: &Cx<R>,
        rhs: &Cx<R>,
        tolerance: f64,
    ) -> Self {
        let abs = (lhs.clone() - rhs).abs();
        let scale = rhs.abs();
        let abs_err = abs.to_f64();
        let rel_err = if scale.is_zero() {
            if abs.is_zero() {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (abs / &scale).to_f64()
        };
        let passed = passes(abs_err, rel_err, scale.to_f64(), tolerance);
        Self {
            check_id: format!("{anchor}#{index}"),
            anchor: registered(anchor),
            parameters,
            lhs: decimal_pair(lhs),
            rhs: decimal_pair(rhs),
            abs_err,
            rel_err,
            tolerance,
            passed,
            tail_estimate: None,
            error: None,
            runtime_ms: 0,
        }
    }

    /// Compares a quantity that should vanish, measured against `scale`
    /// (the size of the input it was computed from).
    pub fn vanishing<R: Real>(
        anchor: &'static str,
        index: usize,
        parameters: Parameters,
        value: &Cx<R>,
        scale: &R,
        tolerance: f64,
    ) -> Self {
        let abs = value.abs();
        let abs_err = abs.to_f64();
        let rel_err = if scale.is_zero() { abs_err } else { (abs / scale).to_f64() };
        Self {
            check_id: format!("{anchor}#{index}"),
            anchor: registered(anchor),
            parameters,
            lhs: decimal_pair(value),
            rhs: ["0".into(), "0".into()],
            abs_err,
            rel_err,
            tolerance,
            passed: rel_err <= tolerance,
            tail_estimate: None,
            error: None,
            runtime_ms: 0,
        }
    }

    /// A comparison that could not be carried out.
    pub fn failed(anchor: &'static str, index: usize, parameters: Parameters, tolerance: f64, err: &Error) -> Self {
        Self {
            check_id: format!("{anchor}#{index}"),
            anchor: registered(anchor),
            parameters,
            lhs: ["NaN".into(), "NaN".into()],
            rhs: ["NaN".into(), "NaN".into()],
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            tolerance,
            passed: false,
            tail_estimate: None,
            error: Some(err.to_string()),
            runtime_ms: 0,
        }
    }

    pub fn with_tail(mut self, tail: f64) -> Self {
        self.tail_estimate = Some(tail);
        self
    }

    pub fn with_runtime(mut self, start: std::time::Instant) -> Self {
        self.runtime_ms = start.elapsed().as_millis() as u64;
        self
    }
}

/// Runs `f` and turns an error into a failed report.
pub(crate) fn report_or_fail(
    anchor: &'static str,
    index: usize,
    parameters: Parameters,
    tolerance: f64,
    f: impl FnOnce(Parameters) -> crate::Result<CheckReport>,
) -> CheckReport {
    let start = std::time::Instant::now();
    match f(parameters.clone()) {
        Ok(r) => r.with_runtime(start),
        Err(e) => CheckReport::failed(anchor, index, parameters, tolerance, &e).with_runtime(start),
    }
}

/// One JSON object per line, NaN and infinities written as `null`.
pub fn to_json_lines(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let v = serde_json::to_value(r).expect("reports serialize");
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

/// CSV summary with columns `check_id, passed, rel_err, tolerance, runtime_ms`.
pub fn to_csv(reports: &[CheckReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check_id", "passed", "rel_err", "tolerance", "runtime_ms"]).expect("in-memory write");
    for r in reports {
        w.write_record([
            r.check_id.clone(),
            r.passed.to_string(),
            format!("{:e}", r.rel_err),
            format!("{:e}", r.tolerance),
            r.runtime_ms.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
