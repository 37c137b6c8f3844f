//! Tables of series values or check errors against the truncation bound.

use super::duality::duality_cases;
use super::operators::{check_operator_theorem, OperatorTheoremConfig};
use crate::error::{Error, Result};
use crate::expansions::ExtractionParams;
use crate::geometry::UpperHalfPoint;
use crate::num::{Cx, Real};
use crate::series::{LatticeSum, SeriesKind, SeriesSpec, TruncationParams};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyTarget {
    /// Value of `Ψ_{2k,n}` at `z`.
    Psi,
    /// Value of `ℙ_{2−2k,n}` at `z`.
    P,
    /// Relative error of the duality for `(k, m, n)` with `𝔷₁ = base`, `𝔷₂ = z`.
    Duality,
    /// Largest relative error of the `ξ`/`D` images of `ℙ_{2−2k,n}` at `z`.
    Operator,
}

/// What to tabulate. `m` is only read for [`StudyTarget::Duality`].
#[derive(Clone, Debug)]
pub struct StudySpec<R> {
    pub target: StudyTarget,
    pub k: i64,
    pub n: i64,
    pub m: i64,
    pub base: UpperHalfPoint<R>,
    pub z: UpperHalfPoint<R>,
    pub quad: ExtractionParams,
}

/// One truncation level, `N_t = N_cd`. Values are decimal strings at the
/// working precision.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_cd: i64,
    pub value: [String; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_estimate: Option<f64>,
}

fn pair<R: Real>(z: &Cx<R>) -> [String; 2] {
    [format!("{}", z.re), format!("{}", z.im)]
}

/// One row per entry of `n_list`, which must be increasing.
pub fn convergence_study<R: Real>(spec: &StudySpec<R>, n_list: &[i64]) -> Result<Vec<ConvergenceRow>> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("truncation levels must be increasing".into()));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n_cd in n_list {
        let trunc = TruncationParams { precision_bits: R::bits(), ..TruncationParams::with_bounds(n_cd, n_cd) };
        let row = match spec.target {
            StudyTarget::Psi | StudyTarget::P => {
                let kind = if spec.target == StudyTarget::Psi { SeriesKind::Psi } else { SeriesKind::P };
                let s = SeriesSpec::new(kind, spec.k, spec.n, spec.base.clone())?;
                let v = LatticeSum::new(&trunc)?.eval(&s, &spec.z)?;
                ConvergenceRow {
                    n_cd,
                    value: pair(&v.value),
                    rel_err: None,
                    tail_estimate: Some(v.tail_estimate.to_f64()),
                }
            }
            StudyTarget::Duality => {
                let c = duality_cases(spec.k, &[spec.m], &[spec.n], &spec.base, &spec.z, &trunc, &spec.quad)?.remove(0);
                let rel = (c.lhs.clone() - &c.rhs).abs() / c.rhs.abs();
                ConvergenceRow { n_cd, value: pair(&c.lhs), rel_err: Some(rel.to_f64()), tail_estimate: None }
            }
            StudyTarget::Operator => {
                let cfg = OperatorTheoremConfig::new(spec.k, vec![spec.n], trunc);
                let reports = check_operator_theorem(&cfg, &spec.base, std::slice::from_ref(&spec.z));
                if let Some(e) = reports.iter().find_map(|r| r.error.clone()) {
                    return Err(Error::NonConvergence(e));
                }
                let worst = reports.iter().map(|r| r.rel_err).fold(0.0, f64::max);
                let tail = reports.iter().filter_map(|r| r.tail_estimate).fold(0.0, f64::max);
                ConvergenceRow { n_cd, value: reports[0].lhs.clone(), rel_err: Some(worst), tail_estimate: Some(tail) }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}
