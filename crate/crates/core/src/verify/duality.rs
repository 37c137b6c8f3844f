//! Duality between the meromorphic-part coefficients of the harmonic series
//! and the coefficients of the meromorphic series with base and expansion
//! point exchanged.

use super::{params, CheckReport};
use crate::error::{Error, Result};
use crate::expansions::{extract_many, ExpansionKind, ExtractionParams};
use crate::geometry::{reduce_to_fundamental_domain, UpperHalfPoint};
use crate::num::{Cx, Real};
use crate::series::{LatticeSum, SeriesKind, TruncationParams};
use crate::special_functions::cal_c;
use serde_json::json;

/// Sampling used for expansions of lattice sums: the circles must stay inside
/// the disc free of orbit points of the other base point.
pub fn duality_extraction_params() -> ExtractionParams {
    ExtractionParams { radius: 0.1, radius2: 0.06, m_quad: 64 }
}

/// The two sides for every `(m, n)` of one weight.
#[derive(Clone, Debug)]
pub struct DualityCase<R> {
    pub k: i64,
    pub m: i64,
    pub n: i64,
    /// `c⁺(n)` of `𝒞_{2k−1,m+1}⁻¹ ℙ_{2−2k,−m−1}^{𝔷₂}` around `𝔷₁`.
    pub lhs: Cx<R>,
    /// `−c(m)` of `Ψ_{2k,−n−1}^{𝔷₁}` around `𝔷₂`.
    pub rhs: Cx<R>,
    pub eta1: R,
    pub eta2: R,
}

/// Computes both sides for all `(m, n) ∈ ms × ns`, sharing one lattice sum
/// per side. Cases come in `m`-major order.
pub fn duality_cases<R: Real>(
    k: i64,
    ms: &[i64],
    ns: &[i64],
    z1: &UpperHalfPoint<R>,
    z2: &UpperHalfPoint<R>,
    trunc: &TruncationParams,
    quad: &ExtractionParams,
) -> Result<Vec<DualityCase<R>>> {
    if ms.iter().chain(ns).any(|&i| i < 0) {
        return Err(Error::InvalidArgument("duality indices must be non-negative".into()));
    }
    if equivalent(z1, z2) {
        return Err(Error::InvalidArgument(
            "the two points are SL2(Z)-equivalent; the principal-part correction is not implemented".into(),
        ));
    }
    let lattice = LatticeSum::new(trunc)?;
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let m_max = ms.iter().copied().max().unwrap_or(0);

    let p_indices: Vec<i64> = ms.iter().map(|m| -m - 1).collect();
    let p_field = |w: &UpperHalfPoint<R>| -> Result<Vec<Cx<R>>> {
        Ok(lattice.eval_many(SeriesKind::P, k, &p_indices, z2, w)?.into_iter().map(|v| v.value).collect())
    };
    let p_exp = extract_many(&p_field, z1, 2 - 2 * k, ExpansionKind::HarmonicCusp, 0..=n_max, quad)?;

    let psi_indices: Vec<i64> = ns.iter().map(|n| -n - 1).collect();
    let psi_field = |w: &UpperHalfPoint<R>| -> Result<Vec<Cx<R>>> {
        Ok(lattice.eval_many(SeriesKind::Psi, k, &psi_indices, z1, w)?.into_iter().map(|v| v.value).collect())
    };
    let psi_exp = extract_many(&psi_field, z2, 2 * k, ExpansionKind::Meromorphic, 0..=m_max, quad)?;

    let mut out = Vec::with_capacity(ms.len() * ns.len());
    for (i, &m) in ms.iter().enumerate() {
        let norm = R::from_rational(&cal_c((2 * k - 1) as u32, m + 1)?);
        for (j, &n) in ns.iter().enumerate() {
            out.push(DualityCase {
                k,
                m,
                n,
                lhs: p_exp[i].c_plus_at(n) / &Cx::real(norm.clone()),
                rhs: -psi_exp[j].c_plus_at(m),
                eta1: z1.y().clone(),
                eta2: z2.y().clone(),
            });
        }
    }
    Ok(out)
}

fn equivalent<R: Real>(a: &UpperHalfPoint<R>, b: &UpperHalfPoint<R>) -> bool {
    let (ra, _) = reduce_to_fundamental_domain(a);
    let (rb, _) = reduce_to_fundamental_domain(b);
    let d = ra.value().to_f64() - &rb.value().to_f64();
    // boundary identifications of the fundamental domain
    let mirrored = ra.value().to_f64() + &rb.value().to_f64().conj();
    d.abs() < 1e-9
        || (mirrored.abs() < 1e-9 && (ra.value().norm_sqr().to_f64() - 1.0).abs() < 1e-9)
        || ((ra.x().to_f64().abs() - 0.5).abs() < 1e-9 && (d.re.abs() - 1.0).abs() < 1e-9 && d.im.abs() < 1e-9)
}

fn case_params<R: Real>(
    c: &DualityCase<R>,
    z1: &UpperHalfPoint<R>,
    z2: &UpperHalfPoint<R>,
    trunc: &TruncationParams,
    quad: &ExtractionParams,
) -> super::Parameters {
    params([
        ("k", json!(c.k)),
        ("m", json!(c.m)),
        ("n", json!(c.n)),
        ("z1", json!([z1.x().to_f64(), z1.y().to_f64()])),
        ("z2", json!([z2.x().to_f64(), z2.y().to_f64()])),
        ("n_cd", json!(trunc.n_cd)),
        ("n_t", json!(trunc.n_t)),
        ("radius", json!(quad.radius)),
        ("m_quad", json!(quad.m_quad)),
    ])
}

#[allow(clippy::too_many_arguments)]
fn run<R: Real>(
    anchor: &'static str,
    k: i64,
    ms: &[i64],
    ns: &[i64],
    z1: &UpperHalfPoint<R>,
    z2: &UpperHalfPoint<R>,
    trunc: &TruncationParams,
    quad: &ExtractionParams,
    tolerance: f64,
) -> Vec<CheckReport> {
    let start = std::time::Instant::now();
    match duality_cases(k, ms, ns, z1, z2, trunc, quad) {
        Ok(cases) => {
            let per_case = start.elapsed().as_millis() as u64 / cases.len().max(1) as u64;
            let (plain, normalized) = duality_reports(&cases, z1, z2, trunc, quad, tolerance);
            let mut out = if anchor == "duality" { plain } else { normalized };
            for r in &mut out {
                r.runtime_ms = per_case;
            }
            out
        }
        Err(e) => {
            let mut out = Vec::new();
            for &m in ms {
                for &n in ns {
                    let p = params([("k", json!(k)), ("m", json!(m)), ("n", json!(n))]);
                    out.push(CheckReport::failed(anchor, out.len(), p, tolerance, &e));
                }
            }
            out
        }
    }
}

/// `c⁺_{2−2k,𝔷₁}^{𝔷₂}(−m−1, n) = −c_{2k,𝔷₂}^{𝔷₁}(−n−1, m)` for every
/// `(m, n) ∈ ms × ns`, each side from its own truncated lattice sum and
/// coefficient extraction.
#[allow(clippy::too_many_arguments)]
pub fn check_duality<R: Real>(
    k: i64,
    ms: &[i64],
    ns: &[i64],
    z1: &UpperHalfPoint<R>,
    z2: &UpperHalfPoint<R>,
    trunc: &TruncationParams,
    quad: &ExtractionParams,
    tolerance: f64,
) -> Vec<CheckReport> {
    run("duality", k, ms, ns, z1, z2, trunc, quad, tolerance)
}

/// As [`check_duality`] with the left side divided by `Im 𝔷₁` and the right
/// side by `Im 𝔷₂`.
#[allow(clippy::too_many_arguments)]
pub fn check_duality_height_normalized<R: Real>(
    k: i64,
    ms: &[i64],
    ns: &[i64],
    z1: &UpperHalfPoint<R>,
    z2: &UpperHalfPoint<R>,
    trunc: &TruncationParams,
    quad: &ExtractionParams,
    tolerance: f64,
) -> Vec<CheckReport> {
    run("duality-height-normalized", k, ms, ns, z1, z2, trunc, quad, tolerance)
}

/// Both forms from a single computation of the cases.
pub fn duality_reports<R: Real>(
    cases: &[DualityCase<R>],
    z1: &UpperHalfPoint<R>,
    z2: &UpperHalfPoint<R>,
    trunc: &TruncationParams,
    quad: &ExtractionParams,
    tolerance: f64,
) -> (Vec<CheckReport>, Vec<CheckReport>) {
    let plain = cases
        .iter()
        .enumerate()
        .map(|(i, c)| {
            CheckReport::compare("duality", i, case_params(c, z1, z2, trunc, quad), &c.lhs, &c.rhs, tolerance)
        })
        .collect();
    let normalized = cases
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let lhs = c.lhs.scale(&(R::one() / &c.eta1));
            let rhs = c.rhs.scale(&(R::one() / &c.eta2));
            CheckReport::compare(
                "duality-height-normalized",
                i,
                case_params(c, z1, z2, trunc, quad),
                &lhs,
                &rhs,
                tolerance,
            )
        })
        .collect();
    (plain, normalized)
}
