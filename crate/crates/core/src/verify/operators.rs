//! Operator identities: single expansion terms against closed forms, operator
//! factorizations on smooth test fields, and the images of the harmonic
//! series under `ξ` and `D`.

use super::{params, report_or_fail, CheckReport, Parameters};
use crate::error::Result;
use crate::geometry::{elliptic_x, enumerate_sl2, moebius_apply, UpperHalfPoint};
use crate::num::{factorial, BigFloat, Cx, PrecisionGuard, Real};
use crate::operators::{
    apply_d, apply_laplacian, apply_lower, apply_raise, apply_xi, d_meromorphic_term, d_phi_closed, iterated_raise,
    wirtinger_derivatives, xi_phi_closed, FieldSample, StencilParams,
};
use crate::series::{phi_summand, LatticeSum, SeriesKind, TruncationParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

/// Accuracy the default stencils reach on single terms.
pub fn stencil_tolerance(bits: u32) -> f64 {
    if bits <= 64 {
        1e-6
    } else {
        1e-12
    }
}

fn stream(seed: u64, family: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(family);
    rng
}

fn pt<R: Real>(p: (f64, f64)) -> Result<UpperHalfPoint<R>> {
    UpperHalfPoint::from_f64(p.0, p.1)
}

fn dist<R: Real>(a: &UpperHalfPoint<R>, b: &UpperHalfPoint<R>) -> f64 {
    (a.value() - b.value()).abs().to_f64()
}

#[derive(Clone, Copy, Debug)]
struct TermDraw {
    k: i64,
    n: i64,
    m: i64,
    z: (f64, f64),
    base: (f64, f64),
}

fn term_draws(seed: u64, count: usize) -> Vec<TermDraw> {
    let mut rng = stream(seed, 30);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(2..=3);
            let (z, base) = loop {
                let z = (rng.gen_range(-0.5..0.5), rng.gen_range(0.7..1.5));
                let base = (rng.gen_range(-0.5..0.5), rng.gen_range(0.7..1.5));
                let x = Cx::<f64>::from_f64(z.0 - base.0, z.1 - base.1) / Cx::from_f64(z.0 - base.0, z.1 + base.1);
                if (0.15..=0.7).contains(&x.abs()) {
                    break (z, base);
                }
            };
            TermDraw { k, n: rng.gen_range(-3..=3), m: rng.gen_range(-3..=2 * k + 1), z, base }
        })
        .collect()
}

fn term_reports<R: Real>(index: usize, d: &TermDraw, bits: u32) -> Vec<CheckReport> {
    let tol = stencil_tolerance(bits);
    let TermDraw { k, n, m, z, base } = *d;
    let p = params([
        ("k", json!(k)),
        ("n", json!(n)),
        ("m", json!(m)),
        ("z", json!([z.0, z.1])),
        ("base", json!([base.0, base.1])),
        ("bits", json!(bits)),
    ]);
    let order = (2 * k - 1) as u32;
    let run = |anchor: &'static str, f: &dyn Fn(Parameters) -> Result<CheckReport>| {
        report_or_fail(anchor, index, p.clone(), tol, f)
    };
    let setup = || -> Result<(UpperHalfPoint<R>, UpperHalfPoint<R>, f64)> {
        let (z, rho) = (pt::<R>(z)?, pt::<R>(base)?);
        let h = dist(&z, &rho);
        Ok((z, rho, h))
    };
    let phi =
        |rho: UpperHalfPoint<R>| FieldSample::new(2 - 2 * k, move |w: &UpperHalfPoint<R>| phi_summand(k, n, &rho, w));
    let mero = |rho: UpperHalfPoint<R>| {
        FieldSample::new(2 - 2 * k, move |w: &UpperHalfPoint<R>| {
            Ok((w.value() - &rho.conj()).powi(2 * k - 2) * elliptic_x(&rho, w).powi(m))
        })
    };
    vec![
        run("xi-term", &|p| {
            let (z, rho, h) = setup()?;
            let lhs = apply_xi(&phi(rho.clone()), 1 - k, &z, &StencilParams::for_order(1, bits).scaled(h))?;
            Ok(CheckReport::compare("xi-term", index, p, &lhs, &xi_phi_closed(k, n, &rho, &z)?, tol))
        }),
        run("d-term", &|p| {
            let (z, rho, h) = setup()?;
            let lhs = apply_d(&phi(rho.clone()), k, &z, &StencilParams::for_order(order, bits).scaled(h))?;
            Ok(CheckReport::compare("d-term", index, p, &lhs, &d_phi_closed(k, n, &rho, &z)?, tol))
        }),
        run("xi-meromorphic-term", &|p| {
            let (z, rho, h) = setup()?;
            let f = mero(rho);
            let lhs = apply_xi(&f, 1 - k, &z, &StencilParams::for_order(1, bits).scaled(h))?;
            // size of y^{2κ} ∂_z̄ for a generic field of this magnitude
            let scale = f.eval(&z)?.abs() * z.y().powi(2 - 2 * k) / R::from_f64(h);
            Ok(CheckReport::vanishing("xi-meromorphic-term", index, p, &lhs, &scale, tol))
        }),
        run("d-meromorphic-term", &|p| {
            let (z, rho, h) = setup()?;
            let lhs = apply_d(&mero(rho.clone()), k, &z, &StencilParams::for_order(order, bits).scaled(h))?;
            let rhs = d_meromorphic_term(k, m, &rho, &z);
            if (0..=2 * k - 2).contains(&m) {
                let shape = (rho.y().clone() / R::pi()).powi(2 * k - 1)
                    * (z.value() - &rho.conj()).powi(-2 * k).abs()
                    * elliptic_x(&rho, &z).abs().powi(m + 1 - 2 * k)
                    * R::from_integer(&factorial(order));
                Ok(CheckReport::vanishing("d-meromorphic-term", index, p, &lhs, &shape, tol))
            } else {
                Ok(CheckReport::compare("d-meromorphic-term", index, p, &lhs, &rhs, tol))
            }
        }),
        run("laplacian-term", &|p| {
            let (z, rho, h) = setup()?;
            let f = phi(rho);
            let lhs = apply_laplacian(&f, 1 - k, &z, &StencilParams::for_order(2, bits).scaled(h))?;
            let scale = f.eval(&z)?.abs() * z.y().sqr() / R::from_f64(h * h);
            Ok(CheckReport::vanishing("laplacian-term", index, p, &lhs, &scale, tol))
        }),
    ]
}

/// Finite-difference `ξ`, `D` and `Δ` on single expansion terms against
/// their closed forms, `count` random draws of `(k, n, m, z, 𝔷)`. Runs in
/// `f64` up to 64 bits and in MPFR above.
pub fn check_single_term_suite(seed: u64, count: usize, bits: u32) -> Vec<CheckReport> {
    let draws = term_draws(seed, count);
    let per_draw: Vec<Vec<CheckReport>> = draws
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            if bits <= 64 {
                term_reports::<f64>(i, d, bits)
            } else {
                let _g = PrecisionGuard::new(bits);
                term_reports::<BigFloat>(i, d, bits)
            }
        })
        .collect();
    // group by identity, draws in order
    let mut out = Vec::new();
    for slot in 0..per_draw.first().map_or(0, Vec::len) {
        out.extend(per_draw.iter().map(|v| v[slot].clone()));
    }
    out
}

/// `exp(αz + βz̄)`, a smooth non-holomorphic test field.
fn exponential_field(alpha: Cx<f64>, beta: Cx<f64>, weight: i64) -> FieldSample<'static, f64> {
    FieldSample::new(weight, move |w: &UpperHalfPoint<f64>| {
        let v = w.value();
        Ok((alpha.clone() * v + beta.clone() * &v.conj()).exp())
    })
}

fn random_exponent(rng: &mut ChaCha8Rng) -> Cx<f64> {
    Cx::from_f64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// `R^{2k−1}_{2−2k} = (−4π)^{2k−1} D^{2k−1}` on random smooth fields, the
/// left side by nested numerical raising.
pub fn check_bol_identity(seed: u64, count: usize) -> Vec<CheckReport> {
    // five nested double-precision differentiations
    let tol = 1e-5;
    let mut rng = stream(seed, 31);
    let draws: Vec<_> = (0..count)
        .map(|_| {
            let z = (rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.5));
            (rng.gen_range(2..=3i64), random_exponent(&mut rng), random_exponent(&mut rng), z)
        })
        .collect();
    draws
        .par_iter()
        .enumerate()
        .map(|(i, (k, alpha, beta, z))| {
            let k = *k;
            let p = params([
                ("k", json!(k)),
                ("alpha", json!([alpha.re, alpha.im])),
                ("beta", json!([beta.re, beta.im])),
                ("z", json!([z.0, z.1])),
            ]);
            report_or_fail("bol-identity", i, p, tol, |p| {
                let f = exponential_field(alpha.clone(), beta.clone(), 2 - 2 * k);
                let z = pt::<f64>(*z)?;
                let nested = StencilParams::new(0.07, 3, 8)?;
                let lhs = iterated_raise(&f, 2 - 2 * k, (2 * k - 1) as u32, &z, &nested)?;
                // the field is entire, so wide circles are safe
                let d = apply_d(&f, k, &z, &StencilParams::new(0.4, 3, 64)?)?;
                let rhs = d.scale(&(-4.0 * std::f64::consts::PI).powi(2 * k as i32 - 1));
                Ok(CheckReport::compare("bol-identity", i, p, &lhs, &rhs, tol))
            })
        })
        .collect()
}

/// `−Δ_{2κ}F = L R_{2κ}F + 2κF = R_{2κ−2} L F` on random smooth fields; two
/// reports per draw.
pub fn check_laplacian_factorization(seed: u64, count: usize) -> Vec<CheckReport> {
    let tol = 1e-6;
    let mut rng = stream(seed, 32);
    let draws: Vec<_> = (0..count)
        .map(|_| {
            let z = (rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.5));
            (rng.gen_range(-3..=3i64), random_exponent(&mut rng), random_exponent(&mut rng), z)
        })
        .collect();
    let st = StencilParams::new(0.05, 2, 8).expect("valid stencil");
    let per_draw: Vec<[CheckReport; 2]> = draws
        .par_iter()
        .enumerate()
        .map(|(i, (kappa, alpha, beta, z))| {
            let kappa = *kappa;
            let p = params([
                ("kappa", json!(kappa)),
                ("alpha", json!([alpha.re, alpha.im])),
                ("beta", json!([beta.re, beta.im])),
                ("z", json!([z.0, z.1])),
            ]);
            let setup = || -> Result<(FieldSample<'static, f64>, UpperHalfPoint<f64>, Cx<f64>)> {
                let f = exponential_field(alpha.clone(), beta.clone(), 2 * kappa);
                let z = pt::<f64>(*z)?;
                let lap = -apply_laplacian(&f, kappa, &z, &StencilParams::for_order(2, 53))?;
                Ok((f, z, lap))
            };
            let lower_raise = report_or_fail("laplacian-factorization", 2 * i, p.clone(), tol, |mut p| {
                p.insert("form".into(), json!("lower-raise"));
                let (f, z, lap) = setup()?;
                let raised =
                    FieldSample::new(2 * kappa + 2, |w: &UpperHalfPoint<f64>| apply_raise(&f, 2 * kappa, w, &st));
                let lhs = apply_lower(&raised, &z, &st)? + f.eval(&z)?.scale(&(2.0 * kappa as f64));
                Ok(CheckReport::compare("laplacian-factorization", 2 * i, p, &lhs, &lap, tol))
            });
            let raise_lower = report_or_fail("laplacian-factorization", 2 * i + 1, p, tol, |mut p| {
                p.insert("form".into(), json!("raise-lower"));
                let (f, z, lap) = setup()?;
                let lowered = FieldSample::new(2 * kappa - 2, |w: &UpperHalfPoint<f64>| apply_lower(&f, w, &st));
                let lhs = apply_raise(&lowered, 2 * kappa - 2, &z, &st)?;
                Ok(CheckReport::compare("laplacian-factorization", 2 * i + 1, p, &lhs, &lap, tol))
            });
            [lower_raise, raise_lower]
        })
        .collect();
    per_draw.into_iter().flatten().collect()
}

/// Euclidean distance from `z` to the nearest point of the orbit of `base`
/// among matrices with small entries.
pub fn orbit_distance<R: Real>(base: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> f64 {
    let (b, w) = (base.value().to_f64(), z.value().to_f64());
    let (Ok(b), Ok(w)) = (UpperHalfPoint::<f64>::new(b), UpperHalfPoint::<f64>::new(w)) else {
        return 0.0;
    };
    enumerate_sl2(8, 8)
        .map(|ms| {
            ms.iter().map(|m| (moebius_apply(m, &b).value().clone() - w.value()).abs()).fold(f64::INFINITY, f64::min)
        })
        .unwrap_or(0.0)
}

/// Series-level check configuration: the indices sharing one lattice sum,
/// truncation, stencils relative to the distance from the nearest orbit
/// point, and the acceptance tolerance.
#[derive(Clone, Debug)]
pub struct OperatorTheoremConfig {
    pub k: i64,
    pub ns: Vec<i64>,
    pub trunc: TruncationParams,
    pub xi_stencil: StencilParams,
    pub d_stencil: StencilParams,
    pub tolerance: f64,
}

impl OperatorTheoremConfig {
    pub fn new(k: i64, ns: Vec<i64>, trunc: TruncationParams) -> Self {
        let shared = StencilParams { h: 0.12, ..StencilParams::coarse((2 * k - 1) as u32) };
        Self { k, ns, trunc, xi_stencil: shared.clone(), d_stencil: shared, tolerance: 1e-3 }
    }
}

fn bounded(st: &StencilParams, scale: f64, y: f64) -> StencilParams {
    let mut s = st.clone().scaled(scale);
    s.h = s.h.min(0.5 * y);
    s
}

/// `ξ_{2−2k}ℙ_{2−2k,n} = (4η)^{2k−1}Ψ_{2k,−n−1}` and
/// `D^{2k−1}ℙ_{2−2k,n} = −(2k−2)!(η/π)^{2k−1}Ψ_{2k,n+1−2k}` at each sample,
/// the left sides by finite differences of the truncated harmonic series.
/// Reports come in sample order, `ξ` then `D` for each index.
pub fn check_operator_theorem<R: Real>(
    cfg: &OperatorTheoremConfig,
    base: &UpperHalfPoint<R>,
    z_samples: &[UpperHalfPoint<R>],
) -> Vec<CheckReport> {
    let k = cfg.k;
    let mut out = Vec::new();
    let lattice = match LatticeSum::new(&cfg.trunc) {
        Ok(l) => l,
        Err(e) => {
            return vec![CheckReport::failed("xi-series", 0, params([("k", json!(k))]), cfg.tolerance, &e)];
        }
    };
    let eta = base.y().clone();
    let xi_pre = (R::from_i64(4) * &eta).powi(2 * k - 1);
    let d_pre = -R::from_integer(&factorial((2 * k - 2) as u32)) * (eta / R::pi()).powi(2 * k - 1);
    for (zi, z) in z_samples.iter().enumerate() {
        let zf = z.value().to_f64();
        let scale = orbit_distance(base, z);
        let y = zf.im;
        let field = |w: &UpperHalfPoint<R>| -> Result<Vec<Cx<R>>> {
            Ok(lattice.eval_many(SeriesKind::P, k, &cfg.ns, base, w)?.into_iter().map(|v| v.value).collect())
        };
        let order = (2 * k - 1) as u32;
        let (xi_lhs, d_lhs) = if cfg.xi_stencil == cfg.d_stencil {
            // one set of samples serves both derivatives
            let both = wirtinger_derivatives(&field, z, &[(0, 1), (order, 0)], &bounded(&cfg.d_stencil, scale, y));
            (both.clone().map(|mut v| vec![v.swap_remove(0)]), both.map(|mut v| vec![v.swap_remove(1)]))
        } else {
            (
                wirtinger_derivatives(&field, z, &[(0, 1)], &bounded(&cfg.xi_stencil, scale, y)),
                wirtinger_derivatives(&field, z, &[(order, 0)], &bounded(&cfg.d_stencil, scale, y)),
            )
        };
        let xi_ns: Vec<i64> = cfg.ns.iter().map(|n| -n - 1).collect();
        let d_ns: Vec<i64> = cfg.ns.iter().map(|n| n + 1 - 2 * k).collect();
        let xi_rhs = lattice.eval_many(SeriesKind::Psi, k, &xi_ns, base, z);
        let d_rhs = lattice.eval_many(SeriesKind::Psi, k, &d_ns, base, z);
        let two_pi_i = Cx::new(R::zero(), R::pi().mul_2exp(1));
        for (j, &n) in cfg.ns.iter().enumerate() {
            let p = params([
                ("k", json!(k)),
                ("n", json!(n)),
                ("z", json!([zf.re, zf.im])),
                ("base", json!([base.x().to_f64(), base.y().to_f64()])),
                ("n_cd", json!(cfg.trunc.n_cd)),
                ("n_t", json!(cfg.trunc.n_t)),
            ]);
            let index = zi * cfg.ns.len() + j;
            let xi = (|| -> Result<CheckReport> {
                let dzbar = xi_lhs.clone()?.remove(0).remove(j);
                let lhs = (Cx::new(R::zero(), R::from_i64(2)) * dzbar.conj()).scale(&z.y().powi(2 - 2 * k));
                let r = xi_rhs.clone()?.remove(j);
                let rhs = r.value.scale(&xi_pre);
                Ok(CheckReport::compare("xi-series", index, p.clone(), &lhs, &rhs, cfg.tolerance)
                    .with_tail((r.tail_estimate * xi_pre.clone().abs()).to_f64()))
            })();
            out.push(xi.unwrap_or_else(|e| CheckReport::failed("xi-series", index, p.clone(), cfg.tolerance, &e)));
            let d = (|| -> Result<CheckReport> {
                let dz = d_lhs.clone()?.remove(0).remove(j);
                let lhs = dz * two_pi_i.powi(1 - 2 * k);
                let r = d_rhs.clone()?.remove(j);
                let rhs = r.value.scale(&d_pre);
                Ok(CheckReport::compare("d-series", index, p.clone(), &lhs, &rhs, cfg.tolerance)
                    .with_tail((r.tail_estimate * d_pre.clone().abs()).to_f64()))
            })();
            out.push(d.unwrap_or_else(|e| CheckReport::failed("d-series", index, p, cfg.tolerance, &e)));
        }
    }
    out
}

/// `ℙ_{2−2k,n}` with base `i` and even `n` compared with zero; the tolerance
/// is ten times the tail estimate of the truncated sum.
pub fn check_parity_vanishing<R: Real>(
    k: i64,
    ns: &[i64],
    z_samples: &[UpperHalfPoint<R>],
    trunc: &TruncationParams,
) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let base = UpperHalfPoint::new(Cx::new(R::zero(), R::one())).expect("i lies in the upper half-plane");
    let lattice = LatticeSum::new(trunc);
    for (zi, z) in z_samples.iter().enumerate() {
        let zf = z.value().to_f64();
        let values = lattice.as_ref().map_err(Clone::clone).and_then(|l| l.eval_many(SeriesKind::P, k, ns, &base, z));
        for (j, &n) in ns.iter().enumerate() {
            let index = zi * ns.len() + j;
            let p =
                params([("k", json!(k)), ("n", json!(n)), ("z", json!([zf.re, zf.im])), ("n_cd", json!(trunc.n_cd))]);
            out.push(match &values {
                Ok(v) => {
                    let tol = 10.0 * v[j].tail_estimate.to_f64();
                    CheckReport::compare("parity-vanishing", index, p, &v[j].value, &Cx::zero(), tol)
                        .with_tail(v[j].tail_estimate.to_f64())
                }
                Err(e) => CheckReport::failed("parity-vanishing", index, p, f64::NAN, e),
            });
        }
    }
    out
}
