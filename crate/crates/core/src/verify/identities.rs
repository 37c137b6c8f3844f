//! Randomized pointwise identities: incomplete beta and hypergeometric
//! functions, exact constants, hyperbolic distance, Fay's functions and
//! their radial recurrences.

use super::{params, report_or_fail, CheckReport};
use crate::error::Result;
use crate::geometry::{
    elliptic_x, hyperbolic_distance, moebius_apply, one_minus_r_squared, r_squared, UnimodularMatrix, UpperHalfPoint,
};
use crate::num::{factorial, BigFloat, Cx, PrecisionGuard, Real};
use crate::operators::{radial_k_hat, StencilParams};
use crate::quadrature::GaussLegendre;
use crate::special_functions::{
    a_const, beta0, beta0_split, cal_c, d_coeff, e_coeff, fay_p_radial, fay_q_radial, fay_q_radial_regularized,
    gauss_2f1, gauss_2f1_real, incomplete_beta, incomplete_beta_split, script_c_principal,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

type B = BigFloat;

/// Relative tolerance for closed form against oracle: `10^{−20}` at 128
/// bits, scaled linearly in digits with the precision.
pub fn identity_tolerance(bits: u32) -> f64 {
    10f64.powf(-20.0 * bits as f64 / 128.0)
}

/// Finite differences lose about half the digits.
fn recurrence_tolerance(bits: u32) -> f64 {
    identity_tolerance(bits).sqrt()
}

fn stream(seed: u64, family: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(family);
    rng
}

/// Evaluates the draws in parallel at `bits`, in draw order.
fn run_draws<D: Sync>(bits: u32, draws: &[D], f: impl Fn(usize, &D) -> CheckReport + Sync) -> Vec<CheckReport> {
    draws
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let _g = PrecisionGuard::new(bits);
            f(i, d)
        })
        .collect()
}

fn real(x: B) -> Cx<B> {
    Cx::real(x)
}

#[derive(Clone, Copy, Debug)]
struct BetaDraw {
    a: u32,
    b: i64,
    z: f64,
}

fn beta_draws(rng: &mut ChaCha8Rng, count: usize, b_range: (i64, i64), z_range: (f64, f64)) -> Vec<BetaDraw> {
    (0..count)
        .map(|i| BetaDraw {
            a: rng.gen_range(1..=8),
            b: rng.gen_range(b_range.0..=b_range.1),
            // the first draw is the degenerate endpoint
            z: if i == 0 { 0.0 } else { rng.gen_range(z_range.0..z_range.1) },
        })
        .collect()
}

fn beta_params(d: &BetaDraw) -> super::Parameters {
    params([("a", json!(d.a)), ("b", json!(d.b)), ("Z", json!(d.z))])
}

fn beta_integrand(a: u32, b: i64) -> impl Fn(&B) -> B {
    move |t: &B| t.powi(a as i64 - 1) * (B::one() - t).powi(b - 1)
}

/// Incomplete beta, its closed-form part and the hypergeometric functions,
/// `count` draws per identity.
pub fn check_special_function_suite(seed: u64, count: usize, bits: u32) -> Vec<CheckReport> {
    let tol = identity_tolerance(bits);
    let quad_tol = tol * 1e-6;
    let gl = B::with_bits(bits, || {
        let _g = PrecisionGuard::new(bits);
        GaussLegendre::<B>::new(24 + bits as usize / 8)
    });
    let mut out = Vec::new();

    let draws = beta_draws(&mut stream(seed, 1), count, (-8, 8), (0.0, 0.95));
    out.extend(run_draws(bits, &draws, |i, d| {
        report_or_fail("beta-integral", i, beta_params(d), tol, |p| {
            let z = B::from_f64(d.z);
            let lhs = incomplete_beta(&z, d.a, d.b)?;
            let rhs = gl.integrate(&beta_integrand(d.a, d.b), &B::zero(), &z, &B::from_f64(quad_tol))?;
            Ok(CheckReport::compare("beta-integral", i, p, &real(lhs), &real(rhs), tol))
        })
    }));

    let draws = beta_draws(&mut stream(seed, 2), count, (1, 8), (0.0, 0.95));
    out.extend(run_draws(bits, &draws, |i, d| {
        report_or_fail("beta0-reflection", i, beta_params(d), tol, |p| {
            let z = B::from_f64(d.z);
            let w = B::one() - &z;
            let lhs = beta0(&z, d.a, d.b)?;
            let bb = B::from_i64(d.b);
            let f = gauss_2f1_real(&bb, &B::from_i64(1 - d.a as i64), &(bb.clone() + B::one()), &w)?;
            let rhs = -(w.powi(d.b) / &bb) * f;
            Ok(CheckReport::compare("beta0-reflection", i, p, &real(lhs), &real(rhs), tol))
        })
    }));

    let draws = beta_draws(&mut stream(seed, 3), count, (-8, 8), (0.0, 0.9));
    out.extend(run_draws(bits, &draws, |i, d| {
        report_or_fail("beta-hypergeometric", i, beta_params(d), tol, |p| {
            let z = B::from_f64(d.z);
            let lhs = incomplete_beta(&z, d.a, d.b)?;
            let a = B::from_i64(d.a as i64);
            let f = gauss_2f1_real(&a, &B::from_i64(1 - d.b), &(a.clone() + B::one()), &z)?;
            let rhs = z.powi(d.a as i64) / &a * f;
            Ok(CheckReport::compare("beta-hypergeometric", i, p, &real(lhs), &real(rhs), tol))
        })
    }));

    // below Z ≈ 0.1 the sum β₀ + C cancels to Z^a/a and loses digits
    let draws = beta_draws(&mut stream(seed, 4), count, (-8, 8), (0.1, 0.95));
    out.extend(run_draws(bits, &draws, |i, d| {
        report_or_fail("beta0-offset", i, beta_params(d), tol, |p| {
            let z = B::from_f64(d.z);
            let lhs = beta0(&z, d.a, d.b)? + B::from_rational(&cal_c(d.a, d.b)?);
            let rhs = gl.integrate(&beta_integrand(d.a, d.b), &B::zero(), &z, &B::from_f64(quad_tol))?;
            Ok(CheckReport::compare("beta0-offset", i, p, &real(lhs), &real(rhs), tol))
        })
    }));

    let mut rng = stream(seed, 5);
    let draws: Vec<[f64; 5]> = (0..count)
        .map(|_| {
            [
                rng.gen_range(-4.0..4.0),
                rng.gen_range(0.5..5.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                if rng.gen_bool(0.5) { 0.0 } else { 1.0 },
            ]
        })
        .collect();
    out.extend(run_draws(bits, &draws, |i, d| {
        let [other, c, zr, zi, slot] = *d;
        let p = params([("other", json!(other)), ("c", json!(c)), ("Z", json!([zr, zi])), ("zero_slot", json!(slot))]);
        report_or_fail("hypergeometric-trivial", i, p, tol, |p| {
            let (a, b) = if slot == 0.0 { (B::zero(), B::from_f64(other)) } else { (B::from_f64(other), B::zero()) };
            let lhs = gauss_2f1(&a, &b, &B::from_f64(c), &Cx::from_f64(zr, zi))?;
            Ok(CheckReport::compare("hypergeometric-trivial", i, p, &lhs, &Cx::one(), tol))
        })
    }));

    let mut rng = stream(seed, 6);
    let draws: Vec<[f64; 4]> = (0..count)
        .map(|_| {
            [rng.gen_range(-3.5..3.5), rng.gen_range(-3.5..3.5), rng.gen_range(0.6..4.5), rng.gen_range(-0.9..0.9)]
        })
        .collect();
    out.extend(run_draws(bits, &draws, |i, d| {
        let [a, b, c, z] = *d;
        let p = params([("a", json!(a)), ("b", json!(b)), ("c", json!(c)), ("Z", json!(z))]);
        report_or_fail("euler-transformation", i, p, tol, |p| {
            let (a, b, c, z) = (B::from_f64(a), B::from_f64(b), B::from_f64(c), B::from_f64(z));
            let lhs = gauss_2f1_real(&a, &b, &c, &z)?;
            let e = c.clone() - &a - &b;
            let rhs = (B::one() - &z).powf(&e) * gauss_2f1_real(&(c.clone() - &a), &(c.clone() - &b), &c, &z)?;
            Ok(CheckReport::compare("euler-transformation", i, p, &real(lhs), &real(rhs), tol))
        })
    }));
    out
}

fn constant_report(index: usize, k: i64, n: i64) -> CheckReport {
    let p = params([("k", json!(k)), ("n", json!(n))]);
    report_or_fail("principal-constant", index, p, 0.0, |p| {
        let lhs = cal_c((2 * k - 1) as u32, -n)?;
        let rhs = script_c_principal(k, n)?;
        let diff = rug::Rational::from(&lhs - &rhs);
        let _g = PrecisionGuard::new(128);
        let mut r = CheckReport::compare(
            "principal-constant",
            index,
            p,
            &real(B::from_rational(&lhs)),
            &real(B::from_rational(&rhs)),
            0.0,
        );
        // exact comparison decides
        r.lhs = [lhs.to_string(), "0".into()];
        r.rhs = [rhs.to_string(), "0".into()];
        r.abs_err = diff.to_f64().abs();
        r.rel_err = if rhs == 0 { r.abs_err } else { rug::Rational::from(&diff / &rhs).to_f64().abs() };
        r.passed = diff == 0;
        Ok(r)
    })
}

/// The exact residue constant over the full grid `2 ≤ k ≤ 8`, `−10 ≤ n ≤ −1`.
pub fn check_constant_suite() -> Vec<CheckReport> {
    let mut out = Vec::new();
    for k in 2..=8 {
        for n in -10..=-1 {
            out.push(constant_report(out.len(), k, n));
        }
    }
    out
}

fn random_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    (rng.gen_range(-0.5..0.5), rng.gen_range(0.6..1.6))
}

/// A pair of points whose elliptic radius lies in `[0.05, 0.9]`.
fn random_pair(rng: &mut ChaCha8Rng) -> ((f64, f64), (f64, f64)) {
    loop {
        let (z, base) = (random_point(rng), random_point(rng));
        let x = Cx::<f64>::from_f64(z.0 - base.0, z.1 - base.1) / Cx::from_f64(z.0 - base.0, z.1 + base.1);
        let r = x.abs();
        if (0.05..=0.9).contains(&r) {
            return (z, base);
        }
    }
}

fn point(p: (f64, f64)) -> Result<UpperHalfPoint<B>> {
    UpperHalfPoint::from_f64(p.0, p.1)
}

fn random_matrix(rng: &mut ChaCha8Rng) -> UnimodularMatrix {
    let mut m = UnimodularMatrix::IDENTITY;
    for _ in 0..6 {
        let step = match rng.gen_range(0..3) {
            0 => UnimodularMatrix::S,
            1 => UnimodularMatrix::translation(1),
            _ => UnimodularMatrix::translation(-1),
        };
        m = step.mul(&m);
    }
    m
}

/// Distance formula, elliptic radius and invariance of the distance.
pub fn check_geometry_suite(seed: u64, count: usize, bits: u32) -> Vec<CheckReport> {
    let tol = identity_tolerance(bits);
    let mut rng = stream(seed, 7);
    let draws: Vec<_> = (0..count).map(|_| (random_pair(&mut rng), random_matrix(&mut rng))).collect();
    let mut out = Vec::new();
    for anchor in ["distance-cosh", "distance-radius", "distance-invariance"] {
        out.extend(run_draws(bits, &draws, |i, &((z, base), m)| {
            let p = params([
                ("z", json!([z.0, z.1])),
                ("base", json!([base.0, base.1])),
                ("M", json!([m.a, m.b, m.c, m.d])),
            ]);
            report_or_fail(anchor, i, p, tol, |p| {
                let (z, base) = (point(z)?, point(base)?);
                let d = hyperbolic_distance(&z, &base);
                let e = d.exp();
                let (lhs, rhs) = match anchor {
                    "distance-cosh" => (
                        (e.clone() + B::one() / &e).mul_2exp(-1),
                        B::one() + (z.value() - base.value()).norm_sqr() / (B::from_i64(2) * z.y() * base.y()),
                    ),
                    "distance-radius" => (elliptic_x(&base, &z).abs(), (e.clone() - B::one()) / (e + B::one())),
                    _ => (hyperbolic_distance(&moebius_apply(&m, &z), &moebius_apply(&m, &base)), d),
                };
                Ok(CheckReport::compare(anchor, i, p, &real(lhs), &real(rhs), tol))
            })
        }));
    }
    out
}

struct EllipticFrame {
    x: Cx<B>,
    r: B,
    r2: B,
    one_minus_r2: B,
    unit: Cx<B>,
    eta: B,
    /// `z − 𝔷̄`
    shift: Cx<B>,
    y: B,
    /// `(z−𝔷̄)/(𝔷−z̄)`
    phase: Cx<B>,
}

impl EllipticFrame {
    fn new(base: &UpperHalfPoint<B>, z: &UpperHalfPoint<B>) -> Self {
        let x = elliptic_x(base, z);
        let r = x.abs();
        let unit = x.scale(&(B::one() / &r));
        let shift = z.value() - &base.conj();
        let phase = shift.clone() / &(base.value() - &z.conj());
        Self {
            r2: r_squared(base, z),
            one_minus_r2: one_minus_r_squared(base, z),
            x,
            r,
            unit,
            eta: base.y().clone(),
            shift,
            y: z.y().clone(),
            phase,
        }
    }

    /// `y^{−κ}((z−𝔷̄)/(𝔷−z̄))^{−κ} f(r) e^{inθ}`
    fn lift(&self, kappa: i64, n: i64, radial: B) -> Cx<B> {
        (self.phase.powi(-kappa) * self.unit.powi(n)).scale(&(self.y.powi(-kappa) * radial))
    }

    /// `c (z−𝔷̄)^{−2κ} Xⁿ`
    fn power_term(&self, kappa: i64, n: i64, c: B) -> Cx<B> {
        (self.shift.powi(-2 * kappa) * self.x.powi(n)).scale(&c)
    }
}

fn lemma_sides(anchor: &str, kappa: i64, n: i64, f: &EllipticFrame) -> Result<(Cx<B>, Cx<B>)> {
    let four_pi = B::from_i64(4) * B::pi();
    let minus_four_eta = (B::from_i64(-4) * &f.eta).powi(kappa);
    match anchor {
        "fay-p-harmonic" => {
            let s = B::from_i64(1 - kappa);
            let lhs = f.lift(kappa, n, fay_p_radial(&s, kappa, n, &f.r)?);
            let factor =
                if n >= 0 { B::one() } else { B::from_i64(n) * beta0_split(&f.r2, (1 - 2 * kappa) as u32, -n)? };
            Ok((lhs, f.power_term(kappa, n, minus_four_eta * factor)))
        }
        "fay-q-harmonic" => {
            let s = B::from_i64(1 - kappa);
            let lhs = f.lift(kappa, n, fay_q_radial(&s, kappa, n, &f.r)?);
            let beta = incomplete_beta_split(&f.one_minus_r2, &f.r2, (1 - 2 * kappa) as u32, -n)?;
            let c = a_const(kappa, n)?.value::<B>() * f.eta.powi(kappa) * beta;
            Ok((lhs, f.power_term(kappa, n, c)))
        }
        "fay-q-diagonal" => {
            let s = B::from_i64(kappa);
            let lhs = f.lift(kappa, n, fay_q_radial(&s, kappa, n, &f.r)?);
            let c = -(B::from_integer(&factorial((-n - 1) as u32)) / &four_pi) * minus_four_eta;
            Ok((lhs, f.power_term(kappa, n, c)))
        }
        _ => {
            let s = B::from_i64(kappa);
            let lhs = f.lift(kappa, n, fay_q_radial_regularized(&s, kappa, n, &f.r)?);
            let ratio = B::from_integer(&factorial((2 * kappa + n - 1) as u32))
                / B::from_integer(&factorial((2 * kappa - 1) as u32));
            let c = -(ratio / &four_pi) * minus_four_eta;
            Ok((lhs, f.power_term(kappa, n, c)))
        }
    }
}

/// Fay's functions at the harmonic and diagonal spectral parameters against
/// their closed forms, `count` random `(z, 𝔷)` per identity.
pub fn check_lemma_suite(seed: u64, count: usize, bits: u32) -> Vec<CheckReport> {
    let tol = identity_tolerance(bits);
    let families: [(&'static str, (i64, i64), (i64, i64)); 4] = [
        ("fay-p-harmonic", (-3, 0), (-4, 4)),
        ("fay-q-harmonic", (-3, 0), (-4, 4)),
        ("fay-q-diagonal", (1, 3), (-4, -1)),
        ("fay-q-diagonal-limit", (1, 3), (0, 4)),
    ];
    let mut out = Vec::new();
    for (fi, (anchor, kr, nr)) in families.into_iter().enumerate() {
        let mut rng = stream(seed, 10 + fi as u64);
        let draws: Vec<_> = (0..count)
            .map(|_| (random_pair(&mut rng), rng.gen_range(kr.0..=kr.1), rng.gen_range(nr.0..=nr.1)))
            .collect();
        out.extend(run_draws(bits, &draws, |i, &((z, base), kappa, n)| {
            let p = params([
                ("z", json!([z.0, z.1])),
                ("base", json!([base.0, base.1])),
                ("kappa", json!(kappa)),
                ("n", json!(n)),
            ]);
            report_or_fail(anchor, i, p, tol, |p| {
                let frame = EllipticFrame::new(&point(base)?, &point(z)?);
                let (lhs, rhs) = lemma_sides(anchor, kappa, n, &frame)?;
                Ok(CheckReport::compare(anchor, i, p, &lhs, &rhs, tol))
            })
        }));
    }
    out
}

/// Special functions, residue constants at random `(k, n)`, distances and
/// Fay's closed forms; `count` reports per identity.
pub fn check_identity_suite(seed: u64, count: usize, bits: u32) -> Vec<CheckReport> {
    let count = count.max(1);
    let mut out = check_special_function_suite(seed, count, bits);
    let mut rng = stream(seed, 8);
    out.extend((0..count).map(|i| constant_report(i, rng.gen_range(2..=8), rng.gen_range(-10..=-1))));
    out.extend(check_geometry_suite(seed, count, bits));
    out.extend(check_lemma_suite(seed, count, bits));
    out
}

/// Q̂ carries `Γ(s−σκ)Γ(s+σκ+|n|)`; both must avoid the poles.
fn q_defined(s: i64, kappa: i64, n: i64) -> bool {
    let sk = if n >= 0 { kappa } else { -kappa };
    s - sk > 0 && s + sk + n.abs() > 0
}

fn radial_stencil(r: f64, bits: u32) -> StencilParams {
    let levels = 2 + (bits as usize).saturating_sub(53) / 12;
    StencilParams::new(0.25 * r.min(1.0 - r), levels, 4).expect("positive step")
}

/// Raising recurrences of `P̂` and `Q̂` under `K̂`, including the cases where
/// the coefficient vanishes, by finite differences in `r`.
pub fn check_recurrence_suite(seed: u64, count: usize, bits: u32) -> Vec<CheckReport> {
    let tol = recurrence_tolerance(bits);
    let mut out = Vec::new();

    let mut rng = stream(seed, 20);
    let draws: Vec<(i64, i64, i64, f64)> = (0..count)
        .map(|_| (rng.gen_range(1..=4), rng.gen_range(-3..=3), rng.gen_range(-4..=4), rng.gen_range(0.1..0.9)))
        .collect();
    out.extend(run_draws(bits, &draws, |i, &(s, kappa, n, r)| {
        let p = params([("s", json!(s)), ("kappa", json!(kappa)), ("n", json!(n)), ("r", json!(r))]);
        report_or_fail("radial-raise-p", i, p, tol, |p| {
            let (sr, rr) = (B::from_i64(s), B::from_f64(r));
            let f = |x: &B| fay_p_radial(&sr, kappa, n, x);
            let lhs = radial_k_hat(kappa, n, &f, &rr, &radial_stencil(r, bits))?;
            let rhs = B::from_rational(&e_coeff(s, kappa, n)) * fay_p_radial(&sr, kappa + 1, n - 1, &rr)?;
            Ok(CheckReport::compare("radial-raise-p", i, p, &real(lhs), &real(rhs), tol))
        })
    }));

    let mut rng = stream(seed, 21);
    let draws: Vec<(i64, i64, i64, f64)> = (0..count)
        .map(|_| loop {
            let (s, kappa, n) = (rng.gen_range(1..=4), rng.gen_range(-3..=3), rng.gen_range(-4..=4));
            let r = rng.gen_range(0.1..0.9);
            if q_defined(s, kappa, n) && q_defined(s, kappa + 1, n - 1) {
                break (s, kappa, n, r);
            }
        })
        .collect();
    out.extend(run_draws(bits, &draws, |i, &(s, kappa, n, r)| {
        let p = params([("s", json!(s)), ("kappa", json!(kappa)), ("n", json!(n)), ("r", json!(r))]);
        report_or_fail("radial-raise-q", i, p, tol, |p| {
            let (sr, rr) = (B::from_i64(s), B::from_f64(r));
            let f = |x: &B| fay_q_radial(&sr, kappa, n, x);
            let lhs = radial_k_hat(kappa, n, &f, &rr, &radial_stencil(r, bits))?;
            let rhs = B::from_rational(&d_coeff(s, kappa, n)) * fay_q_radial(&sr, kappa + 1, n - 1, &rr)?;
            Ok(CheckReport::compare("radial-raise-q", i, p, &real(lhs), &real(rhs), tol))
        })
    }));

    let mut rng = stream(seed, 22);
    let draws: Vec<(i64, i64, f64)> = (0..count)
        .map(|_| {
            let k = rng.gen_range(2..=4);
            (k, rng.gen_range(2 - 2 * k..=0), rng.gen_range(0.1..0.9))
        })
        .collect();
    out.extend(run_draws(bits, &draws, |i, &(k, m, r)| {
        let p = params([("k", json!(k)), ("m", json!(m)), ("r", json!(r))]);
        report_or_fail("radial-raise-vanishing", i, p, tol, |p| {
            let (sr, rr) = (B::from_i64(k), B::from_f64(r));
            let f = |x: &B| fay_p_radial(&sr, k - 1, m, x);
            let lhs = radial_k_hat(k - 1, m, &f, &rr, &radial_stencil(r, bits))?;
            let scale = f(&rr)?.abs();
            Ok(CheckReport::vanishing("radial-raise-vanishing", i, p, &real(lhs), &scale, tol))
        })
    }));
    out
}
