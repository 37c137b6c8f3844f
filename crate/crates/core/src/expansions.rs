//! Elliptic expansions around a point of ℍ, recovered by trapezoidal Fourier
//! quadrature on circles `|X_ϱ(z)| = r`.

use crate::error::{Error, Result};
use crate::geometry::{elliptic_inverse, elliptic_x, one_minus_r_squared, r_squared, UpperHalfPoint};
use crate::num::{Cx, Real};
use crate::operators::FieldSample;
use crate::special_functions::{beta0_split, incomplete_beta_split};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::ops::RangeInclusive;

/// Largest column-scaled condition number accepted when separating the
/// meromorphic and non-meromorphic parts.
pub const MAX_CONDITION: f64 = 1e6;

/// What the expanded function is known to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionKind {
    /// Weight `2k`, no non-meromorphic part; one radius suffices.
    Meromorphic,
    /// Weight `2−2k` with both parts at every index.
    Harmonic,
    /// Weight `2−2k` where the non-meromorphic part only runs over `n < 0`.
    HarmonicCusp,
}

/// Sampling radii and points per circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionParams {
    pub radius: f64,
    pub radius2: f64,
    pub m_quad: usize,
}

impl Default for ExtractionParams {
    fn default() -> Self {
        Self { radius: 0.2, radius2: 0.35, m_quad: 64 }
    }
}

impl ExtractionParams {
    pub fn validate(&self) -> Result<()> {
        for r in [self.radius, self.radius2] {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::InvalidArgument(format!("radius {r} outside (0,1)")));
            }
        }
        if self.radius == self.radius2 {
            return Err(Error::InvalidArgument("the two radii coincide".into()));
        }
        if self.m_quad < 4 {
            return Err(Error::InvalidArgument(format!("m_quad = {} too small", self.m_quad)));
        }
        Ok(())
    }
}

/// Truncated expansion
/// `F(z) = (z−ϱ̄)^{−w} Σ_n (c⁺(n) + c⁻(n) β̃_n(1−r²)) Xⁿ`, where `w` is the
/// weight and `β̃_n` is `β(·;2k−1,−n)` for `0 ≤ n ≤ 2k−2` and `β₀(·;2k−1,−n)`
/// otherwise (`w = 2−2k`).
#[derive(Clone, Debug)]
pub struct EllipticExpansion<R> {
    pub rho: UpperHalfPoint<R>,
    pub weight: i64,
    pub kind: ExpansionKind,
    pub c_plus: BTreeMap<i64, Cx<R>>,
    pub c_minus: BTreeMap<i64, Cx<R>>,
    pub n_range: (i64, i64),
    pub radius_used: R,
    pub residual: R,
    pub params: ExtractionParams,
}

impl<R: Real> EllipticExpansion<R> {
    pub fn c_plus_at(&self, n: i64) -> Cx<R> {
        self.c_plus.get(&n).cloned().unwrap_or_else(Cx::zero)
    }

    pub fn c_minus_at(&self, n: i64) -> Cx<R> {
        self.c_minus.get(&n).cloned().unwrap_or_else(Cx::zero)
    }

    pub fn to_json(&self) -> Value {
        // index -> [re, im] as decimal strings at the working precision
        let coeffs = |m: &BTreeMap<i64, Cx<R>>| -> serde_json::Map<String, Value> {
            m.iter().map(|(n, c)| (n.to_string(), json!([c.re.to_string(), c.im.to_string()]))).collect()
        };
        json!({
            "rho": [self.rho.x().to_f64(), self.rho.y().to_f64()],
            "weight": self.weight,
            "kind": self.kind,
            "n_range": [self.n_range.0, self.n_range.1],
            "c_plus": coeffs(&self.c_plus),
            "c_minus": coeffs(&self.c_minus),
            "residual": self.residual.to_f64(),
            "radius_used": self.radius_used.to_f64(),
            "params": self.params,
        })
    }
}

/// `k` from a non-positive even weight `2−2k`.
fn harmonic_k(weight: i64) -> Result<i64> {
    if weight > 0 || weight % 2 != 0 {
        return Err(Error::InvalidArgument(format!("harmonic expansions need weight 2-2k, got {weight}")));
    }
    Ok((2 - weight) / 2)
}

/// Radial factor `β̃_n(1−r²)` of the non-meromorphic term of index `n`, from
/// `r²` and `1−r²`.
pub fn radial_factor<R: Real>(k: i64, n: i64, r2: &R, one_minus_r2: &R) -> Result<R> {
    let a = (2 * k - 1) as u32;
    if (0..=2 * k - 2).contains(&n) {
        incomplete_beta_split(one_minus_r2, r2, a, -n)
    } else {
        beta0_split(r2, a, -n)
    }
}

/// Samples `G(θ) = F(z)(z−ϱ̄)^w` at `z = X_ϱ⁻¹(re^{iθ_j})`, `θ_j = 2πj/M`,
/// for a vector of fields sharing one evaluator.
fn sample_circle<R: Real>(
    f: &(dyn Fn(&UpperHalfPoint<R>) -> Result<Vec<Cx<R>>> + Sync),
    rho: &UpperHalfPoint<R>,
    weight: i64,
    r: &R,
    m_quad: usize,
) -> Result<Vec<Vec<Cx<R>>>> {
    let bits = R::bits();
    (0..m_quad)
        .into_par_iter()
        .map(|j| {
            R::with_bits(bits, || {
                let t = R::pi().mul_2exp(1) * R::from_i64(j as i64) / R::from_i64(m_quad as i64);
                let w = Cx::from_polar(r, &t);
                let z = elliptic_inverse(rho, &w)?;
                let pre = (z.value() - &rho.conj()).powi(weight);
                Ok(f(&z)?.into_iter().map(|v| v * &pre).collect())
            })
        })
        .collect()
}

/// Discrete Fourier coefficients `A_n = (1/M) Σ_j G_j e^{−inθ_j}` for
/// `−M/2 < n ≤ M/2`, per component.
fn dft<R: Real>(samples: &[Vec<Cx<R>>]) -> Vec<BTreeMap<i64, Cx<R>>> {
    let m = samples.len() as i64;
    let comps = samples.first().map_or(0, |s| s.len());
    let roots: Vec<Cx<R>> = (0..m)
        .map(|j| {
            let t = -(R::pi().mul_2exp(1) * R::from_i64(j) / R::from_i64(m));
            Cx::new(t.cos(), t.sin())
        })
        .collect();
    let inv = R::one() / R::from_i64(m);
    (0..comps)
        .map(|c| {
            (-(m - 1) / 2..=m / 2)
                .map(|n| {
                    let mut acc = Cx::zero();
                    for (j, s) in samples.iter().enumerate() {
                        let idx = (n.rem_euclid(m) * j as i64) % m;
                        acc += &(s[c].clone() * &roots[idx as usize]);
                    }
                    (n, acc.scale(&inv))
                })
                .collect()
        })
        .collect()
}

/// Fourier modes `A_n(r)` of `F(z)(z−ϱ̄)^w` on the circle `|X_ϱ(z)| = r`.
pub fn fourier_modes<R: Real>(
    f: &FieldSample<R>,
    rho: &UpperHalfPoint<R>,
    r: &R,
    m_quad: usize,
    n_range: RangeInclusive<i64>,
) -> Result<BTreeMap<i64, Cx<R>>> {
    check_range(&n_range, m_quad)?;
    let g = |z: &UpperHalfPoint<R>| f.eval(z).map(|v| vec![v]);
    let samples = sample_circle(&g, rho, f.weight, r, m_quad)?;
    let mut all = dft(&samples).remove(0);
    all.retain(|n, _| n_range.contains(n));
    Ok(all)
}

fn check_range(n_range: &RangeInclusive<i64>, m_quad: usize) -> Result<()> {
    let widest = n_range.start().abs().max(n_range.end().abs());
    if !n_range.is_empty() && 2 * widest as usize >= m_quad {
        return Err(Error::InvalidArgument(format!("m_quad = {m_quad} cannot resolve index {widest}")));
    }
    Ok(())
}

/// Solves `A_n(r_i)/r_iⁿ = c⁺ + c⁻ β̃_n(1−r_i²)` for `i = 1, 2`.
pub fn separate_parts<R: Real>(modes: [(&R, &Cx<R>); 2], k: i64, n: i64) -> Result<(Cx<R>, Cx<R>)> {
    let mut rows = Vec::with_capacity(2);
    for (r, a) in modes {
        let r2 = r.sqr();
        let b = radial_factor(k, n, &r2, &(R::one() - &r2))?;
        rows.push((b, a.clone() / &Cx::real(r.powi(n))));
    }
    let (b1, y1) = &rows[0];
    let (b2, y2) = &rows[1];
    let s = R::max_of(b1.clone().abs(), b2.clone().abs());
    let cond = condition_2x2(&(b1.clone() / &s), &(b2.clone() / &s));
    if !(cond <= MAX_CONDITION) {
        return Err(Error::IllConditioned(cond));
    }
    let det = b2.clone() - b1;
    let c_minus = (y2.clone() - y1).scale(&(R::one() / &det));
    let c_plus = y1.clone() - &c_minus.scale(b1);
    Ok((c_plus, c_minus))
}

/// 2-norm condition number of `[[1, b₁], [1, b₂]]`.
fn condition_2x2<R: Real>(b1: &R, b2: &R) -> f64 {
    let (b1, b2) = (b1.to_f64(), b2.to_f64());
    let det = (b2 - b1).abs();
    if det == 0.0 {
        return f64::INFINITY;
    }
    // σ_max·σ_min = |det|, σ_max² + σ_min² = ‖A‖_F²
    let fro2 = 2.0 + b1 * b1 + b2 * b2;
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let smax2 = 0.5 * (fro2 + disc);
    smax2 / det
}

/// Quadrature noise floor of a set of modes: the largest amplitude among the
/// top eighth of the resolvable band, where a smooth input has decayed.
fn noise_floor<R: Real>(modes: &BTreeMap<i64, Cx<R>>, m_quad: usize) -> R {
    let cut = (m_quad as i64 / 2) * 7 / 8;
    modes.iter().filter(|(n, _)| n.abs() >= cut).map(|(_, c)| c.abs()).fold(R::eps(), R::max_of)
}

/// Extracts expansions of several fields sharing one evaluator (for
/// instance a lattice sum evaluated for several indices at once).
pub fn extract_many<R: Real>(
    f: &(dyn Fn(&UpperHalfPoint<R>) -> Result<Vec<Cx<R>>> + Sync),
    rho: &UpperHalfPoint<R>,
    weight: i64,
    kind: ExpansionKind,
    n_range: RangeInclusive<i64>,
    params: &ExtractionParams,
) -> Result<Vec<EllipticExpansion<R>>> {
    params.validate()?;
    check_range(&n_range, params.m_quad)?;
    let k = match kind {
        ExpansionKind::Meromorphic => {
            if weight <= 0 {
                return Err(Error::InvalidArgument(format!("meromorphic expansions need weight 2k, got {weight}")));
            }
            0
        }
        _ => harmonic_k(weight)?,
    };
    let r1 = R::from_f64(params.radius);
    let r2 = R::from_f64(params.radius2);
    let first = dft(&sample_circle(f, rho, weight, &r1, params.m_quad)?);
    let needs_second = match kind {
        ExpansionKind::Meromorphic => false,
        ExpansionKind::Harmonic => !n_range.is_empty(),
        ExpansionKind::HarmonicCusp => *n_range.start() < 0,
    };
    let second = if needs_second { Some(dft(&sample_circle(f, rho, weight, &r2, params.m_quad)?)) } else { None };

    let mut out = Vec::with_capacity(first.len());
    for (comp, modes1) in first.iter().enumerate() {
        let floor = noise_floor(modes1, params.m_quad);
        let keep = |amplitude: R| amplitude > floor.clone() * R::from_i64(10);
        let mut c_plus = BTreeMap::new();
        let mut c_minus = BTreeMap::new();
        for n in n_range.clone() {
            let a1 = &modes1[&n];
            let two_part = match kind {
                ExpansionKind::Meromorphic => false,
                ExpansionKind::Harmonic => true,
                ExpansionKind::HarmonicCusp => n < 0,
            };
            if two_part {
                let modes2 = &second.as_ref().expect("second circle sampled")[comp];
                let (cp, cm) = separate_parts([(&r1, a1), (&r2, &modes2[&n])], k, n)?;
                let r2sq = r1.sqr();
                let b = radial_factor(k, n, &r2sq, &(R::one() - &r2sq))?;
                let rn = r1.powi(n);
                if keep(cp.abs() * &rn) {
                    c_plus.insert(n, cp);
                }
                if keep(cm.abs() * &b.abs() * &rn) {
                    c_minus.insert(n, cm);
                }
            } else if keep(a1.abs()) {
                c_plus.insert(n, a1.clone() / &Cx::real(r1.powi(n)));
            }
        }
        let mut exp = EllipticExpansion {
            rho: rho.clone(),
            weight,
            kind,
            c_plus,
            c_minus,
            n_range: (*n_range.start(), *n_range.end()),
            radius_used: r1.clone(),
            residual: R::zero(),
            params: params.clone(),
        };
        exp.residual = reconstruction_error(&exp, modes1, &r1, params.m_quad)?;
        out.push(exp);
    }
    Ok(out)
}

/// Largest deviation on the sampling circle between the sampled `G` and the
/// expansion, evaluated through the modes (Parseval-free, pointwise).
fn reconstruction_error<R: Real>(
    exp: &EllipticExpansion<R>,
    modes: &BTreeMap<i64, Cx<R>>,
    r: &R,
    m_quad: usize,
) -> Result<R> {
    let r2 = r.sqr();
    let w = R::one() - &r2;
    // residual modes: sampled minus expansion, per index
    let mut diff: BTreeMap<i64, Cx<R>> = modes.clone();
    for (n, d) in diff.iter_mut() {
        let mut model = exp.c_plus_at(*n);
        if let Some(cm) = exp.c_minus.get(n) {
            let k = harmonic_k(exp.weight)?;
            model += &cm.scale(&radial_factor(k, *n, &r2, &w)?);
        }
        *d -= &model.scale(&r.powi(*n));
    }
    let mut worst = R::zero();
    for j in 0..m_quad {
        let t = R::pi().mul_2exp(1) * R::from_i64(j as i64) / R::from_i64(m_quad as i64);
        let mut acc = Cx::zero();
        for (n, d) in &diff {
            let th = t.clone() * R::from_i64(*n);
            acc += &(d.clone() * Cx::new(th.cos(), th.sin()));
        }
        worst = R::max_of(worst, acc.abs());
    }
    Ok(worst)
}

/// [`extract_many`] for a single field.
pub fn extract_expansion<R: Real>(
    f: &FieldSample<R>,
    rho: &UpperHalfPoint<R>,
    kind: ExpansionKind,
    n_range: RangeInclusive<i64>,
    params: &ExtractionParams,
) -> Result<EllipticExpansion<R>> {
    let g = |z: &UpperHalfPoint<R>| f.eval(z).map(|v| vec![v]);
    Ok(extract_many(&g, rho, f.weight, kind, n_range, params)?.remove(0))
}

/// Evaluates a truncated expansion at `z`.
pub fn elliptic_eval<R: Real>(exp: &EllipticExpansion<R>, z: &UpperHalfPoint<R>) -> Result<Cx<R>> {
    let x = elliptic_x(&exp.rho, z);
    let r2 = r_squared(&exp.rho, z);
    let w = one_minus_r_squared(&exp.rho, z);
    let mut sum = Cx::zero();
    for (n, c) in &exp.c_plus {
        sum += &(c.clone() * x.powi(*n));
    }
    if !exp.c_minus.is_empty() {
        let k = harmonic_k(exp.weight)?;
        for (n, c) in &exp.c_minus {
            sum += &(c.clone() * x.powi(*n)).scale(&radial_factor(k, *n, &r2, &w)?);
        }
    }
    Ok(sum * (z.value() - &exp.rho.conj()).powi(-exp.weight))
}
