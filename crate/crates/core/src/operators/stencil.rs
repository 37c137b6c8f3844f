//! Mixed Wirtinger derivatives from samples on concentric circles.
//!
//! On a circle of radius `ρ` around `z`, the Taylor expansion
//! `F(z+w) = Σ ∂_z^p ∂_z̄^q F · w^p w̄^q / (p! q!)` turns into a Fourier
//! series in the angle whose `m`-th mode is
//! `ρ^{|m|} Σ_j ∂_z^{p₀+j} ∂_z̄^{q₀+j} F · ρ^{2j} / ((p₀+j)! (q₀+j)!)`
//! with `p₀ − q₀ = m`. The modes are taken by the trapezoidal rule and the
//! wanted coefficient is read off a polynomial fit in `ρ²` over several radii.

use crate::error::{Error, Result};
use crate::geometry::UpperHalfPoint;
use crate::num::{Cx, Real};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Radius shrink factor between successive circles.
const RATIO: f64 = 1.5;

/// Results are rejected once the rounding-noise estimate exceeds
/// `2^-NOISE_BITS` of the sampled magnitude.
const NOISE_BITS: i32 = 8;

/// Outer radius `h`, number of extra circles used for extrapolation, and
/// sample count per circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StencilParams {
    pub h: f64,
    pub richardson_levels: usize,
    pub points: usize,
}

impl StencilParams {
    pub fn new(h: f64, richardson_levels: usize, points: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("stencil step must be positive, got {h}")));
        }
        if points < 4 {
            return Err(Error::InvalidArgument(format!("need at least 4 points per circle, got {points}")));
        }
        Ok(Self { h, richardson_levels, points })
    }

    /// Defaults for derivatives up to total order `order` at `bits` of
    /// precision, for a field whose nearest singularity is at unit distance.
    pub fn for_order(order: u32, bits: u32) -> Self {
        let points = (8 * (order as usize + 3)).next_power_of_two();
        let (h, richardson_levels) = match (bits <= 64, order) {
            (true, 0 | 1) => (0.1, 3),
            (true, 2) => (0.15, 4),
            // high orders at double precision are noise-limited: few wide circles
            (true, _) => (0.27, 1),
            (false, _) => (0.15, 2 + (bits as usize).saturating_sub(53) / 12),
        };
        Self { h, richardson_levels, points }
    }

    /// A few correct digits at minimal cost, for fields that are expensive to
    /// sample.
    pub fn coarse(order: u32) -> Self {
        let points = (4 * (order as usize + 3)).next_power_of_two();
        let h = if order <= 1 { 0.1 } else { 0.25 };
        Self { h, richardson_levels: 1, points }
    }

    /// Same stencil with the radius multiplied by `scale`, typically the
    /// distance to the nearest singularity of the field.
    pub fn scaled(mut self, scale: f64) -> Self {
        self.h *= scale;
        self
    }
}

/// Coefficient of `t^target` in the polynomial through `(t_l, y_l)`, as
/// weights on the `y_l`.
fn extraction_weights<R: Real>(ts: &[R], target: usize) -> Result<Vec<R>> {
    // solve Vᵀx = e_target, V_{lj} = t_l^j
    let n = ts.len();
    let mut a: Vec<Vec<R>> = (0..n).map(|j| ts.iter().map(|t| t.powi(j as i64)).collect()).collect();
    let mut b: Vec<R> = (0..n).map(|j| if j == target { R::one() } else { R::zero() }).collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].clone().abs().partial_cmp(&a[j][col].clone().abs()).unwrap())
            .unwrap_or(col);
        if a[piv][col].is_zero() {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col].clone() / &a[col][col];
            for c in col..n {
                let d = f.clone() * &a[col][c];
                a[row][c] -= d;
            }
            let d = f * &b[col];
            b[row] -= d;
        }
    }
    let mut x = vec![R::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for c in row + 1..n {
            s -= a[row][c].clone() * &x[c];
        }
        x[row] = s / &a[row][row];
    }
    Ok(x)
}

fn factorial_f64(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Mixed Wirtinger derivatives `∂_z^p ∂_z̄^q F` of a vector-valued field at
/// `z`, for each requested `(p, q)`. Returns `[request][component]`.
pub fn wirtinger_derivatives<R: Real>(
    f: &dyn Fn(&UpperHalfPoint<R>) -> Result<Vec<Cx<R>>>,
    z: &UpperHalfPoint<R>,
    requests: &[(u32, u32)],
    stencil: &StencilParams,
) -> Result<Vec<Vec<Cx<R>>>> {
    let levels = stencil.richardson_levels;
    let m_pts = stencil.points;
    let max_mode = requests.iter().map(|&(p, q)| p.abs_diff(q) as usize).max().unwrap_or(0);
    if 2 * max_mode >= m_pts {
        return Err(Error::InvalidArgument(format!("{m_pts} points cannot resolve mode {max_mode}")));
    }
    if let Some(&(p, q)) = requests.iter().find(|&&(p, q)| p.min(q) as usize > levels) {
        return Err(Error::InvalidArgument(format!(
            "derivative ({p},{q}) needs more than {levels} extrapolation levels"
        )));
    }
    let ratio = R::from_f64(RATIO);
    let radii: Vec<R> = (0..=levels).map(|l| R::from_f64(stencil.h) / ratio.powi(l as i64)).collect();
    let angles: Vec<Cx<R>> = (0..m_pts)
        .map(|j| {
            let t = R::pi().mul_2exp(1) * R::from_i64(j as i64) / R::from_i64(m_pts as i64);
            Cx::new(t.cos(), t.sin())
        })
        .collect();

    let mut samples: Vec<Vec<Vec<Cx<R>>>> = Vec::with_capacity(radii.len());
    for rho in &radii {
        let mut ring = Vec::with_capacity(m_pts);
        for e in &angles {
            let p = UpperHalfPoint::new(z.value() + &e.scale(rho))
                .map_err(|_| Error::InvalidArgument(format!("stencil at {} leaves the upper half-plane", z.value())))?;
            ring.push(f(&p)?);
        }
        samples.push(ring);
    }
    let components = samples[0][0].len();
    let magnitude = samples.iter().flatten().flat_map(|v| v.iter().map(|c| c.abs())).fold(R::zero(), R::max_of);

    // Fourier modes per radius, cached by mode
    let mut modes: BTreeMap<i64, Vec<Vec<Cx<R>>>> = BTreeMap::new();
    for &(p, q) in requests {
        let m = p as i64 - q as i64;
        modes.entry(m).or_insert_with(|| {
            let step = (-m).rem_euclid(m_pts as i64) as usize;
            let inv = R::one() / R::from_i64(m_pts as i64);
            samples
                .iter()
                .map(|ring| {
                    let mut acc = vec![Cx::<R>::zero(); components];
                    for (j, vals) in ring.iter().enumerate() {
                        let tw = &angles[(step * j) % m_pts];
                        for (a, v) in acc.iter_mut().zip(vals) {
                            *a += &(v * tw);
                        }
                    }
                    acc.into_iter().map(|a| a.scale(&inv)).collect()
                })
                .collect()
        });
    }

    let ts: Vec<R> = radii.iter().map(|r| r.sqr()).collect();
    let mut out = Vec::with_capacity(requests.len());
    for &(p, q) in requests {
        let m = p as i64 - q as i64;
        let weights = extraction_weights(&ts, p.min(q) as usize)?;
        let scale = R::from_f64(factorial_f64(p) * factorial_f64(q));
        let mut result = vec![Cx::<R>::zero(); components];
        let mut amplification = R::zero();
        for ((w, a), rho) in weights.iter().zip(&modes[&m]).zip(&radii) {
            let c = w.clone() / rho.powi(m.abs());
            amplification += c.clone().abs();
            for (r, v) in result.iter_mut().zip(a) {
                *r += &v.scale(&c);
            }
        }
        let noise = R::eps() * amplification * &scale * &magnitude;
        if p + q > 0 && noise > magnitude.clone().mul_2exp(-NOISE_BITS) {
            return Err(Error::StepUnderflow(format!(
                "radius {} too small for order {} at {} bits",
                stencil.h,
                p + q,
                R::bits()
            )));
        }
        out.push(result.into_iter().map(|r| r.scale(&scale)).collect());
    }
    Ok(out)
}
