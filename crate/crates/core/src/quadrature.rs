//! Adaptive Gauss–Legendre quadrature at working precision, used as an
//! independent oracle for closed-form special functions.

use crate::error::{Error, Result};
use crate::num::Real;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence at the working precision.
#[derive(Clone, Debug)]
pub struct GaussLegendre<R> {
    nodes: Vec<R>,
    weights: Vec<R>,
}

impl<R: Real> GaussLegendre<R> {
    pub fn new(order: usize) -> Self {
        let n = order as i64;
        let tol = R::eps().mul_2exp(4);
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        for i in 0..order {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
            let mut x = R::from_f64(guess);
            let mut dp = R::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, &x);
                let dx = p / &d;
                x -= &dx;
                dp = d;
                if dx.abs() <= tol {
                    break;
                }
            }
            let (_, d) = legendre(n, &x);
            if d.is_finite() {
                dp = d;
            }
            let w = R::from_i64(2) / ((R::one() - x.sqr()) * dp.sqr());
            nodes.push(x);
            weights.push(w);
        }
        Self { nodes, weights }
    }

    fn apply(&self, f: &dyn Fn(&R) -> R, a: &R, b: &R) -> R {
        let half = (b.clone() - a).mul_2exp(-1);
        let mid = (b.clone() + a).mul_2exp(-1);
        let mut acc = R::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = mid.clone() + half.clone() * x;
            acc += w.clone() * f(&t);
        }
        acc * half
    }

    /// Integrates `f` over `[a, b]` by recursive bisection until each panel's
    /// one-panel and two-panel estimates agree to `rel_tol` of the total.
    pub fn integrate(&self, f: &dyn Fn(&R) -> R, a: &R, b: &R, rel_tol: &R) -> Result<R> {
        let whole = self.apply(f, a, b);
        let scale = whole.abs();
        let mut stack = vec![(a.clone(), b.clone(), whole, 0u32)];
        let mut total = R::zero();
        while let Some((lo, hi, est, depth)) = stack.pop() {
            let mid = (lo.clone() + &hi).mul_2exp(-1);
            let left = self.apply(f, &lo, &mid);
            let right = self.apply(f, &mid, &hi);
            let refined = left.clone() + &right;
            let err = (refined.clone() - &est).abs();
            let floor = R::max_of(scale.clone(), refined.abs()) * rel_tol;
            if err <= floor || err.is_zero() {
                total += refined;
            } else if depth >= 60 {
                return Err(Error::NonConvergence("adaptive quadrature depth exceeded".into()));
            } else {
                stack.push((mid.clone(), hi, right, depth + 1));
                stack.push((lo, mid, left, depth + 1));
            }
        }
        Ok(total)
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre<R: Real>(n: i64, x: &R) -> (R, R) {
    let mut p0 = R::one();
    let mut p1 = x.clone();
    for j in 2..=n {
        let jr = R::from_i64(j);
        let p2 = (R::from_i64(2 * j - 1) * x * &p1 - R::from_i64(j - 1) * &p0) / &jr;
        p0 = p1;
        p1 = p2;
    }
    let d = R::from_i64(n) * (x.clone() * &p1 - &p0) / (x.sqr() - R::one());
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{BigFloat, PrecisionGuard};

    #[test]
    fn polynomial_exact() {
        let g = GaussLegendre::<f64>::new(8);
        let v = g.integrate(&|t: &f64| t.powi(9) + 3.0 * t * t, &0.0, &2.0, &1e-15).unwrap();
        assert!((v - (102.4 + 8.0)).abs() < 1e-12);
    }

    #[test]
    fn high_precision_log() {
        let _g = PrecisionGuard::new(128);
        let g = GaussLegendre::<BigFloat>::new(20);
        let one = BigFloat::one();
        let two = BigFloat::from_i64(2);
        let tol = BigFloat::from_f64(1e-32);
        let v = g.integrate(&|t: &BigFloat| BigFloat::one() / t, &one, &two, &tol).unwrap();
        let err = (v - two.ln()).abs().to_f64();
        assert!(err < 1e-32, "{err}");
    }
}
