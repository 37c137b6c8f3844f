//! Differential operators on functions of the upper half-plane, evaluated by
//! finite differences, together with closed-form images of expansion terms
//! and the radial operators acting on Fay's functions.

mod closed;
mod radial;
mod stencil;

pub use closed::{d_meromorphic_coefficient, d_meromorphic_term, d_nonmeromorphic_term, d_phi_closed, xi_phi_closed};
pub use radial::{radial_derivative, radial_k_hat, radial_l_hat};
pub use stencil::{wirtinger_derivatives, StencilParams};

use crate::error::Result;
use crate::geometry::UpperHalfPoint;
use crate::num::{Cx, Real};

type Evaluator<'a, R> = Box<dyn Fn(&UpperHalfPoint<R>) -> Result<Cx<R>> + Send + Sync + 'a>;

/// A complex-valued function on ℍ together with the weight it transforms
/// with. The evaluator may be called concurrently.
pub struct FieldSample<'a, R> {
    evaluator: Evaluator<'a, R>,
    pub weight: i64,
}

impl<'a, R: Real> FieldSample<'a, R> {
    pub fn new<F>(weight: i64, f: F) -> Self
    where
        F: Fn(&UpperHalfPoint<R>) -> Result<Cx<R>> + Send + Sync + 'a,
    {
        Self { evaluator: Box::new(f), weight }
    }

    pub fn eval(&self, z: &UpperHalfPoint<R>) -> Result<Cx<R>> {
        (self.evaluator)(z)
    }

    fn derivatives(
        &self,
        z: &UpperHalfPoint<R>,
        requests: &[(u32, u32)],
        stencil: &StencilParams,
    ) -> Result<Vec<Cx<R>>> {
        let f = |w: &UpperHalfPoint<R>| self.eval(w).map(|v| vec![v]);
        let d = wirtinger_derivatives(&f, z, requests, stencil)?;
        Ok(d.into_iter().map(|mut v| v.swap_remove(0)).collect())
    }
}

fn two_i<R: Real>() -> Cx<R> {
    Cx::new(R::zero(), R::from_i64(2))
}

/// `ξ_{2κ}F = 2i y^{2κ} conj(∂_z̄ F)`.
pub fn apply_xi<R: Real>(
    f: &FieldSample<R>,
    kappa: i64,
    z: &UpperHalfPoint<R>,
    stencil: &StencilParams,
) -> Result<Cx<R>> {
    let dzbar = f.derivatives(z, &[(0, 1)], stencil)?.remove(0);
    Ok((two_i::<R>() * dzbar.conj()).scale(&z.y().powi(2 * kappa)))
}

/// `D^{2k−1}F = (2πi)^{1−2k} ∂_z^{2k−1} F`.
pub fn apply_d<R: Real>(f: &FieldSample<R>, k: i64, z: &UpperHalfPoint<R>, stencil: &StencilParams) -> Result<Cx<R>> {
    let order = (2 * k - 1) as u32;
    let dz = f.derivatives(z, &[(order, 0)], stencil)?.remove(0);
    let two_pi_i = Cx::new(R::zero(), R::pi().mul_2exp(1));
    Ok(dz * two_pi_i.powi(1 - 2 * k))
}

/// `Δ_{2κ}F = −4y²∂_z∂_z̄F + 4iκy ∂_z̄F`.
pub fn apply_laplacian<R: Real>(
    f: &FieldSample<R>,
    kappa: i64,
    z: &UpperHalfPoint<R>,
    stencil: &StencilParams,
) -> Result<Cx<R>> {
    let d = f.derivatives(z, &[(1, 1), (0, 1)], stencil)?;
    let y = z.y();
    let second = d[0].scale(&(y.sqr() * R::from_i64(-4)));
    let first = d[1].mul_i().scale(&(R::from_i64(4 * kappa) * y));
    Ok(second + first)
}

/// `R_w F = 2i∂_zF + (w/y)F` for the weight `w`.
pub fn apply_raise<R: Real>(
    f: &FieldSample<R>,
    weight: i64,
    z: &UpperHalfPoint<R>,
    stencil: &StencilParams,
) -> Result<Cx<R>> {
    let dz = f.derivatives(z, &[(1, 0)], stencil)?.remove(0);
    Ok(two_i::<R>() * dz + f.eval(z)?.scale(&(R::from_i64(weight) / z.y())))
}

/// `L F = −2iy²∂_z̄F`.
pub fn apply_lower<R: Real>(f: &FieldSample<R>, z: &UpperHalfPoint<R>, stencil: &StencilParams) -> Result<Cx<R>> {
    let dzbar = f.derivatives(z, &[(0, 1)], stencil)?.remove(0);
    Ok((two_i::<R>() * dzbar).scale(&-z.y().sqr()))
}

/// `R^m_w = R_{w+2m−2} ∘ ⋯ ∘ R_{w+2} ∘ R_w`, each raise applied numerically
/// to the numerical output of the previous one.
pub fn iterated_raise<R: Real>(
    f: &FieldSample<R>,
    weight: i64,
    times: u32,
    z: &UpperHalfPoint<R>,
    stencil: &StencilParams,
) -> Result<Cx<R>> {
    fn level<R: Real>(f: &FieldSample<R>, w: i64, m: u32, z: &UpperHalfPoint<R>, st: &StencilParams) -> Result<Cx<R>> {
        if m == 0 {
            return f.eval(z);
        }
        let inner = |p: &UpperHalfPoint<R>| level(f, w, m - 1, p, st).map(|v| vec![v]);
        let dz = wirtinger_derivatives(&inner, z, &[(1, 0)], st)?.remove(0).remove(0);
        let w_top = w + 2 * (m as i64 - 1);
        Ok(two_i::<R>() * dz + level(f, w, m - 1, z, st)?.scale(&(R::from_i64(w_top) / z.y())))
    }
    level(f, weight, times, z, stencil)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::phi_summand;

    fn rel(a: &Cx<f64>, b: &Cx<f64>) -> f64 {
        (a.clone() - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn operators_on_phi_summand_match_closed_forms() {
        let rho = UpperHalfPoint::<f64>::from_f64(0.13, 1.21).unwrap();
        let z = UpperHalfPoint::<f64>::from_f64(0.41, 0.87).unwrap();
        let dist = (z.value().clone() - rho.value()).abs();
        for k in 2..4 {
            for n in -3..4 {
                let f = FieldSample::new(2 - 2 * k, |w: &UpperHalfPoint<f64>| phi_summand(k, n, &rho, w));
                let xi = apply_xi(&f, 1 - k, &z, &StencilParams::for_order(1, 53).scaled(dist)).unwrap();
                let xi_c = xi_phi_closed(k, n, &rho, &z).unwrap();
                assert!(rel(&xi, &xi_c) < 1e-6, "xi k={k} n={n}: {xi} vs {xi_c}");
                let d = apply_d(&f, k, &z, &StencilParams::for_order(2 * k as u32 - 1, 53).scaled(dist)).unwrap();
                let d_c = d_phi_closed(k, n, &rho, &z).unwrap();
                assert!(rel(&d, &d_c) < 1e-6, "D k={k} n={n}: {d} vs {d_c}");
            }
        }
    }

    #[test]
    fn exponential_is_fixed_by_d() {
        let z = UpperHalfPoint::<f64>::from_f64(0.2, 0.9).unwrap();
        let f = FieldSample::new(0, |w: &UpperHalfPoint<f64>| {
            Ok(w.value().mul_i().scale(&(2.0 * std::f64::consts::PI)).exp())
        });
        for k in 2..4 {
            let d = apply_d(&f, k, &z, &StencilParams::for_order(2 * k as u32 - 1, 53)).unwrap();
            let v = f.eval(&z).unwrap();
            assert!(rel(&d, &v) < 1e-6, "k={k}: {d} vs {v}");
        }
    }
}
