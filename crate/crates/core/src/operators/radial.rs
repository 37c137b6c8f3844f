//! Radial forms of the raising and lowering operators acting on functions of
//! `r = |X_ϱ(z)|`.
//!
//! For `g(z) = ((z−ϱ̄)/(ϱ−z̄))^{−κ} f(r) e^{inθ}`, the weight-`2κ` operator
//! `2iy∂_z + κ` produces `((z−ϱ̄)/(ϱ−z̄))^{−κ−1} e^{i(n−1)θ} K̂_{κ,n}f(r)` and
//! `−2iy∂_z̄ − κ` produces `((z−ϱ̄)/(ϱ−z̄))^{−κ+1} e^{i(n+1)θ} L̂_{κ,n}f(r)`.

use super::stencil::StencilParams;
use crate::error::{Error, Result};
use crate::num::Real;

/// First derivative by central differences with Richardson extrapolation.
pub fn radial_derivative<R: Real>(f: &dyn Fn(&R) -> Result<R>, r: &R, stencil: &StencilParams) -> Result<R> {
    let levels = stencil.richardson_levels;
    let mut h = R::from_f64(stencil.h);
    if h.clone() >= r.clone() || r.clone() + &h >= R::one() {
        return Err(Error::InvalidArgument(format!("radial stencil at r = {r} leaves (0,1)")));
    }
    if h.clone().mul_2exp(-(levels as i32)) < R::eps().mul_2exp(20) {
        return Err(Error::StepUnderflow(format!("radial step {} too small", stencil.h)));
    }
    let mut table = Vec::with_capacity(levels + 1);
    for _ in 0..=levels {
        let d = (f(&(r.clone() + &h))? - f(&(r.clone() - &h))?) / (h.clone() + &h);
        table.push(d);
        h = h.mul_2exp(-1);
    }
    for j in 1..=levels {
        let factor = R::from_i64(1i64 << (2 * j));
        let denom = factor.clone() - R::one();
        for l in (j..=levels).rev() {
            table[l] = (table[l].clone() * &factor - &table[l - 1]) / &denom;
        }
    }
    Ok(table.pop().unwrap_or_else(R::zero))
}

fn radial_potential<R: Real>(kappa: i64, n: i64, r: &R) -> R {
    let w = R::one() - r.sqr();
    R::from_i64(n) * w / (r.clone() + r) - R::from_i64(kappa) * r
}

/// `K̂_{κ,n} = ½(1−r²)∂_r + n(1−r²)/(2r) − κr`.
pub fn radial_k_hat<R: Real>(
    kappa: i64,
    n: i64,
    f: &dyn Fn(&R) -> Result<R>,
    r: &R,
    stencil: &StencilParams,
) -> Result<R> {
    let w = R::one() - r.sqr();
    let d = radial_derivative(f, r, stencil)?;
    Ok(w.mul_2exp(-1) * d + radial_potential::<R>(kappa, n, r) * f(r)?)
}

/// `L̂_{κ,n} = ½(1−r²)∂_r − n(1−r²)/(2r) + κr`.
pub fn radial_l_hat<R: Real>(
    kappa: i64,
    n: i64,
    f: &dyn Fn(&R) -> Result<R>,
    r: &R,
    stencil: &StencilParams,
) -> Result<R> {
    let w = R::one() - r.sqr();
    let d = radial_derivative(f, r, stencil)?;
    Ok(w.mul_2exp(-1) * d - radial_potential::<R>(kappa, n, r) * f(r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::{d_coeff, e_coeff, fay_p_radial, fay_q_radial};
    use crate::{BigFloat, PrecisionGuard};

    fn stencil(r: f64) -> StencilParams {
        StencilParams::new(0.25 * r.min(1.0 - r), 8, 4).unwrap()
    }

    #[test]
    fn raising_recurrences_hold() {
        let _g = PrecisionGuard::new(128);
        let r = BigFloat::from_f64(0.37);
        for s in 1..4i64 {
            let sr = BigFloat::from_i64(s);
            for kappa in -2..3i64 {
                for n in -3..4i64 {
                    let p = |x: &BigFloat| fay_p_radial(&sr, kappa, n, x);
                    let got = radial_k_hat(kappa, n, &p, &r, &stencil(0.37)).unwrap();
                    let want = BigFloat::from_rational(&e_coeff(s, kappa, n))
                        * fay_p_radial(&sr, kappa + 1, n - 1, &r).unwrap();
                    let err = (got - &want).abs().to_f64();
                    assert!(err < 1e-12 * (1.0 + want.abs().to_f64()), "P s={s} κ={kappa} n={n}: {err}");
                    let q = |x: &BigFloat| fay_q_radial(&sr, kappa, n, x);
                    let (Ok(_), Ok(next)) = (q(&r), fay_q_radial(&sr, kappa + 1, n - 1, &r)) else {
                        continue;
                    };
                    let got = radial_k_hat(kappa, n, &q, &r, &stencil(0.37)).unwrap();
                    let want = BigFloat::from_rational(&d_coeff(s, kappa, n)) * next;
                    let err = (got - &want).abs().to_f64();
                    assert!(err < 1e-12 * (1.0 + want.abs().to_f64()), "Q s={s} κ={kappa} n={n}: {err}");
                }
            }
        }
    }
}
