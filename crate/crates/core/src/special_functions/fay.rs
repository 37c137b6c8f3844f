//! Fay's radial eigenfunctions `P̂ⁿ_{s,κ}` and `Q̂ⁿ_{s,κ}`.

use super::hypergeometric::{gamma, gauss_2f1_real, nonpositive_integer};
use crate::error::{Error, Result};
use crate::num::Real;

/// `sgn(n + 1/2)`.
fn sgn_star(n: i64) -> i64 {
    if n >= 0 {
        1
    } else {
        -1
    }
}

fn check_r<R: Real>(r: &R, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { *r >= R::zero() } else { *r > R::zero() };
    if !ok || *r >= R::one() {
        return Err(Error::InvalidArgument(format!("radial argument {r} outside the unit interval")));
    }
    Ok(())
}

/// `P̂ⁿ_{s,κ}(r) = r^{|n|}(1−r²)^s ₂F₁(s−σκ, s+σκ+|n|; 1+|n|; r²)`, `σ = sgn*(n)`.
pub fn fay_p_radial<R: Real>(s: &R, kappa: i64, n: i64, r: &R) -> Result<R> {
    check_r(r, true)?;
    let sk = R::from_i64(sgn_star(n) * kappa);
    let m = R::from_i64(n.abs());
    let r2 = r.sqr();
    let f = gauss_2f1_real(&(s.clone() - &sk), &(s.clone() + &sk + &m), &(R::one() + &m), &r2)?;
    Ok(r.powi(n.abs()) * (R::one() - &r2).powf(s) * f)
}

/// The `r`-dependent factor of `Q̂` without its Gamma prefactor.
fn q_shape<R: Real>(s: &R, kappa: i64, n: i64, r: &R) -> Result<R> {
    let sk = R::from_i64(sgn_star(n) * kappa);
    let m = R::from_i64(n.abs());
    let w = R::one() - r.sqr();
    let f = gauss_2f1_real(&(s.clone() + &sk), &(s.clone() - &sk - &m), &(s.clone() + s), &w)?;
    Ok(r.powi(-n.abs()) * w.powf(s) * f)
}

/// `Q̂ⁿ_{s,κ}(r) = −Γ(s−σκ)Γ(s+σκ+|n|)/(4πΓ(2s)) · r^{−|n|}(1−r²)^s
/// ₂F₁(s+σκ, s−σκ−|n|; 2s; 1−r²)`.
pub fn fay_q_radial<R: Real>(s: &R, kappa: i64, n: i64, r: &R) -> Result<R> {
    check_r(r, false)?;
    let sk = R::from_i64(sgn_star(n) * kappa);
    let g1 = gamma(&(s.clone() - &sk))?;
    Ok(g1 * fay_q_radial_regularized(s, kappa, n, r)?)
}

/// `Q̂ⁿ_{s,κ}(r)/Γ(s−σκ)`, finite where `Γ(s−σκ)` has a pole; at `s = κ`
/// this is the limit `lim_{s→κ} Q̂/Γ(s−κ)` for `n ≥ 0`.
pub fn fay_q_radial_regularized<R: Real>(s: &R, kappa: i64, n: i64, r: &R) -> Result<R> {
    check_r(r, false)?;
    let sk = R::from_i64(sgn_star(n) * kappa);
    let two_s = s.clone() + s;
    if nonpositive_integer(&two_s).is_some() {
        return Err(Error::Pole(format!("Gamma(2s) pole at s={s}")));
    }
    let g2 = gamma(&(s.clone() + &sk + R::from_i64(n.abs())))?;
    let g3 = gamma(&two_s)?;
    let four_pi = R::from_i64(4) * R::pi();
    Ok(-(g2 / (four_pi * g3)) * q_shape(s, kappa, n, r)?)
}
