//! Incomplete beta function with integer parameters.

use super::constants::{cal_c, complete_beta};
use crate::error::{Error, Result};
use crate::num::Real;
use rug::Integer;

fn check_a(a: u32) -> Result<()> {
    if a < 1 {
        return Err(Error::InvalidArgument(format!("beta needs a >= 1, got {a}")));
    }
    Ok(())
}

fn log_term_active(a: u32, b: i64) -> bool {
    1 - a as i64 <= b && b <= 0
}

/// `β(Z;a,b) = ∫₀^Z t^{a−1}(1−t)^{b−1} dt` for `0 ≤ Z < 1`, and at `Z = 1`
/// when `b > 0`.
pub fn incomplete_beta<R: Real>(z: &R, a: u32, b: i64) -> Result<R> {
    let w = R::one() - z;
    incomplete_beta_split(z, &w, a, b)
}

/// [`incomplete_beta`] with the complement `1 − Z` supplied separately, for
/// callers that know it more accurately than `1 − Z` can be formed.
pub fn incomplete_beta_split<R: Real>(z: &R, w: &R, a: u32, b: i64) -> Result<R> {
    check_a(a)?;
    if *z < R::zero() || *z > R::one() {
        return Err(Error::InvalidArgument(format!("beta argument {z} outside [0,1]")));
    }
    if w.is_zero() {
        if b > 0 {
            return Ok(R::from_rational(&complete_beta(a, b as u32)));
        }
        return Err(Error::Divergence(format!("beta(1; {a}, {b}) diverges")));
    }
    if z.is_zero() {
        return Ok(R::zero());
    }
    if *z < R::from_f64(0.5) {
        Ok(beta_series(z, a, b))
    } else {
        Ok(beta0_split(w, a, b)? + R::from_rational(&cal_c(a, b)?))
    }
}

/// `Z^a Σ_m (1−b)_m/(m!(a+m)) Z^m`; used below `Z = 1/2`, where the closed
/// form would cancel.
fn beta_series<R: Real>(z: &R, a: u32, b: i64) -> R {
    let tol = R::eps();
    let mut sum = R::zero();
    let mut coef = R::one();
    let mut zm = R::one();
    let mut small_run = 0;
    for m in 0i64.. {
        let term = coef.clone() * &zm / R::from_i64(a as i64 + m);
        sum += &term;
        let next = 1 - b + m;
        if next == 0 {
            break;
        }
        if term.abs() <= tol.clone() * sum.abs() {
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
        coef = coef * R::from_i64(next) / R::from_i64(m + 1);
        zm *= z;
    }
    z.powi(a as i64) * sum
}

/// Closed-form part `β₀(Z;a,b) = β(Z;a,b) − C_{a,b}`, including the
/// logarithmic term when `1−a ≤ b ≤ 0`.
pub fn beta0<R: Real>(z: &R, a: u32, b: i64) -> Result<R> {
    check_a(a)?;
    if *z < R::zero() || *z > R::one() {
        return Err(Error::InvalidArgument(format!("beta0 argument {z} outside [0,1]")));
    }
    beta0_split(&(R::one() - z), a, b)
}

/// `β₀` expressed through `w = 1 − Z`.
pub fn beta0_split<R: Real>(w: &R, a: u32, b: i64) -> Result<R> {
    check_a(a)?;
    let log_active = log_term_active(a, b);
    if w.is_zero() {
        if log_active {
            return Err(Error::Divergence(format!("beta0(1; {a}, {b}) has a log singularity")));
        }
        if b > 0 {
            return Ok(R::zero());
        }
    }
    let mut acc = R::zero();
    for j in 0..a {
        let e = j as i64 + b;
        if e == 0 {
            continue;
        }
        let binom = Integer::from(Integer::binomial_u(a - 1, j));
        let mut term = R::from_integer(&binom) / R::from_i64(e) * w.powi(e);
        if j % 2 == 0 {
            term = -term;
        }
        acc += term;
    }
    if log_active {
        let binom = Integer::from(Integer::binomial_u(a - 1, (-b) as u32));
        let mut term = R::from_integer(&binom) * w.ln();
        if (b + 1).rem_euclid(2) == 1 {
            term = -term;
        }
        acc += term;
    }
    Ok(acc)
}
