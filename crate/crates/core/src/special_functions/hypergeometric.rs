//! Gauss hypergeometric series and Gamma helpers.

use crate::error::{Error, Result};
use crate::num::{factorial, Cx, Real};

const MAX_TERMS: usize = 2_000_000;

/// Returns `Some(m)` when `x` is the non-positive integer `-m`.
pub fn nonpositive_integer<R: Real>(x: &R) -> Option<u64> {
    if *x > R::zero() {
        return None;
    }
    let f = x.to_f64();
    if f.abs() > 1e15 {
        return None;
    }
    let n = f.round() as i64;
    (R::from_i64(n) == *x).then_some(n.unsigned_abs())
}

fn positive_integer<R: Real>(x: &R) -> Option<u32> {
    let f = x.to_f64();
    if !(0.5..=1000.0).contains(&f) {
        return None;
    }
    let n = f.round() as i64;
    (R::from_i64(n) == *x).then_some(n as u32)
}

/// Γ(x), exact through factorials at positive integers; poles are errors.
pub fn gamma<R: Real>(x: &R) -> Result<R> {
    if let Some(n) = positive_integer(x) {
        return Ok(R::from_integer(&factorial(n - 1)));
    }
    if nonpositive_integer(x).is_some() {
        return Err(Error::Pole(format!("Gamma pole at {x}")));
    }
    Ok(x.gamma())
}

/// `₂F₁(a,b;c;Z)` by direct summation of its power series.
///
/// Terminates exactly when `a` or `b` is a non-positive integer; otherwise
/// requires `|Z| < 1` and stops once three consecutive terms fall below
/// `2^-p` times the running sum.
pub fn gauss_2f1<R: Real>(a: &R, b: &R, c: &R, z: &Cx<R>) -> Result<Cx<R>> {
    let stop_a = nonpositive_integer(a);
    let stop_b = nonpositive_integer(b);
    let terminating = match (stop_a, stop_b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    if let Some(m) = nonpositive_integer(c) {
        if terminating.is_none_or(|t| t > m) {
            return Err(Error::Pole(format!("2F1 denominator (c)_n vanishes for c={c}")));
        }
    }
    if terminating.is_none() && z.norm_sqr() >= R::one() {
        return Err(Error::NonConvergence(format!("2F1 series outside the unit disk, |Z|^2 = {}", z.norm_sqr())));
    }

    let tol = R::eps();
    let mut sum = Cx::<R>::one();
    let mut term = Cx::<R>::one();
    let mut small_run = 0;
    for n in 0..MAX_TERMS {
        if terminating == Some(n as u64) {
            return Ok(sum);
        }
        let nr = R::from_i64(n as i64);
        let ratio = (a.clone() + &nr) * (b.clone() + &nr) / ((c.clone() + &nr) * (nr + R::one()));
        term = term.scale(&ratio) * z;
        sum += &term;
        if term.norm_sqr() <= tol.sqr() * sum.norm_sqr() {
            small_run += 1;
            if small_run >= 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence(format!("2F1 series not converged after {MAX_TERMS} terms")))
}

/// Real-argument form of [`gauss_2f1`].
pub fn gauss_2f1_real<R: Real>(a: &R, b: &R, c: &R, z: &R) -> Result<R> {
    Ok(gauss_2f1(a, b, c, &Cx::real(z.clone()))?.re)
}

/// `|₂F₁(a,b;c;Z) − (1−Z)^{c−a−b} ₂F₁(c−a,c−b;c;Z)|`.
pub fn euler_transform_check<R: Real>(a: &R, b: &R, c: &R, z: &R) -> Result<R> {
    let lhs = gauss_2f1_real(a, b, c, z)?;
    let ca = c.clone() - a;
    let cb = c.clone() - b;
    let e = c.clone() - a - b;
    let rhs = (R::one() - z).powf(&e) * gauss_2f1_real(&ca, &cb, c, z)?;
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_parameter_gives_one() {
        let z = Cx::from_f64(0.7, -0.2);
        let v = gauss_2f1(&1.5, &0.0, &2.5, &z).unwrap();
        assert_eq!(v, Cx::one());
        let v = gauss_2f1(&0.0, &-3.2, &0.5, &Cx::from_f64(5.0, 0.0)).unwrap();
        assert_eq!(v, Cx::one());
    }

    #[test]
    fn log_series() {
        let v = gauss_2f1_real(&1.0, &1.0, &2.0, &0.5).unwrap();
        assert!((v - 2.0 * std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn terminating_outside_disk() {
        // 2F1(-2, 1; 1; Z) = (1-Z)^2
        let v = gauss_2f1_real(&-2.0, &1.0, &1.0, &3.0).unwrap();
        assert!((v - 4.0).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        assert!(matches!(gauss_2f1_real(&1.0, &1.0, &2.0, &1.0), Err(Error::NonConvergence(_))));
        assert!(matches!(gauss_2f1_real(&1.0, &1.0, &-2.0, &0.5), Err(Error::Pole(_))));
        // terminates before the denominator vanishes
        assert!(gauss_2f1_real(&-1.0, &1.0, &-2.0, &0.5).is_ok());
    }

    #[test]
    fn gamma_exact_and_poles() {
        assert_eq!(gamma(&5.0).unwrap(), 24.0);
        assert!(gamma(&-2.0).is_err());
        assert!((gamma(&0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }
}
