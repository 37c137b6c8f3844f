//! Exact combinatorial constants.

use crate::error::{Error, Result};
use crate::num::{factorial, Real};
use rug::ops::Pow;
use rug::{Integer, Rational};

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

fn fact(n: i64) -> Integer {
    factorial(u32::try_from(n).expect("factorial argument out of range"))
}

/// `Σ_{0≤j≤a−1, j≠−b} C(a−1,j)(−1)^j/(j+b)`, the constant separating the
/// incomplete beta function from its closed-form part.
pub fn cal_c(a: u32, b: i64) -> Result<Rational> {
    if a < 1 {
        return Err(Error::InvalidArgument(format!("cal_c needs a >= 1, got {a}")));
    }
    let mut acc = Rational::new();
    for j in 0..a {
        let denom = j as i64 + b;
        if denom == 0 {
            continue;
        }
        let mut term = Rational::from((binomial(a - 1, j), Integer::from(denom)));
        if j % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    Ok(acc)
}

/// `(−n−1)!(2k−2)!/(2k−2−n)!` for `n < 0`; the residue constant of the
/// principal part of the harmonic series.
pub fn script_c_principal(k: i64, n: i64) -> Result<Rational> {
    if k < 2 || n >= 0 {
        return Err(Error::InvalidArgument(format!("script_c_principal needs k >= 2 and n < 0, got k={k}, n={n}")));
    }
    Ok(Rational::from((fact(-n - 1) * fact(2 * k - 2), fact(2 * k - 2 - n))))
}

/// `n!(2k−2)!` for `n ≥ 0`, `(2k−2−n)!` for `n < 0`.
pub fn script_c_hat(k: i64, n: i64) -> Result<Integer> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("script_c_hat needs k >= 2, got {k}")));
    }
    Ok(if n >= 0 { fact(n) * fact(2 * k - 2) } else { fact(2 * k - 2 - n) })
}

/// Exact rational multiple of `1/π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvPiMultiple {
    pub coeff: Rational,
}

impl InvPiMultiple {
    pub fn value<R: Real>(&self) -> R {
        R::from_rational(&self.coeff) / R::pi()
    }
}

/// `(−4)^{κ−1}/π · n!` for `n ≥ 0` and `(−4)^{κ−1}/π · Γ(1−2κ−n)/Γ(1−2κ)` for
/// `n < 0`; the normalization linking Fay's `Q̂` to the incomplete beta.
pub fn a_const(kappa: i64, n: i64) -> Result<InvPiMultiple> {
    let e = kappa - 1;
    let pow = Integer::from(-4).pow(e.unsigned_abs() as u32);
    let base = if e >= 0 { Rational::from(pow) } else { Rational::from((Integer::from(1), pow)) };
    let factor = if n >= 0 {
        Rational::from(fact(n))
    } else {
        if kappa > 0 {
            return Err(Error::Pole(format!("a_const: Gamma(1-2kappa) has a pole for kappa={kappa}")));
        }
        Rational::from((fact(-2 * kappa - n), fact(-2 * kappa)))
    };
    Ok(InvPiMultiple { coeff: base * factor })
}

/// Coefficient of the raising recurrence for `P̂` at integer `s`.
pub fn e_coeff(s: i64, kappa: i64, n: i64) -> Rational {
    if n >= 1 {
        Rational::from(n)
    } else {
        Rational::from(((s + kappa) * (s - kappa - 1), 1 + n.abs()))
    }
}

/// Coefficient of the raising recurrence for `Q̂` at integer `s`.
pub fn d_coeff(s: i64, kappa: i64, n: i64) -> Rational {
    if n >= 1 {
        Rational::from(-(s + kappa) * (s - kappa - 1))
    } else {
        Rational::from(-1)
    }
}

/// Euler beta `B(a,b) = (a−1)!(b−1)!/(a+b−1)!` for positive integers.
pub fn complete_beta(a: u32, b: u32) -> Rational {
    Rational::from((factorial(a - 1) * factorial(b - 1), factorial(a + b - 1)))
}
