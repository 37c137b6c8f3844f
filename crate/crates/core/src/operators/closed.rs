//! Closed-form images of elliptic-expansion terms under `ξ_{2−2k}` and
//! `D^{2k−1}`.

use crate::error::Result;
use crate::geometry::{elliptic_x, UpperHalfPoint};
use crate::num::{factorial, Cx, Real};
use crate::series::psi_summand;
use crate::special_functions::cal_c;
use rug::{Integer, Rational};

fn fact(n: i64) -> Integer {
    factorial(n as u32)
}

/// `(η/π)^{2k−1} (z−ϱ̄)^{−2k} X^{n+1−2k}`, the common shape of `D`-images.
fn d_shape<R: Real>(k: i64, n: i64, rho: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> Cx<R> {
    let pre = (rho.y().clone() / R::pi()).powi(2 * k - 1);
    let u = z.value() - &rho.conj();
    (u.powi(-2 * k) * elliptic_x(rho, z).powi(n + 1 - 2 * k)).scale(&pre)
}

/// Coefficient of the `D`-image of the meromorphic term `(z−ϱ̄)^{2k−2}Xᵐ`:
/// `−(−m+2k−2)!/(−m−1)!` for `m < 0`, zero on `0 ≤ m ≤ 2k−2`, and
/// `m!/(m+1−2k)!` for `m ≥ 2k−1`.
pub fn d_meromorphic_coefficient(k: i64, m: i64) -> Rational {
    if m < 0 {
        -Rational::from((fact(-m + 2 * k - 2), fact(-m - 1)))
    } else if m <= 2 * k - 2 {
        Rational::new()
    } else {
        Rational::from((fact(m), fact(m + 1 - 2 * k)))
    }
}

/// `D^{2k−1}` of `(z−ϱ̄)^{2k−2} Xᵐ`.
pub fn d_meromorphic_term<R: Real>(k: i64, m: i64, rho: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> Cx<R> {
    d_shape(k, m, rho, z).scale(&R::from_rational(&d_meromorphic_coefficient(k, m)))
}

/// `D^{2k−1}` of `(z−ϱ̄)^{2k−2} β(1−r²;2k−1,−n) Xⁿ` for `0 ≤ n ≤ 2k−2`;
/// the `β₀`-terms outside that range are annihilated.
pub fn d_nonmeromorphic_term<R: Real>(k: i64, n: i64, rho: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> Cx<R> {
    if (0..=2 * k - 2).contains(&n) {
        d_shape(k, n, rho, z).scale(&-R::from_integer(&fact(2 * k - 2)))
    } else {
        Cx::zero()
    }
}

/// `ξ_{2−2k}` of a single harmonic term with `c⁻(n) = 1`:
/// `(4η)^{2k−1} ψ_{2k,−n−1}(z,ϱ)`.
pub fn xi_phi_closed<R: Real>(k: i64, n: i64, rho: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> Result<Cx<R>> {
    let pre = (R::from_i64(4) * rho.y()).powi(2 * k - 1);
    Ok(psi_summand(k, -n - 1, rho, z)?.scale(&pre))
}

/// `D^{2k−1}` of the summand `φ_{2−2k,n}`, assembled term by term: the `β`
/// term for `0 ≤ n ≤ 2k−2`, otherwise `C_{2k−1,−n}` times the meromorphic
/// image (the `β₀` part is annihilated).
pub fn d_phi_closed<R: Real>(k: i64, n: i64, rho: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> Result<Cx<R>> {
    if (0..=2 * k - 2).contains(&n) {
        Ok(d_nonmeromorphic_term(k, n, rho, z))
    } else {
        let c = R::from_rational(&cal_c((2 * k - 1) as u32, -n)?);
        Ok(d_meromorphic_term(k, n, rho, z).scale(&c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_image_is_uniform_in_n() {
        // −(2k−2)!(η/π)^{2k−1} ψ_{2k,n+1−2k} for every n
        let rho = UpperHalfPoint::<f64>::from_f64(0.13, 1.21).unwrap();
        let z = UpperHalfPoint::<f64>::from_f64(0.41, 0.87).unwrap();
        for k in 2..5 {
            for n in -6..10 {
                let got = d_phi_closed(k, n, &rho, &z).unwrap();
                let pre = -(fact(2 * k - 2).to_f64()) * (1.21 / std::f64::consts::PI).powi(2 * k as i32 - 1);
                let want = psi_summand(k, n + 1 - 2 * k, &rho, &z).unwrap().scale(&pre);
                assert!((got.clone() - &want).abs() < 1e-12 * want.abs(), "k={k} n={n}");
            }
        }
    }
}
