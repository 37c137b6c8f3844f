//! Upper half-plane points, the Möbius action of SL₂(ℤ), elliptic
//! coordinates around a base point, and bounded enumeration of SL₂(ℤ).

use crate::error::{Error, Result};
use crate::num::{Cx, Real};
use serde::Serialize;

/// A complex number with strictly positive imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperHalfPoint<R> {
    value: Cx<R>,
}

impl<R: Real> UpperHalfPoint<R> {
    pub fn new(value: Cx<R>) -> Result<Self> {
        if value.im > R::zero() && value.is_finite() {
            Ok(Self { value })
        } else {
            Err(Error::InvalidArgument(format!("{value} is not in the upper half-plane")))
        }
    }

    pub fn from_f64(x: f64, y: f64) -> Result<Self> {
        Self::new(Cx::from_f64(x, y))
    }

    pub fn value(&self) -> &Cx<R> {
        &self.value
    }
    pub fn x(&self) -> &R {
        &self.value.re
    }
    pub fn y(&self) -> &R {
        &self.value.im
    }
    pub fn conj(&self) -> Cx<R> {
        self.value.conj()
    }
}

/// An element of SL₂(ℤ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UnimodularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl UnimodularMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
            return Err(Error::InvalidArgument(format!("({a} {b}; {c} {d}) does not have determinant 1")));
        }
        Ok(Self { a, b, c, d })
    }

    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Self = Self { a: 0, b: -1, c: 1, d: 0 };

    pub fn translation(n: i64) -> Self {
        Self { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// Equality in PSL₂(ℤ).
    pub fn projectively_eq(&self, o: &Self) -> bool {
        self == o || *self == o.neg()
    }

    /// `cz + d`.
    pub fn automorphy<R: Real>(&self, z: &Cx<R>) -> Cx<R> {
        Cx::new(R::from_i64(self.c) * &z.re + R::from_i64(self.d), R::from_i64(self.c) * &z.im)
    }
}

/// Polar form `X_ϱ(z) = r e^{iθ}` of the elliptic coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticCoordinate<R> {
    pub r: R,
    pub theta: R,
}

/// `Mz = (az+b)/(cz+d)`, with the imaginary part formed as `y/|cz+d|²`.
pub fn moebius_apply<R: Real>(m: &UnimodularMatrix, z: &UpperHalfPoint<R>) -> UpperHalfPoint<R> {
    let j = m.automorphy(z.value());
    let num = Cx::new(R::from_i64(m.a) * z.x() + R::from_i64(m.b), R::from_i64(m.a) * z.y());
    let q = num / &j;
    let im = z.y().clone() / j.norm_sqr();
    UpperHalfPoint { value: Cx::new(q.re, im) }
}

/// `X_ϱ(z) = (z−ϱ)/(z−ϱ̄)`.
pub fn elliptic_x<R: Real>(rho: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> Cx<R> {
    (z.value() - rho.value()) / &(z.value() - &rho.conj())
}

/// `r_ϱ(z)² = |z−ϱ|²/|z−ϱ̄|²`.
pub fn r_squared<R: Real>(rho: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> R {
    (z.value() - rho.value()).norm_sqr() / (z.value() - &rho.conj()).norm_sqr()
}

/// `1 − r_ϱ(z)² = 4 y η/|z−ϱ̄|²`, free of cancellation near the boundary.
pub fn one_minus_r_squared<R: Real>(rho: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> R {
    R::from_i64(4) * z.y() * rho.y() / (z.value() - &rho.conj()).norm_sqr()
}

/// Inverse of `X_ϱ`: `z = (ϱ − ϱ̄w)/(1 − w)`.
pub fn elliptic_inverse<R: Real>(rho: &UpperHalfPoint<R>, w: &Cx<R>) -> Result<UpperHalfPoint<R>> {
    if w.norm_sqr() >= R::one() {
        return Err(Error::InvalidArgument(format!("|w| >= 1 for w = {w}")));
    }
    let one_minus = Cx::<R>::one() - w;
    let num = rho.value() - &(rho.conj() * w);
    let re = (num / &one_minus).re;
    // Im z = η(1−|w|²)/|1−w|²
    let im = rho.y().clone() * (R::one() - w.norm_sqr()) / one_minus.norm_sqr();
    UpperHalfPoint::new(Cx::new(re, im))
}

/// `d(z,ϱ) = arccosh(1 + |z−ϱ|²/(2yη))`.
pub fn hyperbolic_distance<R: Real>(z: &UpperHalfPoint<R>, rho: &UpperHalfPoint<R>) -> R {
    let q = (z.value() - rho.value()).norm_sqr() / (R::from_i64(2) * z.y() * rho.y());
    if q.is_zero() {
        return R::zero();
    }
    // arccosh(1+q) = ln(1 + q + sqrt(q(q+2)))
    let s = (q.clone() * (q.clone() + R::from_i64(2))).sqrt();
    (R::one() + q + s).ln()
}

/// Polar coordinates of `X_ϱ(z)` with `θ ∈ (−π, π]` and `θ = 0` at `z = ϱ`.
pub fn r_theta<R: Real>(rho: &UpperHalfPoint<R>, z: &UpperHalfPoint<R>) -> EllipticCoordinate<R> {
    let x = elliptic_x(rho, z);
    if x.re.is_zero() && x.im.is_zero() {
        return EllipticCoordinate { r: R::zero(), theta: R::zero() };
    }
    let mut theta = x.arg();
    if theta <= -R::pi() {
        theta = R::pi();
    }
    EllipticCoordinate { r: x.abs(), theta }
}

/// Reduces `z` into the closure of the standard fundamental domain
/// `|x| ≤ 1/2, |z| ≥ 1`; returns the reduced point and `M` with `Mz = z*`.
pub fn reduce_to_fundamental_domain<R: Real>(z: &UpperHalfPoint<R>) -> (UpperHalfPoint<R>, UnimodularMatrix) {
    let mut m = UnimodularMatrix::IDENTITY;
    let mut w = z.clone();
    let half = R::from_f64(0.5);
    for _ in 0..10_000 {
        let shift = w.x().to_f64().round() as i64;
        if shift != 0 {
            let t = UnimodularMatrix::translation(-shift);
            m = t.mul(&m);
            w = UpperHalfPoint { value: Cx::new(w.x().clone() - R::from_i64(shift), w.y().clone()) };
        }
        if w.x().abs() > half {
            continue;
        }
        if w.value().norm_sqr() < R::one() {
            m = UnimodularMatrix::S.mul(&m);
            w = moebius_apply(&UnimodularMatrix::S, &w);
        } else {
            break;
        }
    }
    (w, m)
}

/// Order of the stabilizer of `z` in PSL₂(ℤ): 2 on the orbit of `i`, 3 on the
/// orbit of `e^{iπ/3}`, 1 elsewhere. Detection tolerance is `2^{-p/2}`.
pub fn stabilizer_order<R: Real>(z: &UpperHalfPoint<R>) -> u32 {
    let (w, _) = reduce_to_fundamental_domain(z);
    let tol = R::one().mul_2exp(-(R::bits() as i32) / 2);
    let i = Cx::<R>::i();
    if (w.value() - &i).abs() < tol {
        return 2;
    }
    let h = R::from_i64(3).sqrt().mul_2exp(-1);
    for sign in [1.0, -1.0] {
        let corner = Cx::new(R::from_f64(0.5 * sign), h.clone());
        if (w.value() - &corner).abs() < tol {
            return 3;
        }
    }
    1
}

/// A coprime bottom row `(c, d)` with the particular solution `(a₀, b₀)` of
/// `a₀d − b₀c = 1`, `|a₀|` minimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BottomRow {
    pub c: i64,
    pub d: i64,
    pub a0: i64,
    pub b0: i64,
}

impl BottomRow {
    pub fn matrix(&self, t: i64) -> UnimodularMatrix {
        UnimodularMatrix { a: self.a0 + t * self.c, b: self.b0 + t * self.d, c: self.c, d: self.d }
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Coprime bottom rows with `0 ≤ c ≤ N`, `|d| ≤ N` (`c = 0` forces `d = 1`),
/// in lexicographic `(c, d)` order.
pub fn bottom_rows(n_cd: i64) -> Vec<BottomRow> {
    let mut rows = Vec::new();
    rows.push(BottomRow { c: 0, d: 1, a0: 1, b0: 0 });
    for c in 1..=n_cd {
        for d in -n_cd..=n_cd {
            let (g, x, _) = ext_gcd(d.rem_euclid(c), c);
            if g != 1 {
                continue;
            }
            // x·d ≡ 1 (mod c)
            let mut a0 = x.rem_euclid(c);
            if 2 * a0 > c {
                a0 -= c;
            }
            let b0 = (a0 * d - 1) / c;
            debug_assert_eq!(a0 * d - b0 * c, 1);
            rows.push(BottomRow { c, d, a0, b0 });
        }
    }
    rows
}

/// One representative of each `{M, −M}` in the truncation box, ordered
/// lexicographically in `(c, d, t)`.
pub fn enumerate_sl2(n_cd: i64, n_t: i64) -> Result<Vec<UnimodularMatrix>> {
    if n_cd < 1 || n_t < 0 {
        return Err(Error::InvalidArgument(format!("enumeration needs N_cd >= 1 and N_t >= 0, got {n_cd}, {n_t}")));
    }
    let mut out = Vec::new();
    for row in bottom_rows(n_cd) {
        for t in -n_t..=n_t {
            out.push(row.matrix(t));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> UpperHalfPoint<f64> {
        UpperHalfPoint::from_f64(x, y).unwrap()
    }

    #[test]
    fn moebius_examples() {
        let z = p(0.3, 0.7);
        assert_eq!(moebius_apply(&UnimodularMatrix::IDENTITY, &z), z);
        let si = moebius_apply(&UnimodularMatrix::S, &p(0.0, 1.0));
        assert!((si.x().abs() + (si.y() - 1.0).abs()) < 1e-15);
        let tz = moebius_apply(&UnimodularMatrix::translation(1), &z);
        assert!((tz.x() - 1.3).abs() < 1e-15);
    }

    #[test]
    fn elliptic_examples() {
        let i = p(0.0, 1.0);
        let x = elliptic_x(&i, &p(0.0, 2.0));
        assert!((x.re - 1.0 / 3.0).abs() < 1e-15 && x.im.abs() < 1e-15);
        assert_eq!(elliptic_x(&i, &i), Cx::zero());
        let back = elliptic_inverse(&i, &Cx::from_f64(1.0 / 3.0, 0.0)).unwrap();
        assert!((back.y() - 2.0).abs() < 1e-14 && back.x().abs() < 1e-15);
        assert!(elliptic_inverse(&i, &Cx::from_f64(1.0, 0.0)).is_err());
        let c = r_theta(&i, &i);
        assert_eq!((c.r, c.theta), (0.0, 0.0));
        let c = r_theta(&i, &p(0.0, 2.0));
        assert!((c.r - 1.0 / 3.0).abs() < 1e-15 && c.theta == 0.0);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hyperbolic_distance(&p(0.2, 0.5), &p(0.2, 0.5)), 0.0);
        let d = hyperbolic_distance(&p(0.0, 1.0), &p(0.0, 2.0));
        assert!((d - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn reduction_examples() {
        let (w, m) = reduce_to_fundamental_domain(&p(5.0, 1.0));
        assert!((w.x().abs() + (w.y() - 1.0).abs()) < 1e-14);
        assert!(m.projectively_eq(&UnimodularMatrix::translation(-5)));
        let (w, _) = reduce_to_fundamental_domain(&p(0.0, 0.5));
        assert!((w.x().abs() + (w.y() - 2.0).abs()) < 1e-14);
        let z = p(0.1, 1.3);
        let (w, m) = reduce_to_fundamental_domain(&z);
        assert_eq!(w, z);
        assert!(m.projectively_eq(&UnimodularMatrix::IDENTITY));
    }

    #[test]
    fn stabilizers() {
        assert_eq!(stabilizer_order(&p(0.0, 1.0)), 2);
        assert_eq!(stabilizer_order(&p(0.5, 3f64.sqrt() / 2.0)), 3);
        assert_eq!(stabilizer_order(&p(0.1, 1.3)), 1);
        // orbit points of i and ρ
        let m = UnimodularMatrix::new(2, 1, 5, 3).unwrap();
        assert_eq!(stabilizer_order(&moebius_apply(&m, &p(0.0, 1.0))), 2);
        assert_eq!(stabilizer_order(&moebius_apply(&m, &p(-0.5, 3f64.sqrt() / 2.0))), 3);
    }

    #[test]
    fn smallest_enumeration() {
        let ms = enumerate_sl2(1, 0).unwrap();
        let rows: Vec<(i64, i64)> = ms.iter().map(|m| (m.c, m.d)).collect();
        assert_eq!(rows, vec![(0, 1), (1, -1), (1, 0), (1, 1)]);
        assert!(ms.iter().all(|m| m.a * m.d - m.b * m.c == 1));
    }
}
