use super::Real;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Complex number over a [`Real`] carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Self { re, im }
    }
    pub fn real(re: R) -> Self {
        Self { re, im: R::zero() }
    }
    pub fn zero() -> Self {
        Self::real(R::zero())
    }
    pub fn one() -> Self {
        Self::real(R::one())
    }
    pub fn i() -> Self {
        Self::new(R::zero(), R::one())
    }
    pub fn from_f64(re: f64, im: f64) -> Self {
        Self::new(R::from_f64(re), R::from_f64(im))
    }
    pub fn from_i64(n: i64) -> Self {
        Self::real(R::from_i64(n))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
    pub fn norm_sqr(&self) -> R {
        self.re.sqr() + self.im.sqr()
    }
    pub fn abs(&self) -> R {
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let q = small / &big;
        big * (R::one() + q.sqr()).sqrt()
    }
    /// Principal argument in `(-π, π]`.
    pub fn arg(&self) -> R {
        self.im.atan2(&self.re)
    }
    pub fn scale(&self, s: &R) -> Self {
        Self::new(self.re.clone() * s, self.im.clone() * s)
    }
    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Self::new(-self.im.clone(), self.re.clone())
    }
    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Self::new(self.re.clone() / &d, -(self.im.clone() / &d))
    }
    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        Self::new(m.clone() * self.im.cos(), m * self.im.sin())
    }
    pub fn ln(&self) -> Self {
        Self::new(self.abs().ln(), self.arg())
    }
    /// `r·e^{iθ}`.
    pub fn from_polar(r: &R, theta: &R) -> Self {
        Self::new(r.clone() * theta.cos(), r.clone() * theta.sin())
    }
    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    pub fn to_f64(&self) -> Cx<f64> {
        Cx::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl<R: Real> fmt::Display for Cx<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im >= R::zero() {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        }
    }
}

fn mul_parts<R: Real>(a: &Cx<R>, b: &Cx<R>) -> Cx<R> {
    Cx::new(a.re.clone() * &b.re - a.im.clone() * &b.im, a.re.clone() * &b.im + a.im.clone() * &b.re)
}

fn div_parts<R: Real>(a: &Cx<R>, b: &Cx<R>) -> Cx<R> {
    let d = b.norm_sqr();
    Cx::new((a.re.clone() * &b.re + a.im.clone() * &b.im) / &d, (a.im.clone() * &b.re - a.re.clone() * &b.im) / &d)
}

macro_rules! cx_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<R: Real> $tr for Cx<R> {
            type Output = Cx<R>;
            fn $m(self, rhs: Cx<R>) -> Cx<R> {
                $body(&self, &rhs)
            }
        }
        impl<'a, R: Real> $tr<&'a Cx<R>> for Cx<R> {
            type Output = Cx<R>;
            fn $m(self, rhs: &'a Cx<R>) -> Cx<R> {
                $body(&self, rhs)
            }
        }
        impl<'a, 'b, R: Real> $tr<&'a Cx<R>> for &'b Cx<R> {
            type Output = Cx<R>;
            fn $m(self, rhs: &'a Cx<R>) -> Cx<R> {
                $body(self, rhs)
            }
        }
    };
}

cx_binop!(Add, add, |a: &Cx<R>, b: &Cx<R>| Cx::new(a.re.clone() + &b.re, a.im.clone() + &b.im));
cx_binop!(Sub, sub, |a: &Cx<R>, b: &Cx<R>| Cx::new(a.re.clone() - &b.re, a.im.clone() - &b.im));
cx_binop!(Mul, mul, mul_parts);
cx_binop!(Div, div, div_parts);

impl<R: Real> Neg for Cx<R> {
    type Output = Cx<R>;
    fn neg(self) -> Cx<R> {
        Cx::new(-self.re, -self.im)
    }
}

impl<R: Real> AddAssign<&Cx<R>> for Cx<R> {
    fn add_assign(&mut self, rhs: &Cx<R>) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<R: Real> SubAssign<&Cx<R>> for Cx<R> {
    fn sub_assign(&mut self, rhs: &Cx<R>) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<R: Real> MulAssign<&Cx<R>> for Cx<R> {
    fn mul_assign(&mut self, rhs: &Cx<R>) {
        *self = mul_parts(self, rhs);
    }
}
