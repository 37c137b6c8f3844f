//! Numeric carriers: a small real-number abstraction implemented for `f64`
//! and for MPFR-backed [`BigFloat`], a complex type over it, and compensated
//! summation.

mod big;
mod complex;
mod sum;

pub use big::{working_precision, BigFloat, PrecisionGuard};
pub use complex::Cx;
pub use sum::{CompensatedSum, ComplexSum};

use rug::{Integer, Rational};
use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Real scalar used by every numeric routine in the crate.
///
/// `f64` is the fast path for lattice sums; [`BigFloat`] carries the
/// configurable-precision path. Binary operators are available by value and
/// with a borrowed right-hand side.
pub trait Real:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    fn from_f64(x: f64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_integer(n: &Integer) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Parses a decimal literal at working precision.
    fn parse_decimal(s: &str) -> Option<Self>;
    fn to_f64(&self) -> f64;

    /// Working precision in bits for values created on this thread.
    fn bits() -> u32;
    /// Runs `f` with the working precision set to `bits` (no-op for `f64`).
    fn with_bits<T>(bits: u32, f: impl FnOnce() -> T) -> T;

    fn pi() -> Self;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tanh(&self) -> Self;
    fn acosh(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn gamma(&self) -> Self;
    fn abs(&self) -> Self;
    fn is_finite(&self) -> bool;
    /// `self · 2^e`.
    fn mul_2exp(&self, e: i32) -> Self;

    fn zero() -> Self {
        Self::from_i64(0)
    }
    fn one() -> Self {
        Self::from_i64(1)
    }
    /// Unit roundoff `2^-bits`.
    fn eps() -> Self {
        Self::one().mul_2exp(-(Self::bits() as i32))
    }
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    fn sqr(&self) -> Self {
        self.clone() * self
    }
    fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }
    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_integer(n: &Integer) -> Self {
        n.to_f64()
    }
    fn from_rational(q: &Rational) -> Self {
        q.to_f64()
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn bits() -> u32 {
        53
    }
    fn with_bits<T>(_bits: u32, f: impl FnOnce() -> T) -> T {
        f()
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn tanh(&self) -> Self {
        f64::tanh(*self)
    }
    fn acosh(&self) -> Self {
        f64::acosh(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn gamma(&self) -> Self {
        statrs::function::gamma::gamma(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn mul_2exp(&self, e: i32) -> Self {
        self * 2f64.powi(e)
    }
    fn eps() -> Self {
        f64::EPSILON / 2.0
    }
    fn powi(&self, n: i64) -> Self {
        match i32::try_from(n) {
            Ok(n) => f64::powi(*self, n),
            Err(_) => f64::powf(*self, n as f64),
        }
    }
}

/// Converts a value between two real carriers through a decimal string when
/// the target is wider than `f64`.
pub fn convert<A: Real, B: Real>(x: &A) -> B {
    if A::bits() <= 53 {
        B::from_f64(x.to_f64())
    } else {
        B::parse_decimal(&format!("{x}")).unwrap_or_else(|| B::from_f64(x.to_f64()))
    }
}

/// Exact factorial as an arbitrary-size integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}
