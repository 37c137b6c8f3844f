use super::Real;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::cell::Cell;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

thread_local! {
    static PRECISION: Cell<u32> = const { Cell::new(128) };
}

/// Current working precision (bits) for [`BigFloat`] values created on this
/// thread.
pub fn working_precision() -> u32 {
    PRECISION.with(|p| p.get())
}

/// Sets the thread's working precision until dropped.
pub struct PrecisionGuard {
    previous: u32,
}

impl PrecisionGuard {
    pub fn new(bits: u32) -> Self {
        let bits = bits.max(53);
        let previous = PRECISION.with(|p| p.replace(bits));
        Self { previous }
    }
}

impl Drop for PrecisionGuard {
    fn drop(&mut self) {
        PRECISION.with(|p| p.set(self.previous));
    }
}

/// MPFR float at the thread's working precision.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct BigFloat(pub Float);

impl BigFloat {
    fn wrap<T>(v: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        BigFloat(Float::with_val(working_precision(), v))
    }

    pub fn inner(&self) -> &Float {
        &self.0
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // enough decimal digits to round-trip the binary precision
        let digits = (self.0.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        write!(f, "{}", self.0.to_string_radix(10, Some(digits)))
    }
}

macro_rules! big_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                BigFloat::wrap((&self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                BigFloat::wrap((&self.0).$m(&rhs.0))
            }
        }
        impl $atr for BigFloat {
            fn $am(&mut self, rhs: BigFloat) {
                self.0.$am(&rhs.0);
            }
        }
        impl<'a> $atr<&'a BigFloat> for BigFloat {
            fn $am(&mut self, rhs: &'a BigFloat) {
                self.0.$am(&rhs.0);
            }
        }
    };
}

big_binop!(Add, add, AddAssign, add_assign);
big_binop!(Sub, sub, SubAssign, sub_assign);
big_binop!(Mul, mul, MulAssign, mul_assign);
big_binop!(Div, div, DivAssign, div_assign);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl Real for BigFloat {
    fn from_f64(x: f64) -> Self {
        Self::wrap(x)
    }
    fn from_i64(n: i64) -> Self {
        Self::wrap(n)
    }
    fn from_integer(n: &Integer) -> Self {
        Self::wrap(n)
    }
    fn from_rational(q: &Rational) -> Self {
        Self::wrap(q)
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        let parsed = Float::parse(s.trim()).ok()?;
        Some(Self::wrap(parsed))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn bits() -> u32 {
        working_precision()
    }
    fn with_bits<T>(bits: u32, f: impl FnOnce() -> T) -> T {
        let _guard = PrecisionGuard::new(bits);
        f()
    }
    fn pi() -> Self {
        Self::wrap(Constant::Pi)
    }
    fn sqrt(&self) -> Self {
        Self::wrap(self.0.sqrt_ref())
    }
    fn ln(&self) -> Self {
        Self::wrap(self.0.ln_ref())
    }
    fn exp(&self) -> Self {
        Self::wrap(self.0.exp_ref())
    }
    fn sin(&self) -> Self {
        Self::wrap(self.0.sin_ref())
    }
    fn cos(&self) -> Self {
        Self::wrap(self.0.cos_ref())
    }
    fn tanh(&self) -> Self {
        Self::wrap(self.0.tanh_ref())
    }
    fn acosh(&self) -> Self {
        Self::wrap(self.0.acosh_ref())
    }
    fn atan2(&self, x: &Self) -> Self {
        Self::wrap(self.0.atan2_ref(&x.0))
    }
    fn powf(&self, e: &Self) -> Self {
        Self::wrap((&self.0).pow(&e.0))
    }
    fn gamma(&self) -> Self {
        Self::wrap(self.0.gamma_ref())
    }
    fn abs(&self) -> Self {
        Self::wrap(self.0.abs_ref())
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn mul_2exp(&self, e: i32) -> Self {
        let mut v = Self::wrap(&self.0);
        v.0 <<= e;
        v
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn powi(&self, n: i64) -> Self {
        match i32::try_from(n) {
            Ok(n) => Self::wrap((&self.0).pow(n)),
            Err(_) => Self::wrap((&self.0).pow(&Integer::from(n))),
        }
    }
}
