//! Scalar plumbing shared by every module.

use std::fmt::{Debug, Display};
use std::ops::Mul;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar underlying all complex arithmetic: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Default relative truncation tolerance for series and products.
    const DEFAULT_EPS: f64;
    /// Default relative guard distance around excluded q-spirals.
    const DEFAULT_GUARD: f64;

    /// Converts an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }
}

impl Real for f32 {
    const DEFAULT_EPS: f64 = 1e-6;
    const DEFAULT_GUARD: f64 = 1e-4;
}

impl Real for f64 {
    const DEFAULT_EPS: f64 = 1e-14;
    const DEFAULT_GUARD: f64 = 1e-6;
}

/// `ln(1 - t)` with the cancellation of `1 - t` compensated for small `t`.
pub(crate) fn ln_one_minus<T: Real>(t: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let u = one - t;
    if u == one {
        return -t;
    }
    // Goldberg's correction: ln(u) * (-t) / (u - 1)
    u.ln() * (-t) / (u - one)
}

/// Reduces the imaginary part of a logarithm into `(-π, π]`.
#[inline]
pub(crate) fn wrap_log<T: Real>(z: Complex<T>) -> Complex<T> {
    let two_pi = T::PI() + T::PI();
    if z.im.abs() <= T::PI() {
        return z;
    }
    let k = (z.im / two_pi).round();
    Complex::new(z.re, z.im - k * two_pi)
}

/// A complex number carried as its logarithm, so that products of huge and
/// tiny factors (theta functions and infinite products near `|q| → 1`)
/// can be combined before exponentiating. `None` encodes an exact zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue<T> {
    log: Option<Complex<T>>,
}

impl<T: Real> LogValue<T> {
    pub fn zero() -> Self {
        LogValue { log: None }
    }

    pub fn one() -> Self {
        LogValue {
            log: Some(Complex::new(T::zero(), T::zero())),
        }
    }

    pub fn from_value(z: Complex<T>) -> Self {
        if z.re == T::zero() && z.im == T::zero() {
            Self::zero()
        } else {
            LogValue { log: Some(z.ln()) }
        }
    }

    pub fn from_log(l: Complex<T>) -> Self {
        LogValue {
            log: Some(wrap_log(l)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log.is_none()
    }

    /// The logarithm (any branch), or `None` for zero.
    pub fn ln(&self) -> Option<Complex<T>> {
        self.log
    }

    /// `ln |z|`; `-∞` for zero.
    pub fn ln_abs(&self) -> T {
        self.log.map_or(T::neg_infinity(), |l| l.re)
    }

    pub fn value(&self) -> Complex<T> {
        match self.log {
            None => Complex::new(T::zero(), T::zero()),
            Some(l) => l.exp(),
        }
    }

    pub fn recip(&self) -> Option<Self> {
        self.log.map(|l| LogValue { log: Some(-l) })
    }

    pub fn checked_div(&self, rhs: Self) -> Option<Self> {
        rhs.recip().map(|r| *self * r)
    }

    pub fn powc(&self, e: Complex<T>) -> Self {
        match self.log {
            None => *self,
            Some(l) => Self::from_log(l * e),
        }
    }
}

impl<T: Real> Mul for LogValue<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        match (self.log, rhs.log) {
            (Some(a), Some(b)) => LogValue::from_log(a + b),
            _ => LogValue::zero(),
        }
    }
}

impl<T: Real> Mul<Complex<T>> for LogValue<T> {
    type Output = Self;

    fn mul(self, rhs: Complex<T>) -> Self {
        self * LogValue::from_value(rhs)
    }
}
