use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The base `q` together with the truncation policy used by every sum and
/// product evaluated with it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QParam<T> {
    q: Complex<T>,
    ln_q: Complex<T>,
    eps: T,
    max_terms: usize,
    guard: T,
}

impl<T: Real> QParam<T> {
    pub const DEFAULT_MAX_TERMS: usize = 20_000;

    /// Validates `0 < |q| < 1`.
    pub fn new(q: Complex<T>) -> Result<Self> {
        let m = q.norm();
        if !(m > T::zero() && m < T::one()) || !q.re.is_finite() || !q.im.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "q = {q} must satisfy 0 < |q| < 1"
            )));
        }
        Ok(QParam {
            q,
            ln_q: q.ln(),
            eps: T::lit(T::DEFAULT_EPS),
            max_terms: Self::DEFAULT_MAX_TERMS,
            guard: T::lit(T::DEFAULT_GUARD),
        })
    }

    pub fn real(q: T) -> Result<Self> {
        Self::new(Complex::new(q, T::zero()))
    }

    pub fn with_eps(mut self, eps: T) -> Result<Self> {
        if !(eps > T::zero()) {
            return Err(Error::InvalidParameter(format!("eps = {eps} must be > 0")));
        }
        self.eps = eps;
        Ok(self)
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<Self> {
        if max_terms < 16 {
            return Err(Error::InvalidParameter(format!(
                "max_terms = {max_terms} must be at least 16"
            )));
        }
        self.max_terms = max_terms;
        Ok(self)
    }

    pub fn with_guard(mut self, guard: T) -> Result<Self> {
        if !(guard > T::zero() && guard < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "guard = {guard} must lie in (0, 1)"
            )));
        }
        self.guard = guard;
        Ok(self)
    }

    #[inline]
    pub fn q(&self) -> Complex<T> {
        self.q
    }

    /// Principal logarithm of `q`.
    #[inline]
    pub fn ln_q(&self) -> Complex<T> {
        self.ln_q
    }

    #[inline]
    pub fn abs_q(&self) -> T {
        self.q.norm()
    }

    #[inline]
    pub fn eps(&self) -> T {
        self.eps
    }

    #[inline]
    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    #[inline]
    pub fn guard(&self) -> T {
        self.guard
    }

    /// `q^α = exp(α log q)` with the principal logarithm.
    pub fn pow(&self, alpha: Complex<T>) -> Complex<T> {
        (alpha * self.ln_q).exp()
    }

    /// Integer power `qⁿ` (negative `n` allowed).
    pub fn powi(&self, n: i64) -> Complex<T> {
        if n.unsigned_abs() <= i32::MAX as u64 {
            self.q.powi(n as i32)
        } else {
            (self.ln_q * T::from_i64(n).unwrap()).exp()
        }
    }

    /// `q^{n(n-1)/2}` as a logarithm, exact in the exponent.
    pub fn ln_triangular(&self, n: i64) -> Complex<T> {
        let e = T::from_i64(n).unwrap() * T::from_i64(n - 1).unwrap() / T::lit(2.0);
        self.ln_q * e
    }

    /// True when `q` is a real number in `(0, 1)`.
    pub fn is_real_positive(&self) -> bool {
        self.q.im == T::zero() && self.q.re > T::zero()
    }

    pub(crate) fn stopper(&self) -> Stopper<T> {
        Stopper::new(self.eps, self.max_terms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum StopState {
    Continue,
    Converged,
    Exhausted,
}

/// Truncation rule: stop once three consecutive terms are below
/// `eps · |partial sum|`, or when `max_terms` terms have been taken.
#[derive(Clone, Debug)]
pub(crate) struct Stopper<T> {
    eps: T,
    max_terms: usize,
    small_run: u32,
    count: usize,
}

impl<T: Real> Stopper<T> {
    pub(crate) fn new(eps: T, max_terms: usize) -> Self {
        Stopper {
            eps,
            max_terms,
            small_run: 0,
            count: 0,
        }
    }

    pub(crate) fn push(&mut self, term: Complex<T>, sum: Complex<T>) -> StopState {
        self.count += 1;
        if term.norm() <= self.eps * sum.norm() {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        if self.small_run >= 3 {
            StopState::Converged
        } else if self.count >= self.max_terms {
            StopState::Exhausted
        } else {
            StopState::Continue
        }
    }
}
