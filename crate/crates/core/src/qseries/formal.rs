use num_complex::Complex;

use crate::qcore::QParam;
use crate::scalar::Real;

/// Truncated power series `Σ_{n≤N} a_n xⁿ`.
///
/// Divergent series (such as `₂φ₀`) are only ever handled through their
/// coefficients; `evaluate` is meant for convergent ones.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeries<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> FormalSeries<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        FormalSeries { coeffs }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `a_n`, zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Complex<T> {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// Number of retained coefficients (`N + 1`).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `σ_q^l`: `a_n ↦ q^{l n} a_n`. Negative `l` allowed.
    pub fn sigma_pow(&self, qp: &QParam<T>, l: i64) -> Self {
        let ql = qp.powi(l);
        let mut scale = Complex::new(T::one(), T::zero());
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let v = a * scale;
                scale = scale * ql;
                v
            })
            .collect();
        FormalSeries { coeffs }
    }

    pub fn sigma(&self, qp: &QParam<T>) -> Self {
        self.sigma_pow(qp, 1)
    }

    /// Multiplication by `x^m`.
    pub fn mul_monomial(&self, m: usize) -> Self {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); m];
        coeffs.extend_from_slice(&self.coeffs);
        FormalSeries { coeffs }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// Horner evaluation of the truncated sum.
    pub fn evaluate(&self, x: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &a| acc * x + a)
    }
}
