use num_complex::Complex;

use super::QParam;
use crate::scalar::{ln_one_minus, LogValue, Real};

/// `(a;q)_n = Π_{k<n} (1 - a q^k)`; `1` for `n = 0`.
pub fn qpoch_n<T: Real>(a: Complex<T>, qp: &QParam<T>, n: usize) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let q = qp.q();
    let mut p = one;
    let mut aqk = a;
    for _ in 0..n {
        p = p * (one - aqk);
        aqk = aqk * q;
    }
    p
}

/// `ln (a;q)_∞`, summed until `|a q^k| < eps (1 - |q|)`.
///
/// Returns an exact zero when a factor `1 - a q^k` is exactly zero.
pub fn ln_qpoch_inf<T: Real>(a: Complex<T>, qp: &QParam<T>) -> LogValue<T> {
    let one = Complex::new(T::one(), T::zero());
    if a.norm() == T::zero() {
        return LogValue::one();
    }
    let q = qp.q();
    let stop = qp.eps() * (T::one() - qp.abs_q());
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut t = a;
    loop {
        if t == one {
            return LogValue::zero();
        }
        sum = sum + ln_one_minus(t);
        if t.norm() < stop {
            break;
        }
        t = t * q;
    }
    LogValue::from_log(sum)
}

pub fn qpoch_inf<T: Real>(a: Complex<T>, qp: &QParam<T>) -> Complex<T> {
    ln_qpoch_inf(a, qp).value()
}

/// `(a_1, …, a_m; q)_∞`.
pub fn qpoch_multi<T: Real>(args: &[Complex<T>], qp: &QParam<T>) -> Complex<T> {
    args.iter()
        .fold(LogValue::one(), |acc, &a| acc * ln_qpoch_inf(a, qp))
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn finite_products() {
        let qp = QParam::real(0.5).unwrap();
        assert_eq!(qpoch_n(c(0.7), &qp, 0), c(1.0));
        assert_eq!(qpoch_n(c(0.5), &qp, 2), c(0.375));
        assert_eq!(qpoch_n(c(1.0), &qp, 3), c(0.0));
    }

    #[test]
    fn infinite_product_matches_deep_partial_product() {
        let qp = QParam::real(0.5).unwrap();
        let inf = qpoch_inf(c(0.5), &qp);
        let partial = qpoch_n(c(0.5), &qp, 800);
        assert!((inf - partial).norm() <= 1e-14 * partial.norm());
        assert_eq!(qpoch_inf(c(0.0), &qp), c(1.0));
        assert_eq!(qpoch_inf(c(1.0), &qp), c(0.0));
    }

    #[test]
    fn multi_product() {
        let qp = QParam::real(0.3).unwrap();
        assert_eq!(qpoch_multi(&[], &qp), c(1.0));
        let a = Complex::new(0.2, -0.4);
        assert!((qpoch_multi(&[a], &qp) - qpoch_inf(a, &qp)).norm() < 1e-15);
    }

    #[test]
    fn near_one_stays_finite() {
        let qp = QParam::real(0.99).unwrap();
        let v = ln_qpoch_inf(c(0.99), &qp);
        // (q;q)_∞ ~ sqrt(2π/(1-q)) exp(-π²/(6(1-q))) up to O(1) corrections
        let expected = -std::f64::consts::PI.powi(2) / (6.0 * 0.01);
        assert!(v.ln_abs().is_finite());
        assert!((v.ln_abs() - expected).abs() < 5.0);
        let big = ln_qpoch_inf(c(-200.0), &qp);
        assert!(big.ln_abs().is_finite() && big.ln_abs() > 700.0);
    }
}
