use num_complex::Complex;

use super::{ln_qpoch_inf, qpoch_inf, QParam};
use crate::error::{Error, Result};
use crate::scalar::{LogValue, Real};

/// `Γ_q(x) = (q;q)_∞ / (q^x;q)_∞ · (1-q)^{1-x}` for real `0 < q < 1`.
pub fn q_gamma<T: Real>(qp: &QParam<T>, x: Complex<T>) -> Result<Complex<T>> {
    if !qp.is_real_positive() {
        return Err(Error::InvalidParameter(
            "q-gamma needs real 0 < q < 1".into(),
        ));
    }
    let one = Complex::new(T::one(), T::zero());
    let qx = qp.pow(x);
    let mut t = qx;
    let mut k = 0usize;
    while t.norm() >= T::lit(0.5) && k <= qp.max_terms() {
        if (one - t).norm() < qp.guard() {
            return Err(Error::Pole(format!(
                "q-gamma pole: q^x q^{k} = 1 at x = {x}"
            )));
        }
        t = t * qp.q();
        k += 1;
    }
    let num = ln_qpoch_inf(qp.q(), qp);
    let den = ln_qpoch_inf(qx, qp);
    let scale = LogValue::from_log((one - x) * (T::one() - qp.q().re).ln());
    let v = num
        .checked_div(den)
        .ok_or_else(|| Error::Pole(format!("(q^x;q)_∞ = 0 at x = {x}")))?;
    Ok((v * scale).value())
}

/// `E_q(z) = Σ q^{n(n-1)/2} zⁿ / (q;q)_n = (-z;q)_∞`.
pub fn q_exp_e<T: Real>(qp: &QParam<T>, z: Complex<T>) -> Complex<T> {
    qpoch_inf(-z, qp)
}

/// Jackson q-derivative `(f(x) - f(qx)) / ((1-q) x)`.
pub fn q_derivative<T, F>(f: F, qp: &QParam<T>, x: Complex<T>) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    if x.norm() == T::zero() {
        return Err(Error::Domain("q-derivative at x = 0".into()));
    }
    let one = Complex::new(T::one(), T::zero());
    Ok((f(x) - f(qp.q() * x)) / ((one - qp.q()) * x))
}
