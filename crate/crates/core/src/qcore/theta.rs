use num_complex::Complex;

use super::{spiral_guard, QParam, SpiralSet, StopState};
use crate::error::{Error, Result};
use crate::scalar::{LogValue, Real};

/// Splits `x = q^m · y` with `ln|y|` within half a step of zero, i.e.
/// `|q|^{1/2} ≤ |y| ≤ |q|^{-1/2}`.
fn reduce<T: Real>(qp: &QParam<T>, x: Complex<T>) -> (i64, Complex<T>) {
    let ln_abs_q = qp.abs_q().ln();
    let m = (x.norm().ln() / ln_abs_q).round();
    let m = m.to_i64().unwrap_or(0);
    if m == 0 {
        return (0, x);
    }
    (m, x * qp.powi(-m))
}

/// Bilateral theta sum at an already reduced argument.
pub fn theta_series_reduced<T: Real>(qp: &QParam<T>, y: Complex<T>) -> Result<Complex<T>> {
    let q = qp.q();
    let one = Complex::new(T::one(), T::zero());
    let mut sum = one;
    let y_inv = y.inv();
    // n ≥ 1: t_n = t_{n-1} q^{n-1} y
    let mut up = one;
    let mut qn_up = one;
    // n ≤ -1: t_{-k} = t_{-k+1} q^k / y
    let mut down = one;
    let mut qn_down = one;
    let mut stop_up = qp.stopper();
    let mut stop_down = qp.stopper();
    let (mut up_done, mut down_done) = (false, false);
    while !(up_done && down_done) {
        if !up_done {
            up = up * qn_up * y;
            qn_up = qn_up * q;
            sum = sum + up;
            match stop_up.push(up, sum) {
                StopState::Continue => {}
                StopState::Converged => up_done = true,
                StopState::Exhausted => {
                    return Err(Error::NoConvergence("theta series (n > 0)".into()))
                }
            }
        }
        if !down_done {
            qn_down = qn_down * q;
            down = down * qn_down * y_inv;
            sum = sum + down;
            match stop_down.push(down, sum) {
                StopState::Continue => {}
                StopState::Converged => down_done = true,
                StopState::Exhausted => {
                    return Err(Error::NoConvergence("theta series (n < 0)".into()))
                }
            }
        }
    }
    Ok(sum)
}

/// Smallest `Re(1/s)`, `s = −ln q`, at which [`ln_theta`] switches to the
/// modular form (real `q ≳ 0.24`).
pub const MODULAR_MIN_RE_INV_S: f64 = 0.7;

/// `θ(y)` through the Poisson-summed (Jacobi imaginary) form
///
/// ```text
/// θ(y) = √(2π/s) e^{s c²/2} Σ_k e^{−2π²k²/s} e^{2πikc},   s = −ln q,  c = ½ + ln y / s
/// ```
///
/// For reduced `y` every term of the dual sum is at most 1 in modulus, so
/// unlike the direct series it does not cancel catastrophically where
/// `|θ|` is small (near the negative axis when `q` is close to 1).
pub fn theta_modular_reduced<T: Real>(qp: &QParam<T>, y: Complex<T>) -> Result<LogValue<T>> {
    let s = -qp.ln_q();
    let pi = T::PI();
    let two_pi = Complex::new(T::zero(), pi + pi);
    let c = Complex::new(T::lit(0.5), T::zero()) + y.ln() / s;
    let a = -Complex::new(T::lit(2.0) * pi * pi, T::zero()) / s;
    let mut sum = Complex::new(T::one(), T::zero());
    let tiny = T::epsilon() * T::lit(0.01);
    for k in 1..qp.max_terms() {
        let kf = T::from_usize(k).unwrap();
        let base = a * (kf * kf);
        let turn = two_pi * c * kf;
        let (up, down) = ((base + turn).exp(), (base - turn).exp());
        sum = sum + up + down;
        if k >= 2 && up.norm() < tiny && down.norm() < tiny {
            let pref =
                (Complex::new(pi + pi, T::zero()) / s).ln() * T::lit(0.5) + s * c * c * T::lit(0.5);
            return Ok(LogValue::from_log(pref) * LogValue::from_value(sum));
        }
    }
    Err(Error::NoConvergence("modular theta sum".into()))
}

fn use_modular<T: Real>(qp: &QParam<T>) -> bool {
    let s = -qp.ln_q();
    s.re / s.norm_sqr() >= T::lit(MODULAR_MIN_RE_INV_S)
}

/// `ln θ(x)` after argument reduction.
///
/// With `x = q^m y`, `θ(x) = θ(y) · y^{-m} · q^{-m(m-1)/2}`. The reduced
/// value comes from the bilateral series, or from its modular transform
/// when `q` is close enough to the unit circle for the series to cancel.
pub fn ln_theta<T: Real>(qp: &QParam<T>, x: Complex<T>) -> Result<LogValue<T>> {
    if x.norm() == T::zero() {
        return Err(Error::Domain("theta is undefined at x = 0".into()));
    }
    let (m, y) = reduce(qp, x);
    let base = if use_modular(qp) {
        theta_modular_reduced(qp, y)?
    } else {
        LogValue::from_value(theta_series_reduced(qp, y)?)
    };
    if m == 0 {
        return Ok(base);
    }
    let mf = T::from_i64(m).unwrap();
    let shift = -(y.ln() * mf) - qp.ln_triangular(m);
    Ok(base * LogValue::from_log(shift))
}

pub fn theta<T: Real>(qp: &QParam<T>, x: Complex<T>) -> Result<Complex<T>> {
    Ok(ln_theta(qp, x)?.value())
}

/// `θ(a x) / θ(x)`, the single-valued replacement of `x^{-α}` when `a = q^α`.
pub fn theta_ratio<T: Real>(qp: &QParam<T>, a: Complex<T>, x: Complex<T>) -> Result<Complex<T>> {
    let zeros = SpiralSet::new(qp.guard()).with(-Complex::new(T::one(), T::zero()), "[-1;q]");
    if x.norm() != T::zero() && spiral_guard(&zeros, qp, x) {
        return Err(Error::Pole(format!(
            "theta ratio denominator vanishes: x = {x} lies on [-1;q]"
        )));
    }
    if a == Complex::new(T::one(), T::zero()) {
        return Ok(a);
    }
    let num = ln_theta(qp, a * x)?;
    let den = ln_theta(qp, x)?;
    num.checked_div(den)
        .map(|v| v.value())
        .ok_or_else(|| Error::Pole(format!("theta({x}) = 0")))
}
