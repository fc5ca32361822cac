use num_complex::Complex;

use super::{phi21_c0_continued, phi21_continued};
use crate::error::{Error, Result};
use crate::qcore::{ln_qpoch_inf, ln_theta, theta_ratio, QParam, SpiralSet};
use crate::scalar::{LogValue, Real};

/// Spirals where `u_2` cannot be evaluated: the zeros of `θ(−qx)` and the
/// singular spiral of the continued `₂φ₁(q/a,q/b;0;q,abx)`.
pub fn u2_exclusions<T: Real>(a: Complex<T>, b: Complex<T>, qp: &QParam<T>) -> SpiralSet<T> {
    let one = Complex::new(T::one(), T::zero());
    SpiralSet::new(qp.guard())
        .with(one, "[1;q]")
        .with(one / (a * b), "[1/(ab);q]")
}

/// Spirals where `S_μ(a,b;q,x)` cannot be evaluated.
pub fn v_exclusions<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    mu: Complex<T>,
    qp: &QParam<T>,
) -> SpiralSet<T> {
    let one = Complex::new(T::one(), T::zero());
    SpiralSet::new(qp.guard())
        .with(-one / mu, "[-1/mu;q]")
        .with(one / (a * b), "[1/(ab);q]")
}

/// `ln u_2(x)`; see [`u2_solution`].
pub fn ln_u2<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<LogValue<T>> {
    u2_exclusions(a, b, qp).check(qp, x)?;
    let q = qp.q();
    let abx = a * b * x;
    let series = phi21_c0_continued(q / a, q / b, qp, abx)?;
    let den = ln_theta(qp, -q * x)?;
    (ln_qpoch_inf(abx, qp) * series)
        .checked_div(den)
        .ok_or_else(|| Error::Pole(format!("theta(-qx) = 0 at x = {x}")))
}

/// `u_2(x) = (abx;q)_∞ / θ(−qx) · ₂φ₁(q/a,q/b;0;q,abx)`, the solution of
/// the q-confluent equation that is convergent at the origin.
pub fn u2_solution<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<Complex<T>> {
    Ok(ln_u2(a, b, qp, x)?.value())
}

/// `S_μ(a,b;q,x) = θ(aμx)/θ(μx) · ₂φ₁(a,0;aq/b;q,q/(abx))`, the solution
/// at infinity with the multivalued `x^{−α}` replaced by a theta ratio.
pub fn v_solution<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    mu: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<Complex<T>> {
    v_exclusions(a, b, mu, qp).check(qp, x)?;
    let q = qp.q();
    let zero = Complex::new(T::zero(), T::zero());
    let series = phi21_continued(a, zero, a * q / b, qp, q / (a * b * x))?;
    Ok(theta_ratio(qp, a, mu * x)? * series)
}

/// `x^{−α} ₂φ₁(a,0;aq/b;q,q/(abx))` with `a = q^α` and principal branches;
/// the classical-looking form of the solution at infinity.
pub fn v_power_solution<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    SpiralSet::new(qp.guard())
        .with(one / (a * b), "[1/(ab);q]")
        .check(qp, x)?;
    let q = qp.q();
    let zero = Complex::new(T::zero(), T::zero());
    let alpha = a.ln() / qp.ln_q();
    let series = phi21_continued(a, zero, a * q / b, qp, q / (a * b * x))?;
    Ok((-alpha * x.ln()).exp() * series)
}
