use num_complex::Complex;

use super::{qlaplace_minus_quadrature, ContourSpec};
use crate::error::{Error, Result};
use crate::qcore::{
    in_negative_power_spiral, ln_qpoch_inf, ln_theta, qpoch_inf, qpoch_n, QParam, SpiralSet,
};
use crate::qseries::{phi21_continued, u2_exclusions, FormalSeries};
use crate::report::VerificationReport;
use crate::scalar::{LogValue, Real};

/// `g(ξ) = (−q²ξ;q)_∞ / ((−qaξ;q)_∞ (−qbξ;q)_∞)`, the second-kind Borel
/// image of `(abx;q)_∞ ₂φ₁(q/a,q/b;0;q,abx)`.
pub fn g_closed_form<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    xi: Complex<T>,
) -> Result<Complex<T>> {
    let q = qp.q();
    for (p, name) in [(a, "a"), (b, "b")] {
        if let Some(k) = in_negative_power_spiral(qp, -q * p * xi, qp.guard()) {
            return Err(Error::Pole(format!(
                "g has a pole at xi = -1/({name} q^{}) (xi = {xi})",
                k + 1
            )));
        }
    }
    let num = ln_qpoch_inf(-q * q * xi, qp);
    let den = ln_qpoch_inf(-q * a * xi, qp) * ln_qpoch_inf(-q * b * xi, qp);
    Ok(num
        .checked_div(den)
        .expect("denominator zeros are caught by the pole check")
        .value())
}

/// Taylor coefficients `g_0..g_N` of the product form of `g`, by Cauchy
/// products of `(z;q)_∞ = Σ (−1)ⁿ q^{n(n−1)/2} zⁿ/(q;q)_n` and
/// `1/(z;q)_∞ = Σ zⁿ/(q;q)_n`.
pub fn g_taylor_coefficients<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    n_max: usize,
) -> FormalSeries<T> {
    let q = qp.q();
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let expand = |z: Complex<T>, inverse: bool| -> Vec<Complex<T>> {
        let mut out = Vec::with_capacity(n_max + 1);
        let (mut pow, mut poch, mut qn) = (one, one, one);
        for n in 0..=n_max {
            let tri = if inverse {
                one
            } else {
                LogValue::from_log(qp.ln_triangular(n as i64)).value()
            };
            let sign = if !inverse && n % 2 == 1 { -one } else { one };
            out.push(sign * tri * pow / poch);
            pow = pow * z;
            qn = qn * q;
            poch = poch * (one - qn);
        }
        out
    };
    let cauchy = |u: &[Complex<T>], v: &[Complex<T>]| -> Vec<Complex<T>> {
        (0..=n_max)
            .map(|n| (0..=n).fold(zero, |acc, k| acc + u[k] * v[n - k]))
            .collect()
    };
    let num = expand(-q * q, false);
    let p = cauchy(&num, &expand(-q * a, true));
    FormalSeries::new(cauchy(&p, &expand(-q * b, true)))
}

/// Taylor coefficients `f_0..f_N` of `f(x) = (abx;q)_∞ ₂φ₁(q/a,q/b;0;q,abx)`
/// from the first-order q-difference equation it satisfies:
///
/// ```text
/// q (qⁿ − 1) f_n = ((a+b) q^{n+1} − q^{2n+1}) f_{n−1} + ab q^{2n} f_{n−2}
/// ```
pub fn con2_series<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    n_max: usize,
) -> FormalSeries<T> {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let q = qp.q();
    let mut f = Vec::with_capacity(n_max + 1);
    f.push(one);
    let (mut f1, mut f2) = (one, zero);
    let mut qn = one;
    for _ in 1..=n_max {
        qn = qn * q;
        let fn_ = (((a + b) * qn * q - qn * qn * q) * f1 + a * b * qn * qn * f2) / (q * (qn - one));
        f.push(fn_);
        f2 = f1;
        f1 = fn_;
    }
    FormalSeries::new(f)
}

/// `B_q^-` of [`con2_series`], computed directly from the rescaled recurrence
/// (`h_n = f_n q^{−n(n−1)/2}`)
///
/// ```text
/// (qⁿ − 1) h_n = ((a+b) q − q^{n+1}) h_{n−1} + ab q² h_{n−2}
/// ```
///
/// so that no coefficient passes through the underflowing `f_n`.
pub fn con2_borel_series<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    n_max: usize,
) -> FormalSeries<T> {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let q = qp.q();
    let mut h = Vec::with_capacity(n_max + 1);
    h.push(one);
    let (mut h1, mut h2) = (one, zero);
    let mut qn = one;
    for _ in 1..=n_max {
        qn = qn * q;
        let hn = (((a + b) * q - qn * q) * h1 + a * b * q * q * h2) / (qn - one);
        h.push(hn);
        h2 = h1;
        h1 = hn;
    }
    FormalSeries::new(h)
}

/// `res{ 1/((ξ/λ;q)_∞ ξ) : ξ = λq^{−k} } = (−1)^{k+1} q^{k(k+1)/2} / ((q;q)_k (q;q)_∞)`.
///
/// The value does not depend on `λ ≠ 0`.
pub fn residue_at_spiral_pole<T: Real>(
    lambda: Complex<T>,
    k: usize,
    qp: &QParam<T>,
) -> Result<Complex<T>> {
    if lambda.norm() == T::zero() {
        return Err(Error::InvalidParameter("lambda must be nonzero".into()));
    }
    let q = qp.q();
    let sign = if k % 2 == 0 { -T::one() } else { T::one() };
    let ki = k as i64;
    let num = LogValue::from_log(qp.ln_triangular(ki + 1)) * Complex::new(sign, T::zero());
    let den = LogValue::from_value(qpoch_n(q, qp, k)) * ln_qpoch_inf(q, qp);
    Ok(num
        .checked_div(den)
        .expect("(q;q) products are nonzero")
        .value())
}

fn near_q_power<T: Real>(qp: &QParam<T>, z: Complex<T>) -> bool {
    SpiralSet::new(qp.guard())
        .with(Complex::new(T::one(), T::zero()), "[1;q]")
        .hit(qp, z)
        .is_some()
}

/// `1/(λq^{−k};q)_∞ = (−λ)^{−k} q^{k(k+1)/2} / ((λ;q)_∞ (q/λ;q)_k)`.
pub fn shifted_poch_identity_check<T: Real>(
    lambda: Complex<T>,
    k: usize,
    qp: &QParam<T>,
) -> Result<VerificationReport> {
    if lambda.norm() == T::zero() || near_q_power(qp, lambda) {
        return Err(Error::Degenerate(format!("lambda = {lambda} lies on q^Z")));
    }
    let q = qp.q();
    let ki = k as i64;
    let lhs = ln_qpoch_inf(lambda * qp.powi(-ki), qp)
        .recip()
        .expect("lambda off q^Z")
        .value();
    let num = LogValue::from_log(qp.ln_triangular(ki + 1)) * (-lambda).powi(-(k as i32));
    let den = ln_qpoch_inf(lambda, qp) * qpoch_n(q / lambda, qp, k);
    let rhs = num.checked_div(den).expect("lambda off q^Z").value();
    Ok(
        VerificationReport::compare("lemma2_8_shift", lhs, rhs, 1e-12)
            .with_param("q", q)
            .with_param("lambda", lambda)
            .with_param("k", k as f64),
    )
}

fn degeneracy_guard<T: Real>(a: Complex<T>, b: Complex<T>, qp: &QParam<T>) -> Result<()> {
    if near_q_power(qp, b / a) {
        return Err(Error::Degenerate(format!(
            "b/a = {} lies on q^Z (alpha - beta is an integer)",
            b / a
        )));
    }
    Ok(())
}

/// One term of the residue sum:
/// `(q/a;q)_∞/((b/a,q;q)_∞) · θ(−aqx)/θ(−qx) · ₂φ₁(a,0;aq/b;q,q/(abx))`.
fn residue_term<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<Complex<T>> {
    let q = qp.q();
    let zero = Complex::new(T::zero(), T::zero());
    let series = phi21_continued(a, zero, a * q / b, qp, q / (a * b * x))?;
    let num = ln_qpoch_inf(q / a, qp) * ln_theta(qp, -a * q * x)? * series;
    let den = ln_qpoch_inf(b / a, qp) * ln_qpoch_inf(q, qp) * ln_theta(qp, -q * x)?;
    num.checked_div(den)
        .map(|v| v.value())
        .ok_or_else(|| Error::Degenerate(format!("zero denominator at x = {x}")))
}

/// The residue sum for `₂f₁(a,b;q,x)`, i.e. the right-hand side of the
/// connection formula at the origin:
///
/// ```text
/// (q/a;q)_∞/((b/a,q;q)_∞) θ(−aqx)/θ(−qx) ₂φ₁(a,0;aq/b;q,q/(abx)) + (a ↔ b)
/// ```
pub fn f21_residue_sum<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<Complex<T>> {
    degeneracy_guard(a, b, qp)?;
    u2_exclusions(a, b, qp).check(qp, x)?;
    Ok(residue_term(a, b, qp, x)? + residue_term(b, a, qp, x)?)
}

/// The two terms of [`f21_residue_sum`] separately (for conditioning
/// estimates).
pub fn f21_residue_terms<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    degeneracy_guard(a, b, qp)?;
    u2_exclusions(a, b, qp).check(qp, x)?;
    Ok((residue_term(a, b, qp, x)?, residue_term(b, a, qp, x)?))
}

/// `₂f₁(a,b;q,x)` through the contour integral: `(L_q^- g)(x) = θ(−qx) ₂f₁(x)`.
pub fn f21_quadrature<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    contour: &ContourSpec<T>,
    x: Complex<T>,
) -> Result<Complex<T>> {
    contour.check_for_g(a, b, qp)?;
    u2_exclusions(a, b, qp).check(qp, x)?;
    let l = qlaplace_minus_quadrature(|xi| g_closed_form(a, b, qp, xi), contour, qp, x)?;
    let th = ln_theta(qp, -qp.q() * x)?;
    LogValue::from_value(l)
        .checked_div(th)
        .map(|v| v.value())
        .ok_or_else(|| Error::Pole(format!("theta(-qx) = 0 at x = {x}")))
}

/// [`residue_at_spiral_pole`] against a trapezoid rule on a small circle
/// around `λq^{−k}` (radius a tenth of the gap to the neighbouring poles),
/// doubling the node count until it settles.
pub fn residue_quadrature_check<T: Real>(
    lambda: Complex<T>,
    k: usize,
    qp: &QParam<T>,
) -> Result<VerificationReport> {
    let closed = residue_at_spiral_pole(lambda, k, qp)?;
    let centre = lambda * qp.powi(-(k as i64));
    let aq = qp.abs_q();
    let rho = centre.norm() * T::lit(0.1) * (T::one() - aq).min(T::one() / aq - T::one());
    let circle = |n: usize| -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for j in 0..n {
            let e = Complex::from_polar(
                T::one(),
                T::lit(std::f64::consts::TAU * j as f64 / n as f64),
            );
            let xi = centre + e * rho;
            let p = ln_qpoch_inf(xi / lambda, qp)
                .recip()
                .ok_or_else(|| Error::Pole(format!("quadrature node {xi} hit a pole")))?;
            acc = acc + p.value() / xi * e * rho;
        }
        Ok(acc / T::lit(n as f64))
    };
    let mut n = 64;
    let mut prev = circle(n)?;
    loop {
        n *= 2;
        let cur = circle(n)?;
        if (cur - prev).norm() <= T::lit(1e-13) * cur.norm() || n >= 1 << 14 {
            prev = cur;
            break;
        }
        prev = cur;
    }
    Ok(VerificationReport::compare("lemma2_8", closed, prev, 1e-9)
        .with_param("q", qp.q())
        .with_param("lambda", lambda)
        .with_param("k", k as f64)
        .with_param("nodes", n as f64))
}

/// `(q;q)_∞`, exposed for residue bookkeeping in tests and reports.
pub fn q_q_inf<T: Real>(qp: &QParam<T>) -> Complex<T> {
    qpoch_inf(qp.q(), qp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{phi21_c0_continued, u2_solution};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn setup() -> (QParam<f64>, Complex<f64>, Complex<f64>) {
        let qp = QParam::real(0.5).unwrap();
        (qp, qp.pow(c(0.3, 0.0)), qp.pow(c(0.7, 0.0)))
    }

    #[test]
    fn g_basics() {
        let (qp, a, b) = setup();
        assert_eq!(g_closed_form(a, b, &qp, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let q = qp.q();
        let xi = c(0.3, -1.2);
        let lhs = g_closed_form(a, b, &qp, q * xi).unwrap() * (c(1.0, 0.0) + q * q * xi);
        let rhs = (c(1.0, 0.0) + a * q * xi)
            * (c(1.0, 0.0) + b * q * xi)
            * g_closed_form(a, b, &qp, xi).unwrap();
        assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm());
        let pole = -c(1.0, 0.0) / (a * q);
        assert!(matches!(
            g_closed_form(a, b, &qp, pole),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn g_taylor_low_orders() {
        // order 1 of g(qξ)(1 + q²ξ) = (1 + aqξ)(1 + bqξ) g(ξ): g₁ = −q(a + b − q)/(1 − q)
        let (qp, a, b) = setup();
        let q = qp.q();
        let t = g_taylor_coefficients(a, b, &qp, 3);
        assert!((t.coeff(0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((t.coeff(1) + q * (a + b - q) / (1.0 - q)).norm() < 1e-15);
        let xi = c(0.1, 0.05);
        let direct = g_closed_form(a, b, &qp, xi).unwrap();
        let summed = g_taylor_coefficients(a, b, &qp, 60).evaluate(xi);
        assert!((direct - summed).norm() <= 1e-14 * direct.norm());
    }

    #[test]
    fn scaled_recurrence_is_borel_of_con2() {
        use crate::resummation::qborel_minus;
        let (qp, a, b) = setup();
        let direct = qborel_minus(&con2_series(a, b, &qp, 20), &qp);
        let scaled = con2_borel_series(a, b, &qp, 20);
        for n in 0..=20 {
            let (u, v) = (direct.series().coeff(n), scaled.coeff(n));
            assert!((u - v).norm() <= 1e-13 * u.norm(), "n={n}");
        }
    }

    #[test]
    fn con2_series_sums_to_product_form() {
        let (qp, a, b) = setup();
        let f = con2_series(a, b, &qp, 80);
        let x = c(0.4, 0.3);
        let oracle = qpoch_inf(a * b * x, &qp)
            * phi21_c0_continued(qp.q() / a, qp.q() / b, &qp, a * b * x).unwrap();
        assert!((f.evaluate(x) - oracle).norm() <= 1e-13 * oracle.norm());
    }

    #[test]
    fn residue_closed_form_values() {
        let qp = QParam::real(0.5).unwrap();
        let qq = q_q_inf(&qp);
        let r0 = residue_at_spiral_pole(c(0.7, 0.0), 0, &qp).unwrap();
        assert!((r0 + c(1.0, 0.0) / qq).norm() < 1e-14);
        let r1 = residue_at_spiral_pole(c(0.7, 0.0), 1, &qp).unwrap();
        assert!((r1 - c(0.5, 0.0) / (c(0.5, 0.0) * qq)).norm() < 1e-14);
        assert!(residue_at_spiral_pole(c(0.0, 0.0), 1, &qp).is_err());
    }

    #[test]
    fn residue_matches_small_circle() {
        let qp = QParam::real(0.5).unwrap();
        let lambda = c(0.7, 0.0);
        for k in 0..=5usize {
            let centre = lambda * qp.powi(-(k as i64));
            let rho = 0.05 * centre.norm();
            let n = 512;
            let integral: Complex<f64> = (0..n)
                .map(|j| {
                    let e =
                        Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
                    let xi = centre + e * rho;
                    let f = c(1.0, 0.0) / (qpoch_inf(xi / lambda, &qp) * xi);
                    f * e * rho
                })
                .sum::<Complex<f64>>()
                / n as f64;
            let r = residue_at_spiral_pole(lambda, k, &qp).unwrap();
            assert!((integral - r).norm() <= 1e-9 * r.norm(), "k={k}");
        }
    }

    #[test]
    fn residue_report_extends_past_five() {
        let qp = QParam::real(0.5).unwrap();
        for k in [0, 3, 7] {
            let r = residue_quadrature_check(c(0.7, 0.0), k, &qp).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn shifted_poch_identity() {
        let qp = QParam::real(0.5).unwrap();
        let r = shifted_poch_identity_check(c(0.7, 0.0), 0, &qp).unwrap();
        assert!(r.rel_diff < 1e-15);
        let r = shifted_poch_identity_check(c(0.7, 0.0), 2, &qp).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(matches!(
            shifted_poch_identity_check(qp.powi(2), 2, &qp),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn residue_sum_equals_u2() {
        let (qp, a, b) = setup();
        for x in [c(0.35, 0.0), c(0.6, 0.3), c(2.6, 0.0), c(-2.0, 1.0)] {
            let u = u2_solution(a, b, &qp, x).unwrap();
            let s = f21_residue_sum(a, b, &qp, x).unwrap();
            assert!((u - s).norm() <= 1e-10 * u.norm(), "{x}");
        }
        let err = f21_residue_sum(a, b, &qp, c(2.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Spiral { .. }));
        assert!(matches!(
            f21_residue_sum(a, a, &qp, c(0.35, 0.0)),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            f21_residue_sum(a, a * qp.powi(2), &qp, c(0.35, 0.0)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn quadrature_equals_u2() {
        let (qp, a, b) = setup();
        let spec = ContourSpec::for_g(a, b, &qp);
        for x in [c(0.6, 0.0), c(0.6, 0.3), c(2.6, -1.0)] {
            let u = u2_solution(a, b, &qp, x).unwrap();
            let v = f21_quadrature(a, b, &qp, &spec, x).unwrap();
            assert!((u - v).norm() <= 1e-9 * u.norm(), "{x}");
        }
    }
}
