use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::{in_negative_power_spiral, QParam, StopState};
use crate::scalar::Real;

use super::FormalSeries;

/// Parameters of `rφs(a_1..a_r; b_1..b_s; q, ·)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypParams<T> {
    upper: Vec<Complex<T>>,
    lower: Vec<Complex<T>>,
    qp: QParam<T>,
}

impl<T: Real> HypParams<T> {
    /// Rejects lower parameters in `q^{-Z≥0}`, where `(b;q)_n` vanishes.
    pub fn new(upper: Vec<Complex<T>>, lower: Vec<Complex<T>>, qp: QParam<T>) -> Result<Self> {
        for (i, &b) in lower.iter().enumerate() {
            if let Some(k) = in_negative_power_spiral(&qp, b, qp.guard()) {
                return Err(Error::InvalidParameter(format!(
                    "lower parameter b_{} = {b} equals q^-{k}",
                    i + 1
                )));
            }
        }
        Ok(HypParams { upper, lower, qp })
    }

    pub fn upper(&self) -> &[Complex<T>] {
        &self.upper
    }

    pub fn lower(&self) -> &[Complex<T>] {
        &self.lower
    }

    pub fn qp(&self) -> &QParam<T> {
        &self.qp
    }

    /// The exponent `1 + s - r` of `[(-1)^n q^{n(n-1)/2}]`.
    pub fn theta_exponent(&self) -> i64 {
        1 + self.lower.len() as i64 - self.upper.len() as i64
    }

    /// Number of nonzero terms when an upper parameter is `q^{-k}`.
    pub fn terminating_length(&self) -> Option<usize> {
        self.upper
            .iter()
            .filter_map(|&a| in_negative_power_spiral(&self.qp, a, self.qp.guard()))
            .min()
            .map(|k| k + 1)
    }

    /// `t_{n+1} / t_n` given `qⁿ`, without the argument `x`.
    fn ratio(&self, qn: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        let num = self.upper.iter().fold(one, |acc, &a| acc * (one - a * qn));
        let den = self
            .lower
            .iter()
            .fold(one - qn * self.qp.q(), |acc, &b| acc * (one - b * qn));
        let e = self.theta_exponent();
        let factor = if e == 0 { one } else { (-qn).powi(e as i32) };
        num / den * factor
    }
}

/// `rφs(a;b;q,x) = Σ (a;q)_n/((b;q)_n (q;q)_n) [(-1)^n q^{n(n-1)/2}]^{1+s-r} xⁿ`.
pub fn phi_rs<T: Real>(p: &HypParams<T>, x: Complex<T>) -> Result<Complex<T>> {
    let qp = p.qp();
    let one = Complex::new(T::one(), T::zero());
    let len = p.terminating_length();
    let e = p.theta_exponent();
    if x.norm() == T::zero() {
        return Ok(one);
    }
    if len.is_none() {
        if e < 0 {
            return Err(Error::Divergent(format!(
                "{}φ{} has zero radius of convergence; use a Borel-Laplace sum",
                p.upper.len(),
                p.lower.len()
            )));
        }
        if e == 0 && x.norm() >= T::one() {
            return Err(Error::Divergent(format!(
                "|x| = {} ≥ 1 is outside the disc of convergence; use continuation",
                x.norm()
            )));
        }
    }
    let mut sum = one;
    let mut term = one;
    let mut qn = one;
    let mut stop = qp.stopper();
    let mut n = 0usize;
    loop {
        if len.is_some_and(|l| n + 1 >= l) {
            return Ok(sum);
        }
        term = term * p.ratio(qn) * x;
        qn = qn * qp.q();
        n += 1;
        sum = sum + term;
        if len.is_some() {
            continue;
        }
        match stop.push(term, sum) {
            StopState::Continue => {}
            StopState::Converged => return Ok(sum),
            StopState::Exhausted => {
                return Err(Error::NoConvergence(format!(
                    "basic hypergeometric series at x = {x} after {n} terms"
                )))
            }
        }
    }
}

/// Coefficients of `₂φ₀(a,b;−;q,x)` up to `xᴺ`.
pub fn phi20_formal_coeffs<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    n_max: usize,
) -> FormalSeries<T> {
    let one = Complex::new(T::one(), T::zero());
    let mut coeffs = Vec::with_capacity(n_max + 1);
    let mut c = one;
    let mut qn = one;
    coeffs.push(c);
    for _ in 0..n_max {
        c = -c * (one - a * qn) * (one - b * qn) / ((one - qn * qp.q()) * qn);
        qn = qn * qp.q();
        coeffs.push(c);
    }
    FormalSeries::new(coeffs)
}

/// Whether `₂φ₀(a,b;−;q,x)` is a genuinely divergent series.
///
/// Works on `ln|a_n|`: for a divergent `₂φ₀` the second differences tend
/// to `-ln|q| > 0`, so coefficients grow like `|q|^{-n²/2}`.
pub fn u1_is_divergent_diagnostic<T: Real>(a: Complex<T>, b: Complex<T>, qp: &QParam<T>) -> bool {
    let guard = qp.guard();
    if in_negative_power_spiral(qp, a, guard).is_some()
        || in_negative_power_spiral(qp, b, guard).is_some()
    {
        return false;
    }
    let n_max = 48usize;
    let one = Complex::new(T::one(), T::zero());
    let mut ln_abs = Vec::with_capacity(n_max + 1);
    let mut acc = T::zero();
    let mut qn = one;
    ln_abs.push(acc);
    for _ in 0..n_max {
        let r = (one - a * qn) * (one - b * qn) / ((one - qn * qp.q()) * qn);
        acc = acc + r.norm().ln();
        qn = qn * qp.q();
        ln_abs.push(acc);
    }
    let target = -qp.abs_q().ln();
    let tail = &ln_abs[n_max / 2..];
    let second: Vec<T> = tail
        .windows(3)
        .map(|w| w[2] - w[1] - (w[1] - w[0]))
        .collect();
    let mean = second.iter().fold(T::zero(), |s, &v| s + v) / T::from_usize(second.len()).unwrap();
    mean > target * T::lit(0.5)
}

const CONTINUATION_RADIUS: f64 = 0.5;

fn phi21_direct<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<Complex<T>> {
    phi_rs(&HypParams::new(vec![a, b], vec![c], *qp)?, x)
}

/// One step of the `₂φ₁` q-difference equation solved for `u(x)`:
///
/// ```text
/// (c - ab q x) u(q²x) - {c + q - (a+b) q x} u(qx) + q (1 - x) u(x) = 0
/// ```
fn recurrence_step<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
    u_q: Complex<T>,
    u_q2: Complex<T>,
) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let q = qp.q();
    if (one - x).norm() < qp.guard() * x.norm() {
        return Err(Error::spiral("[1;q]", x));
    }
    Ok(((c + q - (a + b) * q * x) * u_q - (c - a * b * q * x) * u_q2) / (q * (one - x)))
}

/// Analytic continuation of `₂φ₁(a,b;c;q,y)` to `|y| ≥ 1` along `y q^N`.
///
/// Sums the series at the first two points of the spiral inside
/// `|x| ≤ 0.5`, then climbs back to `y` with the q-difference equation.
pub fn phi21_continued<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    qp: &QParam<T>,
    y: Complex<T>,
) -> Result<Complex<T>> {
    phi21_continued_steps(a, b, c, qp, y, 0)
}

/// As [`phi21_continued`], but starting `extra` steps further inside the
/// disc. Every choice gives the same value; used to test path independence.
pub fn phi21_continued_steps<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    qp: &QParam<T>,
    y: Complex<T>,
    extra: usize,
) -> Result<Complex<T>> {
    let radius = T::lit(CONTINUATION_RADIUS);
    if y.norm() <= radius && extra == 0 {
        return phi21_direct(a, b, c, qp, y);
    }
    let q = qp.q();
    let mut k = 0usize;
    let mut start = y;
    while start.norm() > radius {
        start = start * q;
        k += 1;
        if k > qp.max_terms() {
            return Err(Error::NoConvergence(format!(
                "continuation of 2phi1 to {y} needs more than {} steps",
                qp.max_terms()
            )));
        }
    }
    for _ in 0..extra {
        start = start * q;
        k += 1;
    }
    let mut u_q2 = phi21_direct(a, b, c, qp, start * q)?;
    let mut u_q = phi21_direct(a, b, c, qp, start)?;
    for j in (0..k).rev() {
        let x = y * qp.powi(j as i64);
        let u = recurrence_step(a, b, c, qp, x, u_q, u_q2)?;
        u_q2 = u_q;
        u_q = u;
    }
    Ok(u_q)
}

/// `₂φ₁(a,b;0;q,y)` with continuation beyond the unit disc.
pub fn phi21_c0_continued<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    qp: &QParam<T>,
    y: Complex<T>,
) -> Result<Complex<T>> {
    phi21_continued(a, b, Complex::new(T::zero(), T::zero()), qp, y)
}

/// `₂φ₁(a,b;c;q,·)` on the lattice `anchor·qⁿ`, `n_lo ≤ n ≤ n_hi`, in one
/// sweep of the recurrence. Entry `i` corresponds to `n = n_lo + i`.
pub fn phi21_on_spiral<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    qp: &QParam<T>,
    anchor: Complex<T>,
    n_lo: i64,
    n_hi: i64,
) -> Result<Vec<Complex<T>>> {
    if n_hi < n_lo {
        return Ok(Vec::new());
    }
    let radius = T::lit(CONTINUATION_RADIUS);
    let point = |n: i64| anchor * qp.powi(n);
    // First lattice index inside the direct-summation disc.
    let ln_ratio = (radius / anchor.norm()).ln() / qp.abs_q().ln();
    let mut m = ln_ratio.ceil().to_i64().unwrap_or(n_lo).max(n_lo);
    while point(m).norm() > radius {
        m += 1;
    }
    while m > n_lo && point(m - 1).norm() <= radius {
        m -= 1;
    }
    let len = (n_hi - n_lo + 1) as usize;
    let mut out = vec![Complex::new(T::zero(), T::zero()); len];
    for n in m.max(n_lo)..=n_hi {
        out[(n - n_lo) as usize] = phi21_direct(a, b, c, qp, point(n))?;
    }
    if m > n_lo {
        let mut u_q2 = phi21_direct(a, b, c, qp, point(m + 1))?;
        let mut u_q = phi21_direct(a, b, c, qp, point(m))?;
        for n in (n_lo..m).rev() {
            let u = recurrence_step(a, b, c, qp, point(n), u_q, u_q2)?;
            if n <= n_hi {
                out[(n - n_lo) as usize] = u;
            }
            u_q2 = u_q;
            u_q = u;
        }
    }
    Ok(out)
}
