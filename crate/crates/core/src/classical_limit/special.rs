//! Classical `Γ`, `₁F₁` and the optimally truncated `₂F₀`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::{StopState, Stopper};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const SERIES_MAX_TERMS: usize = 10_000;

fn near_nonpositive_integer<T: Real>(x: Complex<T>) -> bool {
    let n = x.re.round();
    n <= T::zero()
        && (x - Complex::new(n, T::zero())).norm()
            <= T::lit(1e3) * T::epsilon() * (T::one() + n.abs())
}

/// Classical `Γ(x)` (Lanczos, `g = 7`, with reflection for `Re x < 1/2`).
pub fn gamma_classical<T: Real>(x: Complex<T>) -> Result<Complex<T>> {
    if near_nonpositive_integer(x) {
        return Err(Error::Pole(format!("gamma pole at x = {x}")));
    }
    let one = Complex::new(T::one(), T::zero());
    let pi = T::PI();
    if x.re < T::lit(0.5) {
        let s = (x * pi).sin();
        return Ok(Complex::new(pi, T::zero()) / (s * gamma_classical(one - x)?));
    }
    let x = x - one;
    let mut acc = Complex::new(T::lit(LANCZOS[0]), T::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + Complex::new(T::lit(c), T::zero()) / (x + T::lit(i as f64));
    }
    let t = x + T::lit(LANCZOS_G + 0.5);
    let ln = (x + T::lit(0.5)) * t.ln() - t + (pi + pi).sqrt().ln();
    Ok(ln.exp() * acc)
}

/// Modulus of `w` beyond which [`hyp1f1`] switches from the power series to
/// the Euler integral (when the latter applies).
pub const HYP1F1_INTEGRAL_THRESHOLD: f64 = 12.0;

/// Kummer's function `₁F₁(α;γ;z) = Σ (α)_n / ((γ)_n n!) zⁿ`.
///
/// Small `|z|` uses the series (after Kummer's transformation when
/// `Re z < 0`). For large `|z|` the series cancels catastrophically, so when
/// `Re γ > Re α > 0` the Euler integral is evaluated by tanh-sinh quadrature.
pub fn hyp1f1<T: Real>(
    alpha: Complex<T>,
    gamma_p: Complex<T>,
    z: Complex<T>,
) -> Result<Complex<T>> {
    if near_nonpositive_integer(gamma_p) {
        return Err(Error::Pole(format!(
            "1F1 lower parameter {gamma_p} is a nonpositive integer"
        )));
    }
    if z.norm() == T::zero() {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let large = z.norm() > T::lit(HYP1F1_INTEGRAL_THRESHOLD);
    if large && gamma_p.re > alpha.re && alpha.re > T::zero() {
        return euler_integral(alpha, gamma_p, z);
    }
    if z.re < T::zero() {
        return Ok(z.exp() * hyp1f1_series(gamma_p - alpha, gamma_p, -z)?);
    }
    hyp1f1_series(alpha, gamma_p, z)
}

fn hyp1f1_series<T: Real>(a: Complex<T>, c: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    let mut stop = Stopper::new(T::lit(T::DEFAULT_EPS), SERIES_MAX_TERMS);
    for n in 0.. {
        let nf = T::lit(n as f64);
        term = term * (a + nf) / ((c + nf) * (nf + T::one())) * z;
        sum = sum + term;
        match stop.push(term, sum) {
            StopState::Continue => {}
            StopState::Converged => return Ok(sum),
            StopState::Exhausted => break,
        }
    }
    Err(Error::NoConvergence(format!("1F1 series at z = {z}")))
}

/// `Γ(c)/(Γ(a)Γ(c−a)) ∫₀¹ e^{zt} t^{a−1} (1−t)^{c−a−1} dt` with
/// `t = (1 + tanh u)/2`, `u = (π/2) sinh s`; `ln t` and `ln(1−t)` are formed
/// directly from `u` so both endpoint singularities are resolved.
fn euler_integral<T: Real>(a: Complex<T>, c: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let half_pi = T::FRAC_PI_2();
    let s_max = T::lit(6.0);
    let ln2 = T::LN_2();
    // ln(1 + e^{-2|u|}) without overflow
    let soft = |u: T| (-(u.abs() + u.abs())).exp().ln_1p();
    let integrand = |s: T| -> Complex<T> {
        let u = half_pi * s.sinh();
        let (ln_t, ln_1mt) = if u >= T::zero() {
            (-soft(u), -(u + u) - soft(u))
        } else {
            (u + u - soft(u), -soft(u))
        };
        let t = ln_t.exp();
        let ln_sech = ln2 - u.abs() - soft(u);
        let ln_jac = (half_pi * s.cosh() / (T::one() + T::one())).ln() + ln_sech + ln_sech;
        ((a - one) * ln_t + (c - a - one) * ln_1mt + z * t + ln_jac).exp()
    };
    let trapezoid = |h: T| -> Complex<T> {
        let n = (s_max / h).ceil().to_i64().unwrap_or(0);
        let mut acc = integrand(T::zero());
        for k in 1..=n {
            let s = h * T::lit(k as f64);
            acc = acc + integrand(s) + integrand(-s);
        }
        acc * h
    };
    let tol = T::lit(100.0) * T::epsilon();
    let mut h = T::lit(0.5);
    let mut prev = trapezoid(h);
    for _ in 0..10 {
        h = h / (T::one() + T::one());
        let cur = trapezoid(h);
        if (cur - prev).norm() <= tol * cur.norm() {
            let norm = gamma_classical(c)? / (gamma_classical(a)? * gamma_classical(c - a)?);
            return Ok(norm * cur);
        }
        prev = cur;
    }
    Err(Error::NoConvergence(format!(
        "1F1 Euler integral at z = {z}"
    )))
}

/// Largest optimal-truncation error accepted by [`hyp2f0_asymptotic`].
pub const ASYMPTOTIC_REGIME_LIMIT: f64 = 1e-6;

/// Partial sum of a divergent asymptotic series together with the modulus of
/// the first omitted term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncated<T> {
    pub value: Complex<T>,
    pub error: T,
    /// Number of terms summed.
    pub terms: usize,
}

/// `₂F₀(α,β;−;z) = Σ (α)_n (β)_n zⁿ / n!` by optimal truncation: terms are
/// summed while they decrease, and the smallest term is left out and
/// reported as the error estimate.
pub fn hyp2f0_asymptotic<T: Real>(
    alpha: Complex<T>,
    beta: Complex<T>,
    z: Complex<T>,
) -> Result<Truncated<T>> {
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = Complex::new(T::zero(), T::zero());
    for n in 0..SERIES_MAX_TERMS {
        let nf = T::lit(n as f64);
        let next = term * (alpha + nf) * (beta + nf) / (nf + T::one()) * z;
        if term.norm() == T::zero() {
            return Ok(Truncated {
                value: sum,
                error: T::zero(),
                terms: n,
            });
        }
        if next.norm() >= term.norm() {
            if term.norm() >= T::lit(ASYMPTOTIC_REGIME_LIMIT) {
                return Err(Error::Regime(format!(
                    "2F0 at z = {z}: smallest term {} exceeds {ASYMPTOTIC_REGIME_LIMIT:e}",
                    term.norm()
                )));
            }
            return Ok(Truncated {
                value: sum,
                error: term.norm(),
                terms: n,
            });
        }
        sum = sum + term;
        term = next;
    }
    Err(Error::NoConvergence(format!(
        "2F0 terms still decreasing at z = {z}"
    )))
}
