use num_complex::Complex;

use super::{qborel_minus, BorelImage};
use crate::error::{Error, Result};
use crate::qcore::{ln_theta, theta, QParam, SpiralSet, StopState};
use crate::qseries::{phi21_on_spiral, FormalSeries};
use crate::report::VerificationReport;
use crate::scalar::{LogValue, Real};

/// `1/θ(qⁿλ/x) = yⁿ q^{n(n-1)/2} / θ(y)` with `y = λ/x`, as a logarithm
/// relative to `ln θ(y)`.
fn ln_kernel<T: Real>(qp: &QParam<T>, ln_y: Complex<T>, n: i64) -> Complex<T> {
    ln_y * T::from_i64(n).unwrap() + qp.ln_triangular(n)
}

/// Index of the largest Gaussian weight `|yⁿ q^{n(n-1)/2}|`.
fn kernel_peak<T: Real>(qp: &QParam<T>, ln_y: Complex<T>) -> i64 {
    let n = T::lit(0.5) - ln_y.re / qp.abs_q().ln();
    n.round().to_i64().unwrap_or(0)
}

fn laplace_plus_guard<T: Real>(qp: &QParam<T>, lambda: Complex<T>, x: Complex<T>) -> Result<()> {
    if lambda.norm() == T::zero() {
        return Err(Error::InvalidParameter("lambda must be nonzero".into()));
    }
    SpiralSet::new(qp.guard())
        .with(-lambda, "[-lambda;q]")
        .check(qp, x)
}

/// `(L_{q,λ}^+ φ)(x) = Σ_{n∈Z} φ(qⁿλ) / θ(qⁿλ/x)`.
///
/// Summed outward from the peak of the theta weight, each direction
/// stopping on its own.
pub fn qlaplace_plus<T, F>(
    phi: F,
    lambda: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    laplace_plus_guard(qp, lambda, x)?;
    let y = lambda / x;
    let ln_y = y.ln();
    let ln_th = ln_theta(qp, y)?;
    let peak = kernel_peak(qp, ln_y);
    let term = |n: i64| -> Result<Complex<T>> {
        let w = LogValue::from_log(ln_kernel(qp, ln_y, n));
        let v = phi(lambda * qp.powi(n))?;
        Ok((w * v)
            .checked_div(ln_th)
            .expect("theta(y) checked nonzero")
            .value())
    };
    let mut sum = term(peak)?;
    for dir in [1i64, -1] {
        let mut stop = qp.stopper();
        let mut n = peak;
        loop {
            n += dir;
            let t = term(n)?;
            sum = sum + t;
            match stop.push(t, sum) {
                StopState::Continue => {}
                StopState::Converged => break,
                StopState::Exhausted => {
                    return Err(Error::NoConvergence(format!(
                        "q-Laplace sum at x = {x} (lambda = {lambda})"
                    )))
                }
            }
        }
    }
    Ok(sum)
}

/// `₂f₀(a,b;λ,q,x) = L_{q,λ}^+ B_q^+ ₂φ₀(a,b;−;q,x)`.
///
/// The Borel image is `₂φ₁(a,b;0;q,−ξ)`; it is evaluated on the whole
/// window `ξ = qⁿλ` by one sweep of the continuation recurrence. The window
/// is centred on the peak of the theta weight and widened until both ends
/// are negligible.
///
/// Accuracy: the weights `yⁿ q^{n(n−1)/2}` sum to `θ(y)`, `y = λ/x`, which
/// is smallest relative to its terms on the negative axis. As `x` turns
/// towards `−λ` the sum cancels by up to `exp(π²/(2|ln q|))`: harmless for
/// `q ≤ 0.7` (about 1e−10 relative at worst), but about 1e−6 at `q = 0.8`.
pub fn f20<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    lambda: Complex<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<Complex<T>> {
    laplace_plus_guard(qp, lambda, x)?;
    let one = Complex::new(T::one(), T::zero());
    // φ(ξ) is singular where −ξ ∈ q^{-N}, i.e. on [−1;q] for ξ = qⁿλ.
    SpiralSet::new(qp.guard())
        .with(-one, "[-1;q]")
        .check(qp, lambda)
        .map_err(|_| Error::spiral("[-1;q]", format!("lambda = {lambda}")))?;
    let y = lambda / x;
    let ln_y = y.ln();
    let ln_th = ln_theta(qp, y)?;
    let peak = kernel_peak(qp, ln_y);
    let ln_abs_q = -qp.abs_q().ln();
    let tail = (T::one() / qp.eps()).ln() + T::lit(30.0);
    let mut half = ((T::lit(2.0) * tail / ln_abs_q).sqrt() + T::lit(4.0))
        .ceil()
        .to_i64()
        .unwrap_or(64);
    let zero = Complex::new(T::zero(), T::zero());
    for _ in 0..4 {
        let (lo, hi) = (peak - half, peak + half);
        let phi = phi21_on_spiral(a, b, zero, qp, -lambda, lo, hi)?;
        let terms: Vec<Complex<T>> = phi
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let w = LogValue::from_log(ln_kernel(qp, ln_y, lo + i as i64));
                (w * v)
                    .checked_div(ln_th)
                    .expect("theta(y) checked nonzero")
                    .value()
            })
            .collect();
        // Sum from the small ends inward.
        let mid = terms.len() / 2;
        let left = terms[..mid].iter().fold(zero, |s, &t| s + t);
        let right = terms[mid..].iter().rev().fold(zero, |s, &t| s + t);
        let sum = left + right;
        let edge = terms[..3]
            .iter()
            .chain(&terms[terms.len() - 3..])
            .map(|t| t.norm())
            .fold(T::zero(), T::max);
        if edge <= qp.eps() * sum.norm() {
            return Ok(sum);
        }
        half *= 2;
    }
    Err(Error::NoConvergence(format!(
        "q-Laplace sum for 2f0 at x = {x} (lambda = {lambda})"
    )))
}

/// Circle `|ξ| = r` sampled at `nodes` equispaced points (the initial
/// count; quadrature doubles it as needed).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec<T> {
    radius: T,
    nodes: usize,
}

impl<T: Real> ContourSpec<T> {
    pub const MIN_NODES: usize = 64;
    pub const MAX_NODES: usize = 1 << 16;

    pub fn new(radius: T, nodes: usize) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "contour radius {radius} must be positive"
            )));
        }
        if nodes < Self::MIN_NODES {
            return Err(Error::InvalidParameter(format!(
                "contour needs at least {} nodes, got {nodes}",
                Self::MIN_NODES
            )));
        }
        Ok(ContourSpec { radius, nodes })
    }

    /// `r_0 = min(1/|aq|, 1/|bq|)`: the distance from the origin to the
    /// nearest pole of `g(ξ)`.
    pub fn g_pole_radius(a: Complex<T>, b: Complex<T>, qp: &QParam<T>) -> T {
        let q = qp.abs_q();
        (T::one() / (a.norm() * q)).min(T::one() / (b.norm() * q))
    }

    /// Default contour for `g(ξ)`: `r = 0.4 · min(r_0, 1)`.
    pub fn for_g(a: Complex<T>, b: Complex<T>, qp: &QParam<T>) -> Self {
        let r = T::lit(0.4) * Self::g_pole_radius(a, b, qp).min(T::one());
        ContourSpec {
            radius: r,
            nodes: Self::MIN_NODES,
        }
    }

    /// Errors unless every pole of `g(ξ)` lies strictly outside the circle.
    pub fn check_for_g(&self, a: Complex<T>, b: Complex<T>, qp: &QParam<T>) -> Result<()> {
        let r0 = Self::g_pole_radius(a, b, qp);
        if self.radius < r0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "contour radius {} must be below min(1/|aq|, 1/|bq|) = {r0}",
                self.radius
            )))
        }
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

/// `(L_q^- g)(x) = (1/2πi) ∮_{|ξ|=r} g(ξ) θ(x/ξ) dξ/ξ` by the trapezoid rule.
///
/// The node count doubles until two successive values agree to
/// `10·eps` relative to the larger of the result and the largest integrand
/// sample; the second scale accounts for cancellation in the integral.
pub fn qlaplace_minus_quadrature<T, F>(
    g: F,
    c: &ContourSpec<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    if x.norm() == T::zero() {
        return Err(Error::Domain("q-Laplace transform at x = 0".into()));
    }
    let two_pi = T::PI() + T::PI();
    let sample = |theta_arg: T| -> Result<Complex<T>> {
        let xi = Complex::from_polar(c.radius, theta_arg);
        Ok(g(xi)? * theta(qp, x / xi)?)
    };
    let mut n = c.nodes;
    let mut peak = T::zero();
    let mut acc = Complex::new(T::zero(), T::zero());
    for j in 0..n {
        let s = sample(two_pi * T::from_usize(j).unwrap() / T::from_usize(n).unwrap())?;
        peak = peak.max(s.norm());
        acc = acc + s;
    }
    let mut value = acc / T::from_usize(n).unwrap();
    let ten = T::lit(10.0);
    while n < ContourSpec::<T>::MAX_NODES {
        // the new nodes sit halfway between the old ones
        let n2 = 2 * n;
        for j in 0..n {
            let s =
                sample(two_pi * T::from_usize(2 * j + 1).unwrap() / T::from_usize(n2).unwrap())?;
            peak = peak.max(s.norm());
            acc = acc + s;
        }
        let next = acc / T::from_usize(n2).unwrap();
        let done = (next - value).norm() <= ten * qp.eps() * next.norm().max(peak);
        value = next;
        n = n2;
        if done {
            return Ok(value);
        }
    }
    Err(Error::NoConvergence(format!(
        "trapezoid rule on |xi| = {} did not settle with {n} nodes",
        c.radius
    )))
}

/// Round trip `L_q^- B_q^- f = f` at one point.
///
/// `B_q^- f` is summed as its truncated series (or its closed form when one
/// is attached) on the contour `c`.
pub fn borel_laplace_roundtrip_check<T: Real>(
    f: &FormalSeries<T>,
    image: Option<&BorelImage<T>>,
    c: &ContourSpec<T>,
    qp: &QParam<T>,
    x: Complex<T>,
) -> Result<VerificationReport> {
    let own;
    let img = match image {
        Some(i) => i,
        None => {
            own = qborel_minus(f, qp);
            &own
        }
    };
    let lhs = qlaplace_minus_quadrature(|xi| img.eval(xi), c, qp, x)?;
    let rhs = f.evaluate(x);
    Ok(VerificationReport::compare("lemma2_6", lhs, rhs, 1e-10)
        .with_param("q", qp.q())
        .with_param("x", x)
        .with_param("r", c.radius().to_f64().unwrap_or(f64::NAN))
        .with_param("order", (f.len().saturating_sub(1)) as f64))
}
