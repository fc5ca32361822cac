use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::QParam;
use crate::qseries::FormalSeries;
use crate::report::VerificationReport;
use crate::scalar::Real;

/// Which q-Borel transformation produced an image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BorelKind {
    /// `a_n ↦ a_n q^{n(n-1)/2}`
    First,
    /// `a_n ↦ a_n q^{-n(n-1)/2}`
    Second,
}

type ClosedForm<T> = Arc<dyn Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync>;

/// The Borel transform of a series: the rescaled coefficients plus, when
/// known, a closed form for the sum (e.g. the product form of `g(ξ)`).
#[derive(Clone)]
pub struct BorelImage<T> {
    kind: BorelKind,
    series: FormalSeries<T>,
    closed_form: Option<ClosedForm<T>>,
}

impl<T: Real> fmt::Debug for BorelImage<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BorelImage")
            .field("kind", &self.kind)
            .field("series", &self.series)
            .field("closed_form", &self.closed_form.is_some())
            .finish()
    }
}

/// Multiplies `a_n` by `q^{±n(n-1)/2}`, building the factor incrementally
/// (`s_{n+1} = s_n q^{±n}`) so that it is exact whenever powers of `q` are.
fn triangular_scale<T: Real>(f: &FormalSeries<T>, qp: &QParam<T>, sign: i64) -> FormalSeries<T> {
    let step = qp.powi(sign);
    let mut s = Complex::new(T::one(), T::zero());
    let mut qn = Complex::new(T::one(), T::zero());
    let coeffs = f
        .coeffs()
        .iter()
        .map(|&a| {
            let v = a * s;
            s = s * qn;
            qn = qn * step;
            v
        })
        .collect();
    FormalSeries::new(coeffs)
}

impl<T: Real> BorelImage<T> {
    pub fn kind(&self) -> BorelKind {
        self.kind
    }

    pub fn series(&self) -> &FormalSeries<T> {
        &self.series
    }

    pub fn with_closed_form<F>(mut self, f: F) -> Self
    where
        F: Fn(Complex<T>) -> Result<Complex<T>> + Send + Sync + 'static,
    {
        self.closed_form = Some(Arc::new(f));
        self
    }

    pub fn has_closed_form(&self) -> bool {
        self.closed_form.is_some()
    }

    /// The closed form if present, otherwise the truncated series.
    pub fn eval(&self, xi: Complex<T>) -> Result<Complex<T>> {
        match &self.closed_form {
            Some(f) => f(xi),
            None => Ok(self.series.evaluate(xi)),
        }
    }

    /// Undoes the coefficient scaling.
    pub fn inverse(&self, qp: &QParam<T>) -> FormalSeries<T> {
        let sign = match self.kind {
            BorelKind::First => -1,
            BorelKind::Second => 1,
        };
        triangular_scale(&self.series, qp, sign)
    }
}

/// `B_q^+ : Σ a_n xⁿ ↦ Σ a_n q^{n(n-1)/2} ξⁿ`.
pub fn qborel_plus<T: Real>(f: &FormalSeries<T>, qp: &QParam<T>) -> BorelImage<T> {
    BorelImage {
        kind: BorelKind::First,
        series: triangular_scale(f, qp, 1),
        closed_form: None,
    }
}

/// `B_q^- : Σ a_n xⁿ ↦ Σ a_n q^{-n(n-1)/2} ξⁿ`.
pub fn qborel_minus<T: Real>(f: &FormalSeries<T>, qp: &QParam<T>) -> BorelImage<T> {
    BorelImage {
        kind: BorelKind::Second,
        series: triangular_scale(f, qp, -1),
        closed_form: None,
    }
}

/// Largest `m`, `l` accepted by [`operational_relation_check`].
pub const OPERATIONAL_MAX_SHIFT: usize = 6;
const OPERATIONAL_MIN_ORDER: usize = 32;

/// Checks `B_q^-(x^m σ_q^l f) = q^{-m(m-1)/2} ξ^m σ_q^{l-m} B_q^- f`
/// coefficient by coefficient.
///
/// The report carries the pair of coefficients with the largest relative
/// deviation. `f` is zero-padded to order 32.
pub fn operational_relation_check<T: Real>(
    f: &FormalSeries<T>,
    m: usize,
    l: usize,
    qp: &QParam<T>,
) -> Result<VerificationReport> {
    if m > OPERATIONAL_MAX_SHIFT || l > OPERATIONAL_MAX_SHIFT {
        return Err(Error::InvalidParameter(format!(
            "m = {m}, l = {l}: both must be at most {OPERATIONAL_MAX_SHIFT}"
        )));
    }
    let mut coeffs = f.coeffs().to_vec();
    if coeffs.len() < OPERATIONAL_MIN_ORDER + 1 {
        coeffs.resize(
            OPERATIONAL_MIN_ORDER + 1,
            Complex::new(T::zero(), T::zero()),
        );
    }
    let f = FormalSeries::new(coeffs);
    let lhs = qborel_minus(&f.sigma_pow(qp, l as i64).mul_monomial(m), qp);
    let prefactor = qp.powi(-((m * m.saturating_sub(1) / 2) as i64));
    let rhs = qborel_minus(&f, qp)
        .series()
        .sigma_pow(qp, l as i64 - m as i64)
        .mul_monomial(m)
        .scale(prefactor);
    let mut worst = (0usize, T::zero());
    for n in 0..lhs.series().len().max(rhs.len()) {
        let (x, y) = (lhs.series().coeff(n), rhs.coeff(n));
        let d = (x - y).norm();
        let scale = x.norm().max(y.norm());
        let r = if d == T::zero() { T::zero() } else { d / scale };
        if r > worst.1 {
            worst = (n, r);
        }
    }
    let n = worst.0;
    Ok(VerificationReport::compare(
        "lemma2_7",
        lhs.series().coeff(n),
        rhs.coeff(n),
        T::DEFAULT_EPS,
    )
    .with_param("q", qp.q())
    .with_param("m", m as f64)
    .with_param("l", l as f64)
    .with_param("n_worst", n as f64))
}
