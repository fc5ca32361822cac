//! Classical special functions and the `q → 1 − 0` limit scans.
//!
//! A limit is certified as a trend: along an increasing `q` sequence the
//! relative difference between the q-side and the classical side must
//! decrease strictly, and the last one must be below a tolerance.

mod special;

pub use special::{
    gamma_classical, hyp1f1, hyp2f0_asymptotic, Truncated, ASYMPTOTIC_REGIME_LIMIT,
    HYP1F1_INTEGRAL_THRESHOLD,
};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::{ln_qpoch_inf, ln_theta, q_exp_e, q_gamma, QParam};
use crate::qseries::{ln_u2, phi21_c0_continued};
use crate::report::{Cplx, ScanRow, ScanTable, VerificationReport};
use crate::resummation::f20;
use crate::scalar::{LogValue, Real};

/// Parameters of a limit scan.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitScanConfig<T> {
    /// Strictly increasing values in `(0, 1)`.
    pub q_sequence: Vec<T>,
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    pub z: Complex<T>,
    /// Resummation direction for the `₂f₀` scan.
    pub lambda: Complex<T>,
    /// Terminal relative difference required at the last `q`.
    pub tolerance: f64,
    /// Multiply the q-side by `w(α,β;q)`; when off, the classical side is
    /// divided by it instead.
    pub w_normalization: bool,
}

impl<T: Real> Default for LimitScanConfig<T> {
    fn default() -> Self {
        LimitScanConfig {
            q_sequence: [0.5, 0.9, 0.95, 0.99].iter().map(|&q| T::lit(q)).collect(),
            alpha: Complex::new(T::lit(0.3), T::zero()),
            beta: Complex::new(T::lit(0.7), T::zero()),
            z: Complex::new(T::lit(2.0), T::zero()),
            lambda: Complex::new(T::one(), T::zero()),
            tolerance: 0.05,
            w_normalization: true,
        }
    }
}

impl<T: Real> LimitScanConfig<T> {
    pub fn with_q_sequence(mut self, q: Vec<T>) -> Self {
        self.q_sequence = q;
        self
    }

    pub fn with_exponents(mut self, alpha: Complex<T>, beta: Complex<T>) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn with_z(mut self, z: Complex<T>) -> Self {
        self.z = z;
        self
    }

    pub fn with_lambda(mut self, lambda: Complex<T>) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Checks the `q` sequence.
    pub fn validate(&self) -> Result<()> {
        if self.q_sequence.is_empty() {
            return Err(Error::InvalidParameter("empty q sequence".into()));
        }
        for &q in &self.q_sequence {
            if !(q > T::zero() && q < T::one()) {
                return Err(Error::InvalidParameter(format!("q = {q} is not in (0, 1)")));
            }
        }
        if self.q_sequence.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "q sequence must be strictly increasing".into(),
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        Ok(())
    }

    /// Rejects `α − β ∈ Z`, where the `Γ` weights have poles.
    pub fn check_exponents(&self) -> Result<()> {
        let d = self.alpha - self.beta;
        let guard = T::lit(1e-9);
        if d.im.abs() <= guard && (d.re - d.re.round()).abs() <= guard {
            return Err(Error::Degenerate(format!(
                "alpha - beta = {d} is an integer"
            )));
        }
        Ok(())
    }

    fn qparams(&self) -> Result<Vec<QParam<T>>> {
        self.validate()?;
        self.q_sequence.iter().map(|&q| QParam::real(q)).collect()
    }

    fn tag(&self, t: ScanTable) -> ScanTable {
        t.with_param("alpha", self.alpha)
            .with_param("beta", self.beta)
            .with_param("z", self.z)
    }
}

fn row<T: Real>(qp: &QParam<T>, lhs: Complex<T>, rhs: Complex<T>) -> ScanRow {
    ScanRow::new(
        qp.q().re.to_f64().unwrap_or(f64::NAN),
        Cplx::from_complex(lhs),
        Cplx::from_complex(rhs),
    )
}

fn on_cut<T: Real>(z: Complex<T>) -> bool {
    z.im.abs() <= T::epsilon() * z.norm() && z.re <= T::zero()
}

/// `w(α,β;q) = (q;q)_∞ (1−q)^{1−α−β}`.
pub fn w_normalization<T: Real>(
    alpha: Complex<T>,
    beta: Complex<T>,
    qp: &QParam<T>,
) -> Result<LogValue<T>> {
    if !qp.is_real_positive() {
        return Err(Error::InvalidParameter(
            "w(alpha, beta; q) needs real 0 < q < 1".into(),
        ));
    }
    let one = Complex::new(T::one(), T::zero());
    let ln_1mq = (T::one() - qp.q().re).ln();
    Ok(ln_qpoch_inf(qp.q(), qp) * LogValue::from_log((one - alpha - beta) * ln_1mq))
}

/// `Γ_q(x)` against `Γ(x)`.
pub fn gamma_q_scan<T: Real>(x: Complex<T>, cfg: &LimitScanConfig<T>) -> Result<ScanTable> {
    let target = gamma_classical(x)?;
    let rows = cfg
        .qparams()?
        .iter()
        .map(|qp| Ok(row(qp, q_gamma(qp, x)?, target)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanTable::new("gamma_q", rows, cfg.tolerance).with_param("x", x))
}

/// `E_q(z(1−q))` against `e^z`.
pub fn e_q_scan<T: Real>(z: Complex<T>, cfg: &LimitScanConfig<T>) -> Result<ScanTable> {
    let rows = cfg
        .qparams()?
        .iter()
        .map(|qp| row(qp, q_exp_e(qp, z * (T::one() - qp.q().re)), z.exp()))
        .collect();
    Ok(ScanTable::new("e_q", rows, cfg.tolerance).with_param("z", z))
}

/// `θ(q^γ u/(1−q)) / θ(u/(1−q)) · (1−q)^{−γ}` against `u^{−γ}`.
pub fn theta_ratio_limit_scan<T: Real>(
    gamma_exp: Complex<T>,
    u: Complex<T>,
    cfg: &LimitScanConfig<T>,
) -> Result<ScanTable> {
    if on_cut(u) {
        return Err(Error::Domain(format!("u = {u} lies on the cut (-inf, 0]")));
    }
    let target = (-gamma_exp * u.ln()).exp();
    let rows = cfg
        .qparams()?
        .iter()
        .map(|qp| {
            let ln_1mq = (T::one() - qp.q().re).ln();
            let y = u / (T::one() - qp.q().re);
            let v = ln_theta(qp, qp.pow(gamma_exp) * y)?
                .checked_div(ln_theta(qp, y)?)
                .ok_or_else(|| Error::Pole(format!("theta({y}) = 0")))?
                * LogValue::from_log(-gamma_exp * ln_1mq);
            Ok(row(qp, v.value(), target))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanTable::new("theta_ratio", rows, cfg.tolerance)
        .with_param("gamma", gamma_exp)
        .with_param("u", u))
}

/// The classical limit of `₂f₀(q^α,q^β;λ,q,z/(1−q))`:
///
/// ```text
/// Γ(β−α)/Γ(β) z^{−α} ₁F₁(α;α−β+1;1/z) + Γ(α−β)/Γ(α) z^{−β} ₁F₁(β;β−α+1;1/z)
/// ```
pub fn zhang_limit_rhs<T: Real>(
    alpha: Complex<T>,
    beta: Complex<T>,
    z: Complex<T>,
) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let w = one / z;
    let term = |a: Complex<T>, b: Complex<T>| -> Result<Complex<T>> {
        Ok(gamma_classical(b - a)? / gamma_classical(b)?
            * (-a * z.ln()).exp()
            * hyp1f1(a, a - b + one, w)?)
    };
    Ok(term(alpha, beta)? + term(beta, alpha)?)
}

/// `₂f₀(q^α,q^β;λ,q,z/(1−q))` from the Borel–Laplace pipeline against
/// [`zhang_limit_rhs`].
pub fn limit_scan_zhang<T: Real>(cfg: &LimitScanConfig<T>) -> Result<ScanTable> {
    cfg.check_exponents()?;
    if on_cut(cfg.z) {
        return Err(Error::Domain(format!(
            "z = {} lies on the cut (-inf, 0]",
            cfg.z
        )));
    }
    let target = zhang_limit_rhs(cfg.alpha, cfg.beta, cfg.z)?;
    let rows = cfg
        .qparams()?
        .iter()
        .map(|qp| {
            let x = cfg.z / (T::one() - qp.q().re);
            let lhs = f20(qp.pow(cfg.alpha), qp.pow(cfg.beta), cfg.lambda, qp, x)?;
            Ok(row(qp, lhs, target))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(cfg
        .tag(ScanTable::new("zhang", rows, cfg.tolerance))
        .with_param("lambda", cfg.lambda))
}

/// Default evaluation point of [`limit_scan_thm33`]: small, and off the
/// positive real axis where the q-side has a dense set of poles.
pub const THM33_DEFAULT_Z: f64 = -0.04;

/// The `Γ`-weighted `₁F₁` side of the `q → 1` limit of `w ₂f₁`:
///
/// ```text
/// Γ(β−α)/Γ(1−α) (−z)^{−α} ₁F₁(α;α+1−β;1/z) + Γ(α−β)/Γ(1−β) (−z)^{−β} ₁F₁(β;β+1−α;1/z)
/// ```
///
/// Returned as its two terms, so that callers can see the cancellation.
pub fn thm33_connection_rhs<T: Real>(
    alpha: Complex<T>,
    beta: Complex<T>,
    z: Complex<T>,
) -> Result<[Complex<T>; 2]> {
    let one = Complex::new(T::one(), T::zero());
    let w = one / z;
    let ln_mz = (-z).ln();
    let term = |a: Complex<T>, b: Complex<T>| -> Result<Complex<T>> {
        Ok(gamma_classical(b - a)? / gamma_classical(one - a)?
            * (-a * ln_mz).exp()
            * hyp1f1(a, a + one - b, w)?)
    };
    Ok([term(alpha, beta)?, term(beta, alpha)?])
}

/// The asymptotic side: `e^{1/z} (−z)^{1−α−β} ₂F₀(1−α,1−β;−;z)`, with the
/// optimal-truncation error scaled the same way.
pub fn thm33_asymptotic_rhs<T: Real>(
    alpha: Complex<T>,
    beta: Complex<T>,
    z: Complex<T>,
) -> Result<Truncated<T>> {
    let one = Complex::new(T::one(), T::zero());
    let t = hyp2f0_asymptotic(one - alpha, one - beta, z)?;
    let pre = (one / z + (one - alpha - beta) * (-z).ln()).exp();
    Ok(Truncated {
        value: pre * t.value,
        error: pre.norm() * t.error,
        terms: t.terms,
    })
}

/// `w ₂f₁(q^α,q^β;q,x)` through the rewritten form
/// `θ(q^{α+β−1}X)/θ(X) (1−q)^{1−α−β} / E_q(−(1−q)/(q^{α+β−1}z)) · ₂φ₁(q^{1−α},q^{1−β};0;q,q^{α+β}x)`
/// with `x = z/(1−q)`, `X = −qx`.
fn w_u2_rewritten<T: Real>(
    alpha: Complex<T>,
    beta: Complex<T>,
    qp: &QParam<T>,
    z: Complex<T>,
) -> Result<LogValue<T>> {
    let one = Complex::new(T::one(), T::zero());
    let q = qp.q();
    let omq = T::one() - q.re;
    let x = z / omq;
    let big_x = -q * x;
    let s = alpha + beta - one;
    let ratio = ln_theta(qp, qp.pow(s) * big_x)?
        .checked_div(ln_theta(qp, big_x)?)
        .ok_or_else(|| Error::Pole(format!("theta({big_x}) = 0")))?
        * LogValue::from_log(-s * omq.ln());
    // 1/E_q(y) with y = −(1−q)/(q^s z), i.e. 1/(−y;q)_∞
    let e = ln_qpoch_inf(Complex::new(omq, T::zero()) / (qp.pow(s) * z), qp);
    let series = phi21_c0_continued(
        qp.pow(one - alpha),
        qp.pow(one - beta),
        qp,
        qp.pow(alpha + beta) * x,
    )?;
    (ratio * series)
        .checked_div(e)
        .ok_or_else(|| Error::Pole("E_q factor vanishes".into()))
}

/// Result of [`limit_scan_thm33`].
#[derive(Clone, Debug, PartialEq)]
pub struct Thm33Scan {
    /// `w ₂f₁` (closed form) against the `Γ`/`₁F₁` side.
    pub connection: ScanTable,
    /// `w ₂f₁` (rewritten form) against the `₂F₀` side, with the truncation
    /// error folded into the tolerance.
    pub asymptotic: ScanTable,
    /// The two classical sides against each other.
    pub consistency: VerificationReport,
}

impl Thm33Scan {
    pub fn pass(&self) -> bool {
        self.connection.pass && self.asymptotic.pass && self.consistency.pass
    }
}

/// Both classical limits of `w(α,β;q) ₂f₁(q^α,q^β;q,z/(1−q))`.
///
/// `z` must avoid `[0, ∞)` (the q-side is singular there, and `(−z)` uses
/// the principal branch) and be small enough for the `₂F₀` side to be in
/// its asymptotic regime.
pub fn limit_scan_thm33<T: Real>(cfg: &LimitScanConfig<T>) -> Result<Thm33Scan> {
    cfg.check_exponents()?;
    let z = cfg.z;
    if on_cut(-z) {
        return Err(Error::Domain(format!("z = {z} lies on [0, inf)")));
    }
    let (alpha, beta) = (cfg.alpha, cfg.beta);
    let terms = thm33_connection_rhs(alpha, beta, z)?;
    let rhs_i = terms[0] + terms[1];
    let asym = thm33_asymptotic_rhs(alpha, beta, z)?;
    let rhs_ii = asym.value;

    let mut rows_i = Vec::new();
    let mut rows_ii = Vec::new();
    for qp in cfg.qparams()? {
        let omq = T::one() - qp.q().re;
        let w = w_normalization(alpha, beta, &qp)?;
        let u2 = ln_u2(qp.pow(alpha), qp.pow(beta), &qp, z / omq)?;
        let rewritten = w_u2_rewritten(alpha, beta, &qp, z)?;
        if cfg.w_normalization {
            rows_i.push(row(&qp, (w * u2).value(), rhs_i));
            rows_ii.push(row(&qp, rewritten.value(), rhs_ii));
        } else {
            let inv_w = w.recip().ok_or_else(|| Error::Pole("w = 0".into()))?;
            rows_i.push(row(&qp, u2.value(), (inv_w * rhs_i).value()));
            let plain = rewritten
                .checked_div(w)
                .ok_or_else(|| Error::Pole("w = 0".into()))?;
            rows_ii.push(row(&qp, plain.value(), (inv_w * rhs_ii).value()));
        }
    }
    let err_rel = (asym.error / rhs_ii.norm())
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let connection = cfg.tag(ScanTable::new("thm33_connection", rows_i, cfg.tolerance));
    let asymptotic = cfg
        .tag(ScanTable::new(
            "thm33_asymptotic",
            rows_ii,
            cfg.tolerance + err_rel,
        ))
        .with_note(format!(
            "tolerance includes the 2F0 truncation error {err_rel:.3e} (relative)"
        ));

    // Rounding floor of the cancelling two-term sum.
    let cond = ((terms[0].norm() + terms[1].norm()) / rhs_i.norm())
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let floor = 64.0 * T::epsilon().to_f64().unwrap_or(f64::EPSILON) * cond;
    let consistency = VerificationReport::compare("thm33_consistency", rhs_i, rhs_ii, err_rel + floor)
        .with_param("alpha", alpha)
        .with_param("beta", beta)
        .with_param("z", z)
        .with_note(format!(
            "tolerance = 2F0 truncation error {err_rel:.3e} + rounding floor {floor:.3e} (cancellation factor {cond:.3e})"
        ));
    Ok(Thm33Scan {
        connection,
        asymptotic,
        consistency,
    })
}
