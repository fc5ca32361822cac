//! Connection coefficients of the q-confluent equation.
//!
//! With `S_μ(a,b;q,x)` and `S_μ(b,a;q,x)` as the basis at infinity, the two
//! solutions at the origin decompose as
//!
//! ```text
//! ₂f₀(a,b;λ,q,x) = C_μ^λ(a,b;q,x) S_μ(a,b;q,x) + C_μ^λ(b,a;q,x) S_μ(b,a;q,x)
//! ₂f₁(a,b;q,x)   = C_μ(a,b;q,x)   S_μ(a,b;q,x) + C_μ(b,a;q,x)   S_μ(b,a;q,x)
//! ```
//!
//! where every coefficient is invariant under `x ↦ qx`.

mod sampling;

pub use sampling::{halton, AnnulusSampler};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::{in_negative_power_spiral, ln_qpoch_inf, ln_theta, QParam, SpiralSet};
use crate::qseries::{phi21_continued, u2_solution, v_solution};
use crate::report::VerificationReport;
use crate::resummation::f20;
use crate::scalar::{LogValue, Real};

/// Parameters shared by every connection formula, validated once.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionContext<T> {
    a: Complex<T>,
    b: Complex<T>,
    lambda: Complex<T>,
    mu: Complex<T>,
    qp: QParam<T>,
    exclusions: SpiralSet<T>,
}

impl<T: Real> ConnectionContext<T> {
    /// Rejects `b/a ∈ q^Z` (α − β ∈ Z), terminating `a, b ∈ q^{−Z≥0}`, and
    /// `λ`, `μ` that make a theta prefactor vanish identically.
    pub fn new(
        a: Complex<T>,
        b: Complex<T>,
        lambda: Complex<T>,
        mu: Complex<T>,
        qp: QParam<T>,
    ) -> Result<Self> {
        let zero = T::zero();
        let one = Complex::new(T::one(), T::zero());
        for (v, name) in [(a, "a"), (b, "b"), (lambda, "lambda"), (mu, "mu")] {
            if v.norm() == zero || !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be finite and nonzero"
                )));
            }
        }
        let unit = SpiralSet::new(qp.guard()).with(one, "[1;q]");
        if unit.hit(&qp, b / a).is_some() {
            return Err(Error::Degenerate(format!(
                "b/a = {} lies on q^Z (alpha - beta is an integer)",
                b / a
            )));
        }
        for (v, name) in [(a, "a"), (b, "b")] {
            if let Some(k) = in_negative_power_spiral(&qp, v, qp.guard()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = q^-{k} makes the series terminate"
                )));
            }
        }
        if unit.hit(&qp, -lambda).is_some() {
            return Err(Error::spiral("[-1;q]", format!("lambda = {lambda}")));
        }
        let exclusions = SpiralSet::new(qp.guard())
            .with(one, "[1;q]")
            .with(one / (a * b), "[1/(ab);q]")
            .with(-lambda, "[-lambda;q]")
            .with(-one / mu, "[-1/mu;q]")
            .with(-one / (a * mu), "[-1/(a mu);q]")
            .with(-one / (b * mu), "[-1/(b mu);q]");
        Ok(ConnectionContext {
            a,
            b,
            lambda,
            mu,
            qp,
            exclusions,
        })
    }

    /// The usual exponent form `a = q^α`, `b = q^β` (real `q`).
    pub fn from_exponents(
        alpha: Complex<T>,
        beta: Complex<T>,
        lambda: Complex<T>,
        mu: Complex<T>,
        qp: QParam<T>,
    ) -> Result<Self> {
        Self::new(qp.pow(alpha), qp.pow(beta), lambda, mu, qp)
    }

    pub fn a(&self) -> Complex<T> {
        self.a
    }

    pub fn b(&self) -> Complex<T> {
        self.b
    }

    pub fn lambda(&self) -> Complex<T> {
        self.lambda
    }

    pub fn mu(&self) -> Complex<T> {
        self.mu
    }

    pub fn qp(&self) -> &QParam<T> {
        &self.qp
    }

    /// `[1;q] ∪ [1/(ab);q] ∪ [−λ;q] ∪ [−1/μ;q] ∪ [−1/(aμ);q] ∪ [−1/(bμ);q]`.
    pub fn exclusions(&self) -> &SpiralSet<T> {
        &self.exclusions
    }

    pub fn with_mu(&self, mu: Complex<T>) -> Result<Self> {
        Self::new(self.a, self.b, self.lambda, mu, self.qp)
    }

    pub fn with_lambda(&self, lambda: Complex<T>) -> Result<Self> {
        Self::new(self.a, self.b, lambda, self.mu, self.qp)
    }

    fn pair(&self, swap: bool) -> (Complex<T>, Complex<T>) {
        if swap {
            (self.b, self.a)
        } else {
            (self.a, self.b)
        }
    }

    fn check(&self, x: Complex<T>) -> Result<()> {
        self.exclusions.check(&self.qp, x)
    }
}

/// Relative residual of the q-confluent equation
/// `(1 − abqx) u(q²x) − {1 − (a+b)qx} u(qx) − qx u(x)`, scaled by its
/// largest term.
pub fn chge_residual<T, F>(u: F, ctx: &ConnectionContext<T>, x: Complex<T>) -> Result<T>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    let (a, b, q) = (ctx.a, ctx.b, ctx.qp.q());
    let one = Complex::new(T::one(), T::zero());
    let t = [
        (one - a * b * q * x) * u(q * q * x)?,
        (one - (a + b) * q * x) * u(q * x)?,
        q * x * u(x)?,
    ];
    let scale = t
        .iter()
        .map(|v| v.norm())
        .fold(T::min_positive_value(), T::max);
    Ok((t[0] - t[1] - t[2]).norm() / scale)
}

/// Default relative tolerance for equation residuals.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// The q-confluent equation at `x` as a report: `lhs = (1 − abqx) u(q²x)`
/// against `rhs = {1 − (a+b)qx} u(qx) + qx u(x)`.
pub fn residual_report<T, F>(
    identity: &str,
    u: F,
    ctx: &ConnectionContext<T>,
    x: Complex<T>,
) -> Result<VerificationReport>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    let (a, b, q) = (ctx.a, ctx.b, ctx.qp.q());
    let one = Complex::new(T::one(), T::zero());
    let lhs = (one - a * b * q * x) * u(q * q * x)?;
    let rhs = (one - (a + b) * q * x) * u(q * x)? + q * x * u(x)?;
    Ok(with_ctx_t(
        VerificationReport::compare(identity, lhs, rhs, RESIDUAL_TOL),
        ctx,
        x,
    ))
}

/// `S_μ(a,b;q,x)`, or `S_μ(b,a;q,x)` when `swap`.
pub fn s_mu<T: Real>(ctx: &ConnectionContext<T>, swap: bool, x: Complex<T>) -> Result<Complex<T>> {
    let (a, b) = ctx.pair(swap);
    v_solution(a, b, ctx.mu, &ctx.qp, x)
}

fn ln_theta_ratio<T: Real>(
    qp: &QParam<T>,
    num: Complex<T>,
    den: Complex<T>,
) -> Result<LogValue<T>> {
    ln_theta(qp, num)?
        .checked_div(ln_theta(qp, den)?)
        .ok_or_else(|| Error::Pole(format!("theta({den}) = 0")))
}

/// `C_μ^λ(a,b;q,x) = (b;q)_∞/(b/a;q)_∞ · θ(aλ)/θ(λ) · θ(qax/λ)/θ(qx/λ) · θ(μx)/θ(aμx)`.
pub fn c_mu_lambda<T: Real>(
    ctx: &ConnectionContext<T>,
    swap: bool,
    x: Complex<T>,
) -> Result<Complex<T>> {
    ctx.check(x)?;
    let (a, b) = ctx.pair(swap);
    let (qp, lam, mu) = (&ctx.qp, ctx.lambda, ctx.mu);
    let q = qp.q();
    let consts = ln_qpoch_inf(b, qp)
        .checked_div(ln_qpoch_inf(b / a, qp))
        .ok_or_else(|| Error::Degenerate("(b/a;q)_inf = 0".into()))?;
    let v = consts
        * ln_theta_ratio(qp, a * lam, lam)?
        * ln_theta_ratio(qp, q * a * x / lam, q * x / lam)?
        * ln_theta_ratio(qp, mu * x, a * mu * x)?;
    Ok(v.value())
}

/// `C_μ(a,b;q,x) = (q/a;q)_∞/((b/a,q;q)_∞) · θ(−aqx)/θ(−qx) · θ(μx)/θ(aμx)`.
pub fn c_mu<T: Real>(ctx: &ConnectionContext<T>, swap: bool, x: Complex<T>) -> Result<Complex<T>> {
    ctx.check(x)?;
    let (a, b) = ctx.pair(swap);
    let (qp, mu) = (&ctx.qp, ctx.mu);
    let q = qp.q();
    let consts = ln_qpoch_inf(q / a, qp)
        .checked_div(ln_qpoch_inf(b / a, qp) * ln_qpoch_inf(q, qp))
        .ok_or_else(|| Error::Degenerate("(b/a;q)_inf = 0".into()))?;
    let v =
        consts * ln_theta_ratio(qp, -a * q * x, -q * x)? * ln_theta_ratio(qp, mu * x, a * mu * x)?;
    Ok(v.value())
}

/// Right-hand side of Zhang's connection formula for `₂f₀`, written without
/// the gauge `μ`:
///
/// ```text
/// (b;q)_∞/(b/a;q)_∞ · θ(aλ)/θ(λ) · θ(qax/λ)/θ(qx/λ) · ₂φ₁(a,0;aq/b;q,q/(abx)) + (a ↔ b)
/// ```
pub fn zhang_rhs<T: Real>(ctx: &ConnectionContext<T>, x: Complex<T>) -> Result<Complex<T>> {
    let (qp, lam) = (&ctx.qp, ctx.lambda);
    let one = Complex::new(T::one(), T::zero());
    SpiralSet::new(qp.guard())
        .with(-lam, "[-lambda;q]")
        .with(one / (ctx.a * ctx.b), "[1/(ab);q]")
        .check(qp, x)?;
    let q = qp.q();
    let zero = Complex::new(T::zero(), T::zero());
    let mut sum = zero;
    for swap in [false, true] {
        let (a, b) = ctx.pair(swap);
        let series = phi21_continued(a, zero, a * q / b, qp, q / (a * b * x))?;
        let v = ln_qpoch_inf(b, qp)
            .checked_div(ln_qpoch_inf(b / a, qp))
            .ok_or_else(|| Error::Degenerate("(b/a;q)_inf = 0".into()))?
            * ln_theta_ratio(qp, a * lam, lam)?
            * ln_theta_ratio(qp, q * a * x / lam, q * x / lam)?
            * series;
        sum = sum + v.value();
    }
    Ok(sum)
}

/// Default relative tolerance for Zhang's formula and the first matrix row.
pub const ZHANG_TOL: f64 = 1e-8;
/// Default relative tolerance for the second matrix row.
pub const ROW2_TOL: f64 = 1e-9;

fn with_ctx(
    r: VerificationReport,
    ctx: &ConnectionContext<f64>,
    x: Complex<f64>,
) -> VerificationReport {
    r.with_param("q", ctx.qp.q())
        .with_param("a", ctx.a)
        .with_param("b", ctx.b)
        .with_param("lambda", ctx.lambda)
        .with_param("mu", ctx.mu)
        .with_param("x", x)
}

fn with_ctx_t<T: Real>(
    r: VerificationReport,
    ctx: &ConnectionContext<T>,
    x: Complex<T>,
) -> VerificationReport {
    let cast = |z: Complex<T>| {
        Complex::new(
            z.re.to_f64().unwrap_or(f64::NAN),
            z.im.to_f64().unwrap_or(f64::NAN),
        )
    };
    let c64 = ConnectionContext {
        a: cast(ctx.a),
        b: cast(ctx.b),
        lambda: cast(ctx.lambda),
        mu: cast(ctx.mu),
        qp: QParam::new(cast(ctx.qp.q())).expect("q already validated"),
        exclusions: SpiralSet::new(1e-6),
    };
    with_ctx(r, &c64, cast(x))
}

/// Zhang's formula: `₂f₀` from the Borel–Laplace pipeline against the
/// theta-weighted right-hand side.
pub fn verify_zhang<T: Real>(
    ctx: &ConnectionContext<T>,
    x: Complex<T>,
) -> Result<VerificationReport> {
    let lhs = f20(ctx.a, ctx.b, ctx.lambda, &ctx.qp, x)?;
    let rhs = zhang_rhs(ctx, x)?;
    Ok(with_ctx_t(
        VerificationReport::compare("zhang_cz", lhs, rhs, ZHANG_TOL),
        ctx,
        x,
    ))
}

/// The 2×2 connection matrix at one point together with the check of each
/// row against the solution it reconstructs.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionMatrix<T> {
    /// `[[C_μ^λ(a,b), C_μ^λ(b,a)], [C_μ(a,b), C_μ(b,a)]]`
    pub entries: [[Complex<T>; 2]; 2],
    /// `[S_μ(a,b), S_μ(b,a)]`
    pub basis: [Complex<T>; 2],
    /// `₂f₀` against row 1 times the basis.
    pub row1: VerificationReport,
    /// `₂f₁ = u_2` against row 2 times the basis.
    pub row2: VerificationReport,
}

impl<T: Real> ConnectionMatrix<T> {
    /// Row `i` applied to the basis.
    pub fn row_value(&self, i: usize) -> Complex<T> {
        self.entries[i][0] * self.basis[0] + self.entries[i][1] * self.basis[1]
    }
}

pub fn connection_matrix<T: Real>(
    ctx: &ConnectionContext<T>,
    x: Complex<T>,
) -> Result<ConnectionMatrix<T>> {
    ctx.check(x)?;
    let entries = [
        [c_mu_lambda(ctx, false, x)?, c_mu_lambda(ctx, true, x)?],
        [c_mu(ctx, false, x)?, c_mu(ctx, true, x)?],
    ];
    let basis = [s_mu(ctx, false, x)?, s_mu(ctx, true, x)?];
    let row = |i: usize| entries[i][0] * basis[0] + entries[i][1] * basis[1];
    let f0 = f20(ctx.a, ctx.b, ctx.lambda, &ctx.qp, x)?;
    let f1 = u2_solution(ctx.a, ctx.b, &ctx.qp, x)?;
    let row1 = with_ctx_t(
        VerificationReport::compare("matrix_row1", f0, row(0), ZHANG_TOL),
        ctx,
        x,
    );
    let row2 = with_ctx_t(
        VerificationReport::compare("matrix_row2", f1, row(1), ROW2_TOL),
        ctx,
        x,
    );
    Ok(ConnectionMatrix {
        entries,
        basis,
        row1,
        row2,
    })
}

/// Condition-scaled Casoratian of the basis at infinity:
/// `|S₁(x)S₂(qx) − S₂(x)S₁(qx)| / (|S₁(x)S₂(qx)| + |S₂(x)S₁(qx)|)`.
/// Near zero means the two solutions are numerically dependent.
pub fn casoratian<T: Real>(ctx: &ConnectionContext<T>, x: Complex<T>) -> Result<T> {
    let q = ctx.qp.q();
    let (s1, s2) = (s_mu(ctx, false, x)?, s_mu(ctx, true, x)?);
    let (t1, t2) = (s_mu(ctx, false, q * x)?, s_mu(ctx, true, q * x)?);
    let (p, r) = (s1 * t2, s2 * t1);
    Ok((p - r).norm() / (p.norm() + r.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::v_power_solution;
    use crate::resummation::f21_residue_sum;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn ctx(q: f64) -> ConnectionContext<f64> {
        let qp = QParam::real(q).unwrap();
        ConnectionContext::from_exponents(c(0.3, 0.0), c(0.7, 0.0), c(1.1, 0.0), c(1.3, 0.0), qp)
            .unwrap()
    }

    #[test]
    fn residual_operator() {
        let k = ctx(0.5);
        assert_eq!(
            chge_residual(|_| Ok(c(0.0, 0.0)), &k, c(1.0, 0.0)).unwrap(),
            0.0
        );
        // u ≡ 1: |(1−abqx) − (1−(a+b)qx) − qx| / max(...) by hand
        let (a, b, q) = (k.a(), k.b(), 0.5);
        let x = 1.0;
        let t = [1.0 - (a * b).re * q * x, 1.0 - (a + b).re * q * x, q * x];
        let oracle = (t[0] - t[1] - t[2]).abs() / t.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let r = chge_residual(|_| Ok(c(1.0, 0.0)), &k, c(x, 0.0)).unwrap();
        assert!((r - oracle).abs() < 1e-15 && r > 0.01);
        let r = chge_residual(|t| u2_solution(a, b, k.qp(), t), &k, c(0.35, 0.0)).unwrap();
        assert!(r <= 1e-10);
    }

    #[test]
    fn context_validation() {
        let qp = QParam::real(0.5).unwrap();
        let one = c(1.0, 0.0);
        let a = qp.pow(c(0.3, 0.0));
        assert!(matches!(
            ConnectionContext::new(a, a, one, one, qp),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            ConnectionContext::new(a, a * qp.powi(3), one, one, qp),
            Err(Error::Degenerate(_))
        ));
        assert!(ConnectionContext::new(qp.powi(-2), a, one, one, qp).is_err());
        assert!(ConnectionContext::new(a, qp.pow(c(0.7, 0.0)), -one * 4.0, one, qp).is_err());
    }

    #[test]
    fn s_mu_basics() {
        let k = ctx(0.5);
        let x = c(3.7, 0.0);
        let r = chge_residual(|t| s_mu(&k, false, t), &k, x).unwrap();
        assert!(r <= 1e-10);
        let swapped = s_mu(&k, true, x).unwrap();
        let direct = v_solution(k.b(), k.a(), k.mu(), k.qp(), x).unwrap();
        assert_eq!(swapped, direct);
        // S_μ / x^{-α}-form is q-periodic
        let ratio =
            |t| s_mu(&k, false, t).unwrap() / v_power_solution(k.a(), k.b(), k.qp(), t).unwrap();
        let (r0, r1) = (ratio(c(2.1, 0.4)), ratio(c(1.05, 0.2)));
        assert!((r0 - r1).norm() <= 1e-12 * r0.norm());
    }

    #[test]
    fn coefficients_are_q_elliptic() {
        let k = ctx(0.5);
        let q = k.qp().q();
        for x in [c(2.6, 0.0), c(0.7, -1.3)] {
            for swap in [false, true] {
                let (u, v) = (
                    c_mu_lambda(&k, swap, x).unwrap(),
                    c_mu_lambda(&k, swap, q * x).unwrap(),
                );
                assert!((u - v).norm() <= 1e-10 * u.norm());
                let (u, v) = (c_mu(&k, swap, x).unwrap(), c_mu(&k, swap, q * x).unwrap());
                assert!((u - v).norm() <= 1e-10 * u.norm());
            }
        }
    }

    #[test]
    fn c_times_s_is_gauge_invariant() {
        let k = ctx(0.5);
        let k2 = k.with_mu(k.mu() * 2.0).unwrap();
        let x = c(2.6, 0.3);
        for swap in [false, true] {
            let p1 = c_mu(&k, swap, x).unwrap() * s_mu(&k, swap, x).unwrap();
            let p2 = c_mu(&k2, swap, x).unwrap() * s_mu(&k2, swap, x).unwrap();
            assert!((p1 - p2).norm() <= 1e-10 * p1.norm());
        }
    }

    #[test]
    fn matrix_rows_hold() {
        let k = ctx(0.5);
        let m = connection_matrix(&k, c(2.6, 0.0)).unwrap();
        assert!(m.row1.pass, "{:?}", m.row1);
        assert!(m.row2.pass, "{:?}", m.row2);
        // row 2 equals the residue sum term by term after μ cancels
        let s = f21_residue_sum(k.a(), k.b(), k.qp(), c(2.6, 0.0)).unwrap();
        assert!((m.row_value(1) - s).norm() <= 1e-10 * s.norm());
        let k2 = k.with_mu(k.mu() * 0.9).unwrap();
        let m2 = connection_matrix(&k2, c(2.6, 0.0)).unwrap();
        for i in 0..2 {
            let (u, v) = (m.row_value(i), m2.row_value(i));
            assert!((u - v).norm() <= 1e-9 * u.norm());
        }
    }

    #[test]
    fn zhang_formula() {
        let k = ctx(0.5);
        let r = verify_zhang(&k, c(0.8, 0.0)).unwrap();
        assert!(r.pass, "{r:?}");
        let res = chge_residual(|t| zhang_rhs(&k, t), &k, c(0.8, 0.0)).unwrap();
        assert!(res <= 1e-9);
        let near = -k.lambda() * 0.25 * (1.0 + 5e-7);
        assert!(matches!(verify_zhang(&k, near), Err(Error::Spiral { .. })));
    }

    #[test]
    fn degeneracy_guard_fires_before_blowup() {
        let qp = QParam::real(0.5).unwrap();
        let one = c(1.0, 0.0);
        let a = qp.pow(c(0.3, 0.0));
        let x = c(2.6, 0.0);
        let mut last = 0.0;
        for d in [1e-1, 1e-2, 1e-3, 1e-4] {
            let k =
                ConnectionContext::new(a, a * qp.pow(c(1.0 + d, 0.0)), one * 1.1, one * 1.3, qp)
                    .unwrap();
            let v = c_mu(&k, false, x).unwrap().norm();
            assert!(v > last && v.is_finite());
            last = v;
        }
        assert!(ConnectionContext::new(a, a * qp.pow(c(1.0 + 1e-8, 0.0)), one, one, qp).is_err());
    }

    #[test]
    fn casoratian_is_nonzero() {
        let k = ctx(0.5);
        for x in [c(2.6, 0.0), c(-1.0, 0.7), c(0.3, 0.3)] {
            assert!(casoratian(&k, x).unwrap() > 1e-3);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn rows_hold_on_random_points(i in 1u64..400, qi in 0usize..3) {
            let k = ctx([0.3, 0.5, 0.7][qi]);
            let sampler = AnnulusSampler { start: i, shifts: 1, ..Default::default() };
            let x = sampler.points(k.qp(), k.exclusions(), 1)[0];
            let m = connection_matrix(&k, x).unwrap();
            prop_assert!(m.row1.rel_diff <= 1e-8, "{:?}", m.row1);
            prop_assert!(m.row2.rel_diff <= 1e-8, "{:?}", m.row2);
        }
    }
}
