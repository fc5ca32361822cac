use num_complex::Complex;

use super::params::Params;
use super::{DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_LAMBDA, DEFAULT_MU, DEFAULT_Q};
use crate::connection::halton;
use crate::connection::{
    c_mu, c_mu_lambda, connection_matrix, residual_report, s_mu, verify_zhang, AnnulusSampler,
    ConnectionContext,
};
use crate::error::{Error, Result};
use crate::qcore::{qpoch_multi, theta, QParam, SpiralSet};
use crate::qseries::{u2_solution, v_power_solution, FormalSeries};
use crate::report::{Record, VerificationReport};
use crate::resummation::{
    borel_laplace_roundtrip_check, con2_borel_series, con2_series, f21_quadrature, f21_residue_sum,
    g_closed_form, g_taylor_coefficients, operational_relation_check, qborel_minus,
    residue_quadrature_check, shifted_poch_identity_check, ContourSpec,
};

/// Identity suites accepted by `--command verify`.
pub const IDENTITIES: &[&str] = &[
    "triple_product",
    "inversion",
    "equation_residuals",
    "thm2_9",
    "zhang_cz",
    "matrix",
    "lemma2_6",
    "lemma2_7",
    "lemma2_8",
    "g_equation",
];

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

/// The suite's `q` values: the one given, or the default set.
fn q_values(p: &Params) -> Result<Vec<QParam<f64>>> {
    match p.get("q") {
        Some(_) => Ok(vec![p.qparam()?]),
        None => DEFAULT_Q.iter().map(|&q| QParam::real(q)).collect(),
    }
}

/// Evaluation points: the given `x` (checked against `excl`), or `n`
/// Halton points tagged with their sequence index.
fn sample_points(
    p: &Params,
    qp: &QParam<f64>,
    excl: &SpiralSet<f64>,
    n: usize,
    shifts: usize,
) -> Result<Vec<(Option<u64>, C)>> {
    if let Some(x) = p.get("x") {
        for k in 0..=shifts as i64 {
            excl.check(qp, x * qp.powi(k))?;
        }
        return Ok(vec![(None, x)]);
    }
    let sampler = AnnulusSampler {
        shifts,
        ..AnnulusSampler::default()
    };
    Ok(sampler
        .indexed_points(qp, excl, n)
        .into_iter()
        .map(|(i, x)| (Some(i), x))
        .collect())
}

fn tag(r: VerificationReport, qp: &QParam<f64>, x: C, sample: Option<u64>) -> VerificationReport {
    let r = r.with_param("q", qp.q()).with_param("x", x);
    match sample {
        Some(i) => r.with_param("sample", i as f64),
        None => r,
    }
}

fn context(p: &Params, qp: &QParam<f64>) -> Result<ConnectionContext<f64>> {
    let (a, b) = p.ab(qp, Some((DEFAULT_ALPHA, DEFAULT_BETA)))?;
    ConnectionContext::new(
        a,
        b,
        p.or("lambda", DEFAULT_LAMBDA),
        p.or("mu", DEFAULT_MU),
        *qp,
    )
}

fn theta_identities(p: &Params, inversion: bool) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for qp in q_values(p)? {
        let excl = SpiralSet::new(qp.guard()).with(c(-1.0, 0.0), "[-1;q]");
        for (i, x) in sample_points(p, &qp, &excl, 100, 0)? {
            let lhs = theta(&qp, x)?;
            let r = if inversion {
                VerificationReport::compare("inversion", lhs, x * theta(&qp, x.inv())?, 1e-12)
            } else {
                let rhs = qpoch_multi(&[qp.q(), -x, -qp.q() / x], &qp);
                VerificationReport::compare("triple_product", lhs, rhs, 1e-12)
            };
            out.push(tag(r, &qp, x, i));
        }
    }
    Ok(out)
}

fn equation_residuals(p: &Params) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for qp in q_values(p)? {
        let ctx = context(p, &qp)?;
        let (a, b) = (ctx.a(), ctx.b());
        for (i, x) in sample_points(p, &qp, ctx.exclusions(), 50, 2)? {
            let reports = [
                residual_report("residual_u2", |y| u2_solution(a, b, &qp, y), &ctx, x)?,
                residual_report("residual_v1", |y| v_power_solution(a, b, &qp, y), &ctx, x)?,
                residual_report("residual_v2", |y| v_power_solution(b, a, &qp, y), &ctx, x)?,
                residual_report("residual_S_ab", |y| s_mu(&ctx, false, y), &ctx, x)?,
                residual_report("residual_S_ba", |y| s_mu(&ctx, true, y), &ctx, x)?,
            ];
            out.extend(reports.into_iter().map(|r| tag(r, &qp, x, i)));
        }
    }
    Ok(out)
}

fn thm2_9(p: &Params) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for qp in q_values(p)? {
        let ctx = context(p, &qp)?;
        let (a, b) = (ctx.a(), ctx.b());
        let contour = ContourSpec::for_g(a, b, &qp);
        for (i, x) in sample_points(p, &qp, ctx.exclusions(), 30, 0)? {
            let closed = u2_solution(a, b, &qp, x)?;
            let residues = f21_residue_sum(a, b, &qp, x)?;
            let quad = f21_quadrature(a, b, &qp, &contour, x)?;
            let ab =
                |r: VerificationReport| tag(r.with_param("a", a).with_param("b", b), &qp, x, i);
            out.push(ab(VerificationReport::compare(
                "thm2_9", closed, residues, 1e-9,
            )));
            out.push(ab(VerificationReport::compare(
                "thm2_9_quadrature_closed",
                quad,
                closed,
                1e-9,
            )
            .with_param("r", contour.radius())));
            out.push(ab(VerificationReport::compare(
                "thm2_9_quadrature_residues",
                quad,
                residues,
                1e-9,
            )
            .with_param("r", contour.radius())));
        }
    }
    Ok(out)
}

fn zhang(p: &Params) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for qp in q_values(p)? {
        let ctx = context(p, &qp)?;
        for (i, x) in sample_points(p, &qp, ctx.exclusions(), 20, 0)? {
            out.push(tag(verify_zhang(&ctx, x)?, &qp, x, i));
        }
    }
    Ok(out)
}

fn matrix(p: &Params) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for qp in q_values(p)? {
        let ctx = context(p, &qp)?;
        let scaled = ctx.with_mu(ctx.mu() * 0.9)?;
        let mut excl = ctx.exclusions().clone();
        for s in scaled.exclusions().spirals() {
            excl.push(s.anchor, format!("{} (0.9 mu)", s.label));
        }
        for (i, x) in sample_points(p, &qp, &excl, 30, 1)? {
            let m = connection_matrix(&ctx, x)?;
            let m2 = connection_matrix(&scaled, x)?;
            out.push(tag(m.row1.clone(), &qp, x, i));
            out.push(tag(m.row2.clone(), &qp, x, i));
            let qx = qp.q() * x;
            for swap in [false, true] {
                let entry = if swap { "(b,a)" } else { "(a,b)" };
                let r = VerificationReport::compare(
                    "matrix_elliptic_c_mu_lambda",
                    c_mu_lambda(&ctx, swap, qx)?,
                    c_mu_lambda(&ctx, swap, x)?,
                    1e-10,
                )
                .with_note(format!("entry C_mu^lambda{entry} at qx against x"));
                out.push(tag(r, &qp, x, i));
                let r = VerificationReport::compare(
                    "matrix_elliptic_c_mu",
                    c_mu(&ctx, swap, qx)?,
                    c_mu(&ctx, swap, x)?,
                    1e-10,
                )
                .with_note(format!("entry C_mu{entry} at qx against x"));
                out.push(tag(r, &qp, x, i));
            }
            for row in 0..2 {
                let r = VerificationReport::compare(
                    "matrix_mu_invariance",
                    m2.row_value(row),
                    m.row_value(row),
                    1e-9,
                )
                .with_param("row", (row + 1) as f64)
                .with_param("mu", ctx.mu())
                .with_note("row at 0.9 mu against row at mu");
                out.push(tag(r, &qp, x, i));
            }
        }
    }
    Ok(out)
}

const LEMMA2_6_POINTS: [(f64, f64); 3] = [(0.3, 0.0), (0.4, 0.2), (-0.6, 0.0)];

fn lemma2_6(p: &Params) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let r = p.get("r").map_or(0.1, |r| r.re);
    let plain = ContourSpec::new(r, ContourSpec::<f64>::MIN_NODES)?;
    for qp in q_values(p)? {
        let (a, b) = p.ab(&qp, Some((DEFAULT_ALPHA, DEFAULT_BETA)))?;
        let poly = FormalSeries::from_real(&[1.0, 2.0, -1.0, 0.5]);
        let cc: f64 = 0.8;
        let tri = FormalSeries::new(
            (0..60)
                .map(|n| qp.powi(n * (n - 1) / 2) * cc.powi(n as i32))
                .collect(),
        );
        let tri_img = qborel_minus(&tri, &qp)
            .with_closed_form(move |xi| Ok(c(1.0, 0.0) / (c(1.0, 0.0) - xi * cc)));
        let con2 = con2_series(a, b, &qp, 60);
        let (qq, aa, bb) = (qp, a, b);
        let con2_img =
            qborel_minus(&con2, &qp).with_closed_form(move |xi| g_closed_form(aa, bb, &qq, xi));
        let g_contour = ContourSpec::for_g(a, b, &qp);
        let xs: Vec<C> = match p.get("x") {
            Some(x) => vec![x],
            None => LEMMA2_6_POINTS.iter().map(|&(re, im)| c(re, im)).collect(),
        };
        for &x in &xs {
            let cases = [
                (
                    "polynomial",
                    borel_laplace_roundtrip_check(&poly, None, &plain, &qp, x)?,
                ),
                (
                    "q-geometric",
                    borel_laplace_roundtrip_check(&tri, Some(&tri_img), &plain, &qp, x)?,
                ),
                (
                    "con2",
                    borel_laplace_roundtrip_check(&con2, Some(&con2_img), &g_contour, &qp, x)?,
                ),
            ];
            out.extend(
                cases
                    .into_iter()
                    .map(|(name, r)| r.with_note(format!("series: {name}"))),
            );
        }
    }
    Ok(out)
}

/// Deterministic pseudorandom 8-term series from the Halton sequence.
fn halton_series(seed: u64) -> FormalSeries<f64> {
    FormalSeries::new(
        (0..8)
            .map(|n| {
                let i = 8 * seed + n + 1;
                c(2.0 * halton(i, 5) - 1.0, 2.0 * halton(i, 7) - 1.0)
            })
            .collect(),
    )
}

fn lemma2_7(p: &Params) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for qp in q_values(p)? {
        for m in 0..=4 {
            for l in 0..=4 {
                let seed = (5 * m + l) as u64;
                let r = operational_relation_check(&halton_series(seed), m, l, &qp)?;
                out.push(r.with_param("seed", seed as f64));
            }
        }
    }
    Ok(out)
}

fn lemma2_8(p: &Params) -> Result<Vec<VerificationReport>> {
    let lambda = p.or("lambda", DEFAULT_LAMBDA);
    let k_max = p.count("k")?.unwrap_or(5);
    if k_max > 40 {
        return Err(Error::InvalidParameter(format!(
            "k = {k_max} must be at most 40"
        )));
    }
    let mut out = Vec::new();
    for qp in q_values(p)? {
        for k in 0..=k_max {
            out.push(residue_quadrature_check(lambda, k, &qp)?);
            out.push(shifted_poch_identity_check(lambda, k, &qp)?);
        }
    }
    Ok(out)
}

fn g_equation(p: &Params) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for qp in q_values(p)? {
        let (a, b) = p.ab(&qp, Some((DEFAULT_ALPHA, DEFAULT_BETA)))?;
        let q = qp.q();
        let one = c(1.0, 0.0);
        let excl = SpiralSet::new(qp.guard())
            .with(-one / (q * a), "[-1/(qa);q]")
            .with(-one / (q * b), "[-1/(qb);q]");
        for (i, xi) in sample_points(p, &qp, &excl, 100, 1)? {
            let lhs = g_closed_form(a, b, &qp, q * xi)? * (one + q * q * xi);
            let rhs = (one + a * q * xi) * (one + b * q * xi) * g_closed_form(a, b, &qp, xi)?;
            let r = VerificationReport::compare("g_equation", lhs, rhs, 1e-12)
                .with_param("a", a)
                .with_param("b", b);
            out.push(tag(r, &qp, xi, i));
        }
        let n_max = 40;
        let borel = con2_borel_series(a, b, &qp, n_max);
        let taylor = g_taylor_coefficients(a, b, &qp, n_max);
        let mut worst: Option<(usize, f64)> = None;
        for n in 0..=n_max {
            let r = VerificationReport::compare("", borel.coeff(n), taylor.coeff(n), 0.0).rel_diff;
            if worst.is_none_or(|(_, w)| r > w) {
                worst = Some((n, r));
            }
        }
        let (n, _) = worst.expect("n_max >= 0");
        out.push(
            VerificationReport::compare("g_taylor", borel.coeff(n), taylor.coeff(n), 1e-11)
                .with_param("q", q)
                .with_param("a", a)
                .with_param("b", b)
                .with_param("n_max", n_max as f64)
                .with_param("n_worst", n as f64)
                .with_note("B^- of the con2 series against the product-form Taylor coefficients; worst n shown"),
        );
    }
    Ok(out)
}

pub fn verify(identity: &str, p: &Params, tol: Option<f64>) -> Result<Vec<Record>> {
    let reports = match identity {
        "triple_product" => theta_identities(p, false)?,
        "inversion" => theta_identities(p, true)?,
        "equation_residuals" => equation_residuals(p)?,
        "thm2_9" => thm2_9(p)?,
        "zhang_cz" => zhang(p)?,
        "matrix" => matrix(p)?,
        "lemma2_6" => lemma2_6(p)?,
        "lemma2_7" => lemma2_7(p)?,
        "lemma2_8" => lemma2_8(p)?,
        "g_equation" => g_equation(p)?,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "unknown identity '{identity}' (known: {})",
                IDENTITIES.join(", ")
            )))
        }
    };
    Ok(reports
        .into_iter()
        .map(|r| {
            Record::Report(match tol {
                Some(t) => r.with_tolerance(t),
                None => r,
            })
        })
        .collect())
}
