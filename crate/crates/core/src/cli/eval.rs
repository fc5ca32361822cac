use num_complex::Complex;

use super::params::Params;
use super::{DEFAULT_LAMBDA, DEFAULT_MU};
use crate::classical_limit::{gamma_classical, hyp1f1};
use crate::connection::{c_mu, c_mu_lambda, ConnectionContext};
use crate::error::{Error, Result};
use crate::qcore::{q_exp_e, q_gamma, qpoch_inf, qpoch_n, theta};
use crate::qseries::{phi21_continued, u2_solution, v_power_solution, v_solution};
use crate::report::{Cplx, Record};
use crate::resummation::{f20, g_closed_form};

/// Names accepted by `--command eval`.
pub const FUNCTIONS: &[&str] = &[
    "theta", "qpoch", "phi21", "u2", "f21", "v1", "v2", "f20", "S", "C", "C_lambda", "g",
    "gamma_q", "E_q", "gamma", "hyp1f1",
];

fn value(p: &Params, name: &str) -> Result<Complex<f64>> {
    let x = || p.require("x");
    match name {
        "theta" => theta(&p.qparam()?, x()?),
        "qpoch" => {
            let qp = p.qparam()?;
            let a = p.require("a")?;
            Ok(match p.count("n")? {
                Some(n) => qpoch_n(a, &qp, n),
                None => qpoch_inf(a, &qp),
            })
        }
        "phi21" => {
            let qp = p.qparam()?;
            phi21_continued(p.require("a")?, p.require("b")?, p.require("c")?, &qp, x()?)
        }
        "u2" | "f21" => {
            let qp = p.qparam()?;
            let (a, b) = p.ab(&qp, None)?;
            u2_solution(a, b, &qp, x()?)
        }
        "v1" | "v2" => {
            let qp = p.qparam()?;
            let (a, b) = p.ab(&qp, None)?;
            let (a, b) = if name == "v1" { (a, b) } else { (b, a) };
            v_power_solution(a, b, &qp, x()?)
        }
        "f20" => {
            let qp = p.qparam()?;
            let (a, b) = p.ab(&qp, None)?;
            f20(a, b, p.require("lambda")?, &qp, x()?)
        }
        "S" => {
            let qp = p.qparam()?;
            let (a, b) = p.ab(&qp, None)?;
            v_solution(a, b, p.require("mu")?, &qp, x()?)
        }
        "C" | "C_lambda" => {
            let qp = p.qparam()?;
            let (a, b) = p.ab(&qp, None)?;
            let lambda = if name == "C" {
                p.or("lambda", DEFAULT_LAMBDA)
            } else {
                p.require("lambda")?
            };
            let ctx = ConnectionContext::new(a, b, lambda, p.or("mu", DEFAULT_MU), qp)?;
            if name == "C" {
                c_mu(&ctx, false, x()?)
            } else {
                c_mu_lambda(&ctx, false, x()?)
            }
        }
        "g" => {
            let qp = p.qparam()?;
            let (a, b) = p.ab(&qp, None)?;
            let xi = p.get("xi").map(Ok).unwrap_or_else(x)?;
            g_closed_form(a, b, &qp, xi)
        }
        "gamma_q" => q_gamma(&p.qparam()?, x()?),
        "E_q" => {
            let qp = p.qparam()?;
            let z = p.get("z").map(Ok).unwrap_or_else(x)?;
            Ok(q_exp_e(&qp, z))
        }
        "gamma" => gamma_classical(x()?),
        "hyp1f1" => hyp1f1(p.require("alpha")?, p.require("gamma")?, p.require("z")?),
        _ => Err(Error::InvalidParameter(format!(
            "unknown function '{name}' (known: {})",
            FUNCTIONS.join(", ")
        ))),
    }
}

pub fn eval(name: &str, p: &Params) -> Result<Vec<Record>> {
    let v = value(p, name)?;
    Ok(vec![Record::Value {
        function: name.to_string(),
        params: p.to_report_map(),
        value: Cplx::from_complex(v),
    }])
}
