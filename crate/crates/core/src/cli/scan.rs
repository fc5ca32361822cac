use super::params::Params;
use crate::classical_limit::{
    e_q_scan, gamma_q_scan, limit_scan_thm33, limit_scan_zhang, theta_ratio_limit_scan,
    LimitScanConfig, THM33_DEFAULT_Z,
};
use crate::error::{Error, Result};
use crate::report::Record;

/// Scans accepted by `--command scan`.
pub const SCANS: &[&str] = &["gamma_q", "e_q", "theta_ratio", "zhang", "thm31", "thm33"];

pub fn scan(
    name: &str,
    p: &Params,
    q_seq: Option<&[f64]>,
    tol: Option<f64>,
) -> Result<Vec<Record>> {
    let mut cfg = LimitScanConfig::<f64>::default();
    if let Some(qs) = q_seq {
        cfg = cfg.with_q_sequence(qs.to_vec());
    }
    if let Some(t) = tol {
        cfg = cfg.with_tolerance(t);
    }
    if p.get("a").is_some() || p.get("b").is_some() {
        return Err(Error::InvalidParameter(
            "scans take the exponents 'alpha' and 'beta', not 'a' and 'b'".into(),
        ));
    }
    cfg = cfg.with_exponents(p.or("alpha", 0.3), p.or("beta", 0.7));
    if let Some(l) = p.get("lambda") {
        cfg = cfg.with_lambda(l);
    }
    cfg.validate()?;
    let tables = match name {
        "gamma_q" => vec![gamma_q_scan(p.or("x", 0.5), &cfg)?],
        "e_q" => vec![e_q_scan(p.or("z", 1.0), &cfg)?],
        "theta_ratio" => vec![theta_ratio_limit_scan(
            p.or("gamma", 0.3),
            p.or("u", 2.0),
            &cfg,
        )?],
        "zhang" | "thm31" => vec![limit_scan_zhang(&cfg.with_z(p.or("z", 2.0)))?],
        "thm33" => {
            let s = limit_scan_thm33(&cfg.with_z(p.or("z", THM33_DEFAULT_Z)))?;
            return Ok(vec![
                Record::Scan(s.connection),
                Record::Scan(s.asymptotic),
                Record::Report(s.consistency),
            ]);
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "unknown scan '{name}' (known: {})",
                SCANS.join(", ")
            )))
        }
    };
    Ok(tables.into_iter().map(Record::Scan).collect())
}
