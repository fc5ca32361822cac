use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::QParam;
use crate::report::Cplx;

/// Keys accepted by `--param`.
pub const KNOWN_KEYS: &[&str] = &[
    "q", "a", "b", "c", "alpha", "beta", "lambda", "mu", "x", "z", "r", "k", "n", "gamma", "u",
    "xi",
];

/// `--param key=value` pairs; values are real (`0.5`) or complex (`1.5-0.2i`).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    map: BTreeMap<String, Complex<f64>>,
}

impl Params {
    pub fn parse(items: &[String]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for item in items {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("'{item}' is not of the form key=value"))
            })?;
            let k = k.trim();
            if !KNOWN_KEYS.contains(&k) {
                return Err(Error::InvalidParameter(format!(
                    "unknown parameter '{k}' (known: {})",
                    KNOWN_KEYS.join(", ")
                )));
            }
            let v = Complex::<f64>::from_str(v.trim()).map_err(|_| {
                Error::InvalidParameter(format!("cannot parse '{v}' as a number for '{k}'"))
            })?;
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidParameter(format!("'{k}' must be finite")));
            }
            if map.insert(k.to_string(), v).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "parameter '{k}' given twice"
                )));
            }
        }
        Ok(Params { map })
    }

    pub fn get(&self, key: &str) -> Option<Complex<f64>> {
        self.map.get(key).copied()
    }

    pub fn require(&self, key: &str) -> Result<Complex<f64>> {
        self.get(key)
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter '{key}'")))
    }

    pub fn or(&self, key: &str, default: f64) -> Complex<f64> {
        self.get(key).unwrap_or(Complex::new(default, 0.0))
    }

    /// A nonnegative integer parameter.
    pub fn count(&self, key: &str) -> Result<Option<usize>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) if v.im == 0.0 && v.re >= 0.0 && v.re.fract() == 0.0 && v.re <= 1e6 => {
                Ok(Some(v.re as usize))
            }
            Some(v) => Err(Error::InvalidParameter(format!(
                "'{key}' = {v} must be a nonnegative integer"
            ))),
        }
    }

    pub fn qparam(&self) -> Result<QParam<f64>> {
        QParam::new(self.require("q")?)
    }

    /// `(a, b)` from `a`, `b` directly or from `a = q^α`, `b = q^β`; the
    /// exponents fall back to `defaults` when given.
    pub fn ab(
        &self,
        qp: &QParam<f64>,
        defaults: Option<(f64, f64)>,
    ) -> Result<(Complex<f64>, Complex<f64>)> {
        let pick = |direct: &str, exponent: &str, default: Option<f64>| -> Result<Complex<f64>> {
            if let Some(v) = self.get(direct) {
                if self.get(exponent).is_some() {
                    return Err(Error::InvalidParameter(format!(
                        "give '{direct}' or '{exponent}', not both"
                    )));
                }
                return Ok(v);
            }
            match (self.get(exponent), default) {
                (Some(e), _) => Ok(qp.pow(e)),
                (None, Some(d)) => Ok(qp.pow(Complex::new(d, 0.0))),
                (None, None) => Err(Error::InvalidParameter(format!(
                    "missing parameter '{direct}' (or '{exponent}')"
                ))),
            }
        };
        let (da, db) = match defaults {
            Some((x, y)) => (Some(x), Some(y)),
            None => (None, None),
        };
        Ok((pick("a", "alpha", da)?, pick("b", "beta", db)?))
    }

    pub fn to_report_map(&self) -> BTreeMap<String, Cplx> {
        self.map
            .iter()
            .map(|(k, v)| (k.clone(), Cplx::from_complex(*v)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(items: &[&str]) -> Result<Params> {
        Params::parse(&items.iter().map(|s| s.to_string()).collect::<Vec<_>>())
    }

    #[test]
    fn parsing() {
        let ps = p(&["q=0.5", "x=1.5-0.25i", "k=7"]).unwrap();
        assert_eq!(ps.get("q"), Some(Complex::new(0.5, 0.0)));
        assert_eq!(ps.get("x"), Some(Complex::new(1.5, -0.25)));
        assert_eq!(ps.count("k").unwrap(), Some(7));
        assert!(p(&["q"]).is_err());
        assert!(p(&["w=1"]).is_err());
        assert!(p(&["q=abc"]).is_err());
        assert!(p(&["q=0.5", "q=0.6"]).is_err());
        assert!(p(&["k=1.5"]).unwrap().count("k").is_err());
        let e = p(&[]).unwrap().require("lambda").unwrap_err();
        assert!(e.to_string().contains("lambda"));
    }

    #[test]
    fn exponents_or_values() {
        let qp = QParam::real(0.5).unwrap();
        let (a, b) = p(&["alpha=1", "b=0.25"]).unwrap().ab(&qp, None).unwrap();
        assert!((a - Complex::new(0.5, 0.0)).norm() < 1e-15 && b == Complex::new(0.25, 0.0));
        assert!(p(&["a=0.5", "alpha=1"]).unwrap().ab(&qp, None).is_err());
        assert!(p(&["a=0.5"]).unwrap().ab(&qp, None).is_err());
        assert!(p(&["a=0.5"]).unwrap().ab(&qp, Some((0.3, 0.7))).is_ok());
    }
}
