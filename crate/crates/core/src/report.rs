//! Serializable verification records.
//!
//! Reports are always `f64`, whatever scalar the computation used.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Smallest denominator used for relative differences.
pub const TINY: f64 = 1e-300;

/// A complex number as an `{re, im}` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl Cplx {
    pub fn new(re: f64, im: f64) -> Self {
        Cplx { re, im }
    }

    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn from_complex<T: Real>(z: Complex<T>) -> Self {
        Cplx {
            re: z.re.to_f64().unwrap_or(f64::NAN),
            im: z.im.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn to_complex(self) -> Complex<f64> {
        Complex::new(self.re, self.im)
    }
}

impl<T: Real> From<Complex<T>> for Cplx {
    fn from(z: Complex<T>) -> Self {
        Cplx::from_complex(z)
    }
}

impl From<f64> for Cplx {
    fn from(v: f64) -> Self {
        Cplx::new(v, 0.0)
    }
}

fn rel(abs: f64, lhs: Cplx, rhs: Cplx) -> f64 {
    abs / lhs.norm().max(rhs.norm()).max(TINY)
}

/// One identity instance: both sides, their distance and the verdict.
///
/// `rel_diff = abs_diff / max(|lhs|, |rhs|, TINY)` and
/// `pass ⇔ rel_diff ≤ tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: BTreeMap<String, Cplx>,
    pub lhs: Cplx,
    pub rhs: Cplx,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>, lhs: Cplx, rhs: Cplx, tolerance: f64) -> Self {
        let abs_diff = (lhs.to_complex() - rhs.to_complex()).norm();
        let rel_diff = rel(abs_diff, lhs, rhs);
        VerificationReport {
            identity: identity.into(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            abs_diff,
            rel_diff,
            tolerance,
            pass: rel_diff <= tolerance,
            notes: Vec::new(),
        }
    }

    /// Builds a report from values in any scalar type, differencing in that
    /// type before conversion.
    pub fn compare<T: Real>(
        identity: impl Into<String>,
        lhs: Complex<T>,
        rhs: Complex<T>,
        tolerance: f64,
    ) -> Self {
        let mut r = Self::new(identity, lhs.into(), rhs.into(), tolerance);
        r.abs_diff = (lhs - rhs).norm().to_f64().unwrap_or(f64::NAN);
        r.rel_diff = rel(r.abs_diff, r.lhs, r.rhs);
        r.pass = r.rel_diff <= tolerance;
        r
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl Into<Cplx>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Replaces the tolerance and recomputes the verdict.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.rel_diff <= tolerance;
        self
    }
}

/// One row of a `q → 1` scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub q: f64,
    pub lhs: Cplx,
    pub rhs: Cplx,
    pub abs_diff: f64,
    pub rel_diff: f64,
}

impl ScanRow {
    pub fn new(q: f64, lhs: Cplx, rhs: Cplx) -> Self {
        let abs_diff = (lhs.to_complex() - rhs.to_complex()).norm();
        ScanRow {
            q,
            lhs,
            rhs,
            abs_diff,
            rel_diff: rel(abs_diff, lhs, rhs),
        }
    }
}

/// A sweep along increasing `q`. Passes iff the relative differences
/// strictly decrease and the last one is within `tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub id: String,
    pub params: BTreeMap<String, Cplx>,
    pub rows: Vec<ScanRow>,
    pub strictly_decreasing: bool,
    pub terminal_rel_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl ScanTable {
    pub fn new(id: impl Into<String>, rows: Vec<ScanRow>, tolerance: f64) -> Self {
        let mut t = ScanTable {
            id: id.into(),
            params: BTreeMap::new(),
            rows,
            strictly_decreasing: false,
            terminal_rel_diff: f64::NAN,
            tolerance,
            pass: false,
            notes: Vec::new(),
        };
        t.refresh();
        t
    }

    fn refresh(&mut self) {
        // Exact agreement all the way (e.g. γ = 0) counts as decreasing.
        self.strictly_decreasing = self.rows.windows(2).all(|w| {
            w[1].rel_diff < w[0].rel_diff || (w[0].rel_diff == 0.0 && w[1].rel_diff == 0.0)
        });
        self.terminal_rel_diff = self.rows.last().map_or(f64::NAN, |r| r.rel_diff);
        self.pass = !self.rows.is_empty()
            && self.strictly_decreasing
            && self.terminal_rel_diff <= self.tolerance;
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl Into<Cplx>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.refresh();
        self
    }

    /// The successive ratios `d_{i+1} / d_i` of relative differences.
    pub fn trend_ratios(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| w[1].rel_diff / w[0].rel_diff)
            .collect()
    }
}

/// Any record the CLI can emit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Value {
        function: String,
        params: BTreeMap<String, Cplx>,
        value: Cplx,
    },
    Report(VerificationReport),
    Scan(ScanTable),
    Error {
        kind: String,
        message: String,
    },
}

impl Record {
    /// Whether this record counts as a failure for the exit code.
    pub fn failed(&self) -> bool {
        match self {
            Record::Report(r) => !r.pass,
            Record::Scan(s) => !s.pass,
            _ => false,
        }
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn params_cell(p: &BTreeMap<String, Cplx>) -> String {
    p.iter()
        .map(|(k, v)| format!("{k}=({},{})", fmt(v.re), fmt(v.im)))
        .collect::<Vec<_>>()
        .join(";")
}

/// CSV lines (header first) for a list of records. Complex fields take two
/// columns each.
pub fn to_csv(records: &[Record]) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(Vec::new());
    let mut last_header: Option<&'static [&'static str]> = None;
    const VALUE_HDR: &[&str] = &["record", "function", "params", "value_re", "value_im"];
    const REPORT_HDR: &[&str] = &[
        "record",
        "identity",
        "params",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "abs_diff",
        "rel_diff",
        "tolerance",
        "pass",
        "notes",
    ];
    const SCAN_HDR: &[&str] = &[
        "record", "id", "q", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_diff", "rel_diff",
    ];
    const ERROR_HDR: &[&str] = &["record", "kind", "message"];
    let mut header = |w: &mut csv::Writer<Vec<u8>>, h: &'static [&'static str]| {
        if last_header != Some(h) {
            last_header = Some(h);
            w.write_record(h)
        } else {
            Ok(())
        }
    };
    for r in records {
        match r {
            Record::Value {
                function,
                params,
                value,
            } => {
                header(&mut w, VALUE_HDR)?;
                w.write_record([
                    "value".into(),
                    function.clone(),
                    params_cell(params),
                    fmt(value.re),
                    fmt(value.im),
                ])?;
            }
            Record::Report(v) => {
                header(&mut w, REPORT_HDR)?;
                w.write_record([
                    "report".into(),
                    v.identity.clone(),
                    params_cell(&v.params),
                    fmt(v.lhs.re),
                    fmt(v.lhs.im),
                    fmt(v.rhs.re),
                    fmt(v.rhs.im),
                    fmt(v.abs_diff),
                    fmt(v.rel_diff),
                    fmt(v.tolerance),
                    v.pass.to_string(),
                    v.notes.join(" | "),
                ])?;
            }
            Record::Scan(s) => {
                header(&mut w, SCAN_HDR)?;
                for row in &s.rows {
                    w.write_record([
                        "row".into(),
                        s.id.clone(),
                        fmt(row.q),
                        fmt(row.lhs.re),
                        fmt(row.lhs.im),
                        fmt(row.rhs.re),
                        fmt(row.rhs.im),
                        fmt(row.abs_diff),
                        fmt(row.rel_diff),
                    ])?;
                }
                // footer with the trend verdict
                w.write_record([
                    "trend".into(),
                    s.id.clone(),
                    format!("strictly_decreasing={}", s.strictly_decreasing),
                    format!("terminal_rel_diff={}", fmt(s.terminal_rel_diff)),
                    format!("tolerance={}", fmt(s.tolerance)),
                    format!("pass={}", s.pass),
                    params_cell(&s.params),
                    s.notes.join(" | "),
                ])?;
            }
            Record::Error { kind, message } => {
                header(&mut w, ERROR_HDR)?;
                w.write_record(["error", kind.as_str(), message.as_str()])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
