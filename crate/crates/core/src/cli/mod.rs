//! The `qconfluent` command line: `eval` a function, `verify` an identity
//! suite, or `scan` a `q → 1` limit. Output is one JSON record per line or
//! CSV; the exit code is 0 when everything passes, 1 on a tolerance failure
//! and 2 on any validation or domain error.

mod eval;
mod params;
mod scan;
mod verify;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use eval::FUNCTIONS;
pub use params::{Params, KNOWN_KEYS};
pub use scan::SCANS;
pub use verify::IDENTITIES;

use crate::error::{Error, Result};
use crate::report::{to_csv, Record};

/// Default `q` values of the verification suites.
pub const DEFAULT_Q: [f64; 3] = [0.3, 0.5, 0.7];
pub const DEFAULT_ALPHA: f64 = 0.3;
pub const DEFAULT_BETA: f64 = 0.7;
pub const DEFAULT_LAMBDA: f64 = 1.1;
pub const DEFAULT_MU: f64 = 1.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Eval,
    Verify,
    Scan,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "qconfluent",
    version,
    about = "q-confluent hypergeometric functions: evaluation, identity checks and q -> 1 scans"
)]
pub struct Args {
    #[arg(long, value_enum)]
    pub command: Command,
    /// Function (eval), identity suite (verify) or scan name.
    #[arg(long, alias = "function")]
    pub identity: String,
    /// `key=value`, repeatable; values may be complex (`0.5+0.1i`).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Increasing q values for scans, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub q_seq: Option<Vec<f64>>,
    /// Overrides every tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write records here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A validated command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub name: String,
    pub params: Params,
    pub q_seq: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self> {
        let params = Params::parse(&args.params)?;
        if let Some(t) = args.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "--tol {t} must be positive and finite"
                )));
            }
        }
        let known = match args.command {
            Command::Eval => FUNCTIONS,
            Command::Verify => IDENTITIES,
            Command::Scan => SCANS,
        };
        if !known.contains(&args.identity.as_str()) {
            return Err(Error::InvalidParameter(format!(
                "unknown name '{}' for {:?} (known: {})",
                args.identity,
                args.command,
                known.join(", ")
            )));
        }
        if args.q_seq.is_some() && args.command != Command::Scan {
            return Err(Error::InvalidParameter(
                "--q-seq only applies to scans".into(),
            ));
        }
        Ok(RunConfig {
            command: args.command,
            name: args.identity,
            params,
            q_seq: args.q_seq,
            tol: args.tol,
            format: args.format,
            out: args.out,
        })
    }
}

/// Records produced by one run and the exit code they imply.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub exit_code: i32,
}

fn error_outcome(e: &Error) -> Outcome {
    Outcome {
        records: vec![Record::Error {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }],
        exit_code: 2,
    }
}

pub fn execute(cfg: &RunConfig) -> Outcome {
    let result = match cfg.command {
        Command::Eval => eval::eval(&cfg.name, &cfg.params),
        Command::Verify => verify::verify(&cfg.name, &cfg.params, cfg.tol),
        Command::Scan => scan::scan(&cfg.name, &cfg.params, cfg.q_seq.as_deref(), cfg.tol),
    };
    match result {
        Ok(records) => {
            let exit_code = if records.iter().any(Record::failed) {
                1
            } else {
                0
            };
            Outcome { records, exit_code }
        }
        Err(e) => error_outcome(&e),
    }
}

/// JSON lines or CSV, newline terminated.
pub fn render(records: &[Record], format: Format) -> std::result::Result<String, String> {
    match format {
        Format::Json => {
            let mut s = String::new();
            for r in records {
                s.push_str(&serde_json::to_string(r).map_err(|e| e.to_string())?);
                s.push('\n');
            }
            Ok(s)
        }
        Format::Csv => to_csv(records).map_err(|e| e.to_string()),
    }
}

/// Result of [`run`]: text for stdout and stderr, and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `argv` (including the program name), executes and renders.
pub fn run<I, S>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                RunOutput {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                RunOutput {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    let format = args.format;
    let out = args.out.clone();
    let outcome = match RunConfig::from_args(args) {
        Ok(cfg) => execute(&cfg),
        Err(e) => error_outcome(&e),
    };
    let mut stderr = String::new();
    for r in &outcome.records {
        if let Record::Error { kind, message } = r {
            stderr.push_str(&format!("error ({kind}): {message}\n"));
        }
    }
    let text = match render(&outcome.records, format) {
        Ok(t) => t,
        Err(e) => {
            return RunOutput {
                stdout: String::new(),
                stderr: format!("{stderr}error: cannot render output: {e}\n"),
                code: 2,
            }
        }
    };
    match out {
        Some(path) => match std::fs::write(&path, &text) {
            Ok(()) => RunOutput {
                stdout: String::new(),
                stderr,
                code: outcome.exit_code,
            },
            Err(e) => RunOutput {
                stdout: String::new(),
                stderr: format!("{stderr}error: cannot write {}: {e}\n", path.display()),
                code: 2,
            },
        },
        None => RunOutput {
            stdout: text,
            stderr,
            code: outcome.exit_code,
        },
    }
}
