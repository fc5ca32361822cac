//! q-confluent hypergeometric functions and their connection theory.
//!
//! The crate evaluates the local solutions of the q-confluent hypergeometric
//! equation
//!
//! ```text
//! (1 - ab q x) u(q²x) - {1 - (a+b) q x} u(qx) - q x u(x) = 0
//! ```
//!
//! around `x = 0` and `x = ∞`, resums the divergent solution `₂φ₀(a,b;−;q,x)`
//! with q-Borel/q-Laplace transforms of the first kind, rebuilds the convergent
//! solution `₂f₁` from the q-Borel/q-Laplace pair of the second kind, and
//! evaluates the q-elliptic connection coefficients that tie the two bases
//! together. The `classical_limit` module checks the `q → 1 − 0` limits of the
//! same formulas against classical `Γ`, `₁F₁` and `₂F₀`.
//!
//! Modules:
//! - [`qcore`]: q-Pochhammer symbols, Jacobi theta, q-gamma, q-exponential, q-spirals
//! - [`qseries`]: basic hypergeometric series, continuation, local solutions
//! - [`resummation`]: q-Borel and q-Laplace transforms of both kinds, residues
//! - [`connection`]: `S_μ`, `C_μ^λ`, `C_μ`, the connection matrix, sampling
//! - [`classical_limit`]: classical special functions and `q → 1` scans
//! - [`report`]: serializable verification reports and scan tables
//! - [`cli`]: the command-line front end (`qconfluent` binary)
//!
//! Numerical code is generic over the real scalar `T: Real` (`f32` or `f64`)
//! and works on `Complex<T>`. The `*64` aliases below fix `T = f64`, which is
//! what the verification suite and the CLI use.

pub mod classical_limit;
pub mod cli;
pub mod connection;
pub mod error;
pub mod qcore;
pub mod qseries;
pub mod report;
pub mod resummation;
pub mod scalar;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use scalar::{LogValue, Real};

pub type Complex64 = Complex<f64>;
pub type QParam64 = qcore::QParam<f64>;
pub type SpiralSet64 = qcore::SpiralSet<f64>;
pub type FormalSeries64 = qseries::FormalSeries<f64>;
pub type HypParams64 = qseries::HypParams<f64>;
pub type BorelImage64 = resummation::BorelImage<f64>;
pub type ContourSpec64 = resummation::ContourSpec<f64>;
pub type ConnectionContext64 = connection::ConnectionContext<f64>;
pub type LimitScanConfig64 = classical_limit::LimitScanConfig<f64>;
