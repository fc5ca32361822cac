//! Foundational q-arithmetic.
//!
//! Infinite products are accumulated as sums of `ln(1 - a q^k)` so that
//! `(q;q)_∞ ≈ exp(-π²/(6(1-q)))` stays representable for `q` close to 1.
//! The Jacobi theta function
//!
//! ```text
//! θ(x) = Σ_{n∈Z} q^{n(n-1)/2} xⁿ = (q, -x, -q/x; q)_∞
//! ```
//!
//! is evaluated after reducing `x` into the annulus `|q|^{1/2} ≤ |x| ≤ |q|^{-1/2}`
//! using `θ(qx) = θ(x)/x`.

mod functions;
mod param;
mod pochhammer;
mod spiral;
mod theta;

pub use functions::{q_derivative, q_exp_e, q_gamma};
pub use param::QParam;
pub(crate) use param::{StopState, Stopper};
pub use pochhammer::{ln_qpoch_inf, qpoch_inf, qpoch_multi, qpoch_n};
pub use spiral::{in_negative_power_spiral, spiral_guard, Spiral, SpiralSet};
pub use theta::{
    ln_theta, theta, theta_modular_reduced, theta_ratio, theta_series_reduced, MODULAR_MIN_RE_INV_S,
};
