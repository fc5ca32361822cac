//! Basic hypergeometric series and the local solutions of the q-confluent
//! equation.
//!
//! `₂φ₁` with `|x| ≥ 1` is reached by analytic continuation: the series is
//! summed on `|x| ≤ 1/2` and the value is carried outward along the spiral
//! `x q^{-N}` with the three-term q-difference equation of `₂φ₁`.

mod formal;
mod hypergeometric;
mod solutions;

pub use formal::FormalSeries;
pub use hypergeometric::{
    phi20_formal_coeffs, phi21_c0_continued, phi21_continued, phi21_continued_steps,
    phi21_on_spiral, phi_rs, u1_is_divergent_diagnostic, HypParams,
};
pub use solutions::{
    ln_u2, u2_exclusions, u2_solution, v_exclusions, v_power_solution, v_solution,
};
