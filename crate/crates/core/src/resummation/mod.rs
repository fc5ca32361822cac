//! q-Borel and q-Laplace transformations of both kinds.
//!
//! First kind: `B_q^+` turns the divergent `₂φ₀(a,b;−;q,x)` into the
//! convergent `₂φ₁(a,b;0;q,−ξ)`, and the bilateral sum `L_{q,λ}^+` over the
//! spiral `[λ;q]` brings it back as the resummed solution `₂f₀(a,b;λ,q,x)`.
//!
//! Second kind: `B_q^-` maps the solution convergent at the origin to the
//! infinite product `g(ξ)`, and `L_q^-` is a contour integral against a theta
//! kernel. Closing the contour over the poles of `g` gives the residue sum
//! that expresses `₂f₁` through the solutions at infinity.

mod borel;
mod laplace;
mod residues;

pub use borel::{
    operational_relation_check, qborel_minus, qborel_plus, BorelImage, BorelKind,
    OPERATIONAL_MAX_SHIFT,
};
pub use laplace::{
    borel_laplace_roundtrip_check, f20, qlaplace_minus_quadrature, qlaplace_plus, ContourSpec,
};
pub use residues::{
    con2_borel_series, con2_series, f21_quadrature, f21_residue_sum, f21_residue_terms,
    g_closed_form, g_taylor_coefficients, q_q_inf, residue_at_spiral_pole,
    residue_quadrature_check, shifted_poch_identity_check,
};
