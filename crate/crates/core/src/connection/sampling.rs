use num_complex::Complex;

use crate::qcore::{QParam, SpiralSet};
use crate::scalar::Real;

/// Radical inverse of `index` in `base` (the Halton sequence).
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// Deterministic sample points in the annulus `r_min ≤ |x| ≤ r_max`:
/// log-uniform radius from the base-2 Halton sequence, argument from base 3.
///
/// Points within `margin` (relative) of an excluded spiral — checked at
/// `x, qx, …, q^{shifts} x` — are skipped, so that residual checks that
/// evaluate at shifted points stay admissible.
#[derive(Clone, Debug)]
pub struct AnnulusSampler {
    pub r_min: f64,
    pub r_max: f64,
    pub margin: f64,
    pub shifts: usize,
    /// First Halton index used (index 0 is the degenerate point 0).
    pub start: u64,
}

impl Default for AnnulusSampler {
    fn default() -> Self {
        AnnulusSampler {
            r_min: 0.2,
            r_max: 5.0,
            margin: 1e-3,
            shifts: 2,
            start: 1,
        }
    }
}

impl AnnulusSampler {
    /// The `i`-th raw point of the sequence (no exclusion test).
    pub fn raw<T: Real>(&self, i: u64) -> Complex<T> {
        let (l0, l1) = (self.r_min.ln(), self.r_max.ln());
        let r = (l0 + (l1 - l0) * halton(i, 2)).exp();
        let phi = std::f64::consts::PI * (2.0 * halton(i, 3) - 1.0);
        let z = Complex::from_polar(r, phi);
        Complex::new(T::lit(z.re), T::lit(z.im))
    }

    /// `n` admissible points, in sequence order.
    pub fn points<T: Real>(
        &self,
        qp: &QParam<T>,
        exclusions: &SpiralSet<T>,
        n: usize,
    ) -> Vec<Complex<T>> {
        self.indexed_points(qp, exclusions, n)
            .into_iter()
            .map(|(_, x)| x)
            .collect()
    }

    /// Like [`points`](Self::points), paired with the Halton index of each point.
    pub fn indexed_points<T: Real>(
        &self,
        qp: &QParam<T>,
        exclusions: &SpiralSet<T>,
        n: usize,
    ) -> Vec<(u64, Complex<T>)> {
        let wide = exclusions.clone().with_guard(T::lit(self.margin));
        let mut out = Vec::with_capacity(n);
        let mut i = self.start;
        while out.len() < n {
            let x = self.raw::<T>(i);
            if (0..=self.shifts as i64).all(|k| wide.hit(qp, x * qp.powi(k)).is_none()) {
                out.push((i, x));
            }
            i += 1;
        }
        out
    }
}
