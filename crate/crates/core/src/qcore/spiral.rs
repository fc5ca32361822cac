use num_complex::Complex;

use super::QParam;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A q-spiral `[λ;q] = λ q^Z` with a display label such as `"[1;q]"`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spiral<T> {
    pub anchor: Complex<T>,
    pub label: String,
}

/// Finite union of q-spirals used as exclusion zones. A point is rejected
/// when its relative distance to one of the spirals is below `guard`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpiralSet<T> {
    spirals: Vec<Spiral<T>>,
    guard: T,
}

impl<T: Real> SpiralSet<T> {
    pub fn new(guard: T) -> Self {
        SpiralSet {
            spirals: Vec::new(),
            guard,
        }
    }

    /// Adds `[anchor;q]`. Zero anchors are ignored (they are not spirals).
    pub fn with(mut self, anchor: Complex<T>, label: impl Into<String>) -> Self {
        self.push(anchor, label);
        self
    }

    pub fn push(&mut self, anchor: Complex<T>, label: impl Into<String>) {
        if anchor.norm() > T::zero() && anchor.norm().is_finite() {
            self.spirals.push(Spiral {
                anchor,
                label: label.into(),
            });
        }
    }

    /// The same spirals with a different relative guard distance.
    pub fn with_guard(mut self, guard: T) -> Self {
        self.guard = guard;
        self
    }

    pub fn guard(&self) -> T {
        self.guard
    }

    pub fn spirals(&self) -> &[Spiral<T>] {
        &self.spirals
    }

    /// The first spiral within guard distance of `x`, if any.
    pub fn hit(&self, qp: &QParam<T>, x: Complex<T>) -> Option<&Spiral<T>> {
        self.spirals
            .iter()
            .find(|s| near_spiral(qp, s.anchor, x, self.guard))
    }

    /// `Err(Error::Spiral)` naming the spiral when `x` is too close to one.
    pub fn check(&self, qp: &QParam<T>, x: Complex<T>) -> Result<()> {
        if x.norm() == T::zero() {
            return Err(Error::Domain("x = 0 is not in C*".into()));
        }
        match self.hit(qp, x) {
            Some(s) => Err(Error::spiral(s.label.clone(), x)),
            None => Ok(()),
        }
    }
}

/// `min_k |x - λ q^k| / |x| < guard`, with `k` restricted to the window
/// where `|λ q^k|` is comparable to `|x|`.
pub(crate) fn near_spiral<T: Real>(
    qp: &QParam<T>,
    anchor: Complex<T>,
    x: Complex<T>,
    guard: T,
) -> bool {
    let xn = x.norm();
    if xn == T::zero() {
        return false;
    }
    let k0 = ((xn / anchor.norm()).ln() / qp.abs_q().ln()).round();
    let Some(k0) = k0.to_i64() else {
        return false;
    };
    (k0 - 1..=k0 + 1).any(|k| (x - anchor * qp.powi(k)).norm() < guard * xn)
}

/// Membership test used by the verification code: true iff `x` is within
/// `s.guard()` of one of the spirals in `s`.
pub fn spiral_guard<T: Real>(s: &SpiralSet<T>, qp: &QParam<T>, x: Complex<T>) -> bool {
    s.hit(qp, x).is_some()
}

/// The `k ≥ 0` with `b q^k` within `guard` of 1, i.e. `b ∈ q^{-Z≥0}`.
pub fn in_negative_power_spiral<T: Real>(qp: &QParam<T>, b: Complex<T>, guard: T) -> Option<usize> {
    let one = Complex::new(T::one(), T::zero());
    let q = qp.q();
    let half = T::lit(0.5);
    let mut t = b;
    let mut k = 0usize;
    while t.norm() >= half && k <= qp.max_terms() {
        if (one - t).norm() < guard {
            return Some(k);
        }
        t = t * q;
        k += 1;
    }
    None
}
