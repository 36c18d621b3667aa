//! One-dimensional adaptive quadrature.
//!
//! The engine pairs a Gauss–Kronrod 7/15 embedded rule (all nodes
//! interior, so endpoints are never sampled) with worst-error-first
//! global subdivision. Semi-infinite intervals `[lo, ∞)` are mapped to
//! `[0, 1)` by the rational substitution `x = t/(1−t)` before panel
//! integration.

mod adaptive;
mod gauss;
mod kronrod;

pub use adaptive::{integrate_1d, integrate_1d_opts, QuadOptions};
pub use gauss::{gauss_rule, GaussRule};
pub use kronrod::integrate_panel;

use crate::error::{Error, Result};

/// Default panel budget for a single 1-D integration.
pub const DEFAULT_MAX_PANELS: usize = 10_000;

/// An integration interval: finite `[lo, hi]` or semi-infinite `[lo, ∞)`.
///
/// The lower bound is always finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// A finite interval `[lo, hi]` with `lo < hi`, or `[lo, ∞)` when
    /// `hi` is `f64::INFINITY`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interval lower bound must be finite, got {lo}"
            )));
        }
        if hi.is_nan() || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidParameter(format!(
                "interval upper bound must be finite or +inf, got {hi}"
            )));
        }
        if hi.is_finite() && lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "interval requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// The semi-infinite interval `[lo, ∞)`.
    pub fn semi_infinite(lo: f64) -> Result<Self> {
        Self::new(lo, f64::INFINITY)
    }

    /// The unit interval `[0, 1]`.
    pub fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_semi_infinite(&self) -> bool {
        self.hi == f64::INFINITY
    }

    /// Length of a finite interval; `None` for a semi-infinite one.
    pub fn length(&self) -> Option<f64> {
        if self.is_semi_infinite() {
            None
        } else {
            Some(self.hi - self.lo)
        }
    }
}

/// Convergence target for an adaptive integration.
///
/// The driver subdivides until the accumulated error estimate drops
/// below `max(abs, rel · |value|)`. At least one of the two components
/// must be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    abs: f64,
    rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        if !abs.is_finite() || !rel.is_finite() || abs < 0.0 || rel < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be finite and non-negative, got abs={abs}, rel={rel}"
            )));
        }
        if abs == 0.0 && rel == 0.0 {
            return Err(Error::InvalidParameter(
                "abs and rel tolerance cannot both be zero".into(),
            ));
        }
        Ok(Self { abs, rel })
    }

    /// Purely absolute tolerance.
    pub fn absolute(abs: f64) -> Result<Self> {
        Self::new(abs, 0.0)
    }

    pub fn abs(&self) -> f64 {
        self.abs
    }

    pub fn rel(&self) -> f64 {
        self.rel
    }

    /// The error threshold for a result of the given magnitude.
    pub fn threshold(&self, value: f64) -> f64 {
        f64::max(self.abs, self.rel * value.abs())
    }

    /// Tolerance for an integral one nesting level further in: both
    /// components divided by 10, floored at 1e−14.
    pub(crate) fn inner(&self) -> Self {
        let floor = |t: f64| {
            if t == 0.0 {
                0.0
            } else {
                f64::max(t / 10.0, 1e-14)
            }
        };
        Self {
            abs: floor(self.abs),
            rel: floor(self.rel),
        }
    }
}

impl Default for Tolerance {
    /// The 1-D default: `abs = rel = 1e−12`.
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-12,
        }
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    /// Best estimate of the integral.
    pub value: f64,
    /// Accumulated error estimate (sum of per-panel estimates), ≥ 0.
    pub err_est: f64,
    /// Number of integrand evaluations.
    pub neval: u64,
    /// Number of panels at termination.
    pub n_panels: usize,
    /// True only if `err_est` met the requested tolerance.
    pub converged: bool,
}

/// Maps an integrand on `[0, ∞)` to one on `[0, 1)` via `x = t/(1−t)`.
///
/// The returned function is `t ↦ f(t/(1−t)) / (1−t)²`; it must only be
/// evaluated at `t < 1`, which the open panel rules guarantee.
pub fn transform_semi_infinite<F>(f: F) -> impl Fn(f64) -> f64
where
    F: Fn(f64) -> f64,
{
    move |t: f64| {
        let u = 1.0 - t;
        f(t / u) / (u * u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_validation() {
        assert!(Interval::new(0.0, 1.0).is_ok());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NEG_INFINITY, 1.0).is_err());
        assert!(Interval::new(0.0, f64::NAN).is_err());
        let iv = Interval::semi_infinite(0.0).unwrap();
        assert!(iv.is_semi_infinite());
        assert_eq!(iv.length(), None);
        assert_eq!(Interval::new(1.0, 3.0).unwrap().length(), Some(2.0));
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 0.0).is_err());
        assert!(Tolerance::new(-1.0, 0.0).is_err());
        assert!(Tolerance::new(f64::NAN, 0.0).is_err());
        let t = Tolerance::new(1e-6, 1e-3).unwrap();
        assert_eq!(t.threshold(2.0), 2e-3);
        assert_eq!(t.threshold(0.0), 1e-6);
    }

    #[test]
    fn inner_tolerance_floors() {
        let t = Tolerance::new(1e-7, 1e-13).unwrap();
        let i = t.inner();
        assert_eq!(i.abs(), 1e-8);
        assert_eq!(i.rel(), 1e-14);
        let deep = i.inner().inner().inner().inner().inner().inner().inner();
        assert_eq!(deep.rel(), 1e-14);
    }

    #[test]
    fn transform_fixes_origin() {
        let g = transform_semi_infinite(|x: f64| (-x).exp());
        assert_eq!(g(0.0), 1.0);
    }

    #[test]
    fn transform_midpoint_carries_jacobian() {
        // t = 0.5 maps to x = 1 with Jacobian 4.
        let g = transform_semi_infinite(|x: f64| (-x).exp());
        let expected = 4.0 / std::f64::consts::E;
        assert!((g(0.5) - expected).abs() < 1e-15);
        assert!((expected - 1.471_517_764_685_769_3).abs() < 1e-15);
    }
}
