//! Adaptive numerical quadrature with a focus on verifying integral
//! identities against their closed forms.
//!
//! The crate is organized in layers:
//!
//! * [`quad1d`] — one-dimensional adaptive Gauss–Kronrod quadrature over
//!   finite and semi-infinite intervals, plus Gauss–Legendre rule
//!   generation.
//! * [`cubature`] — multidimensional integration over boxes by nested
//!   adaptive 1-D quadrature (dimensions up to 6).
//! * [`reduction`] — integrand transformers that rewrite a multiple
//!   integral over a hypercube as an integral with a radial weight, and
//!   the power-of-an-integral construction expressing `(∫₀^α g)ⁿ` as
//!   `n!` times an n-dimensional integral.
//! * [`chain`] — a step-by-step numerical replay of the derivation
//!   linking the probability integral `∫₀^∞ e^{−x²} dx = √π/2` to
//!   Ahmed's integral `A = 5π²/96`, every step checked against its
//!   closed form.
//! * [`expr`] — a small arithmetic-expression parser so callers can
//!   supply custom integrands `g(x)` as text.
//!
//! All engines are deterministic: identical inputs produce bit-identical
//! results, with or without the `parallel` feature. Parallel evaluation
//! (rayon) only changes *when* integrand values are computed, never the
//! order in which they are combined.

pub mod chain;
pub mod cubature;
pub mod expr;
pub mod quad1d;
pub mod reduction;

mod error;
mod kahan;

pub use error::{Error, Result};
pub use quad1d::{Interval, QuadResult, Tolerance};
