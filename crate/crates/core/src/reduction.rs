//! Integrand transformers that rewrite multiple integrals over
//! hypercubes as lower-complexity integrals with a radial weight, plus
//! the power-of-an-integral construction and a numerical identity
//! checker.
//!
//! Three constructions are provided:
//!
//! * [`reduce_f1`] — rewrites `∫₀^α ∫₀^α f(x, y) dx dy` as
//!   `∫₀¹ ∫₀^α β · (f(β, βu) + f(βu, β)) dβ du`.
//! * [`reduce_f2`] — the n-variable generalization: the integrand
//!   becomes `β^{n−1} Σ_p Φ_p`, where `Φ_p` places the radial variable
//!   `β` in slot `p` of `f` and fills the remaining slots, in ascending
//!   order, with `βu₁, …, βu_{n−1}`.
//! * [`power_integrand`] — expresses `(∫₀^α g)ⁿ` as `n!` times the
//!   n-dimensional integral of
//!   `Π_j t_j^{n−j} · Π_k g(t₁t₂⋯t_k)` over `[0,1]^{n−1} × (0, α)`,
//!   where `t₁` is the radial variable and `t₂, …, t_n` live on the
//!   unit cube. For n = 3 and 4 this reproduces the classical cube and
//!   fourth-power displays; the general pattern is validated against
//!   brute-force cubature in the test suites.
//!
//! Every construction keeps its exact integer multiplier (1 or n!)
//! separate from the floating-point inner integrand, so the factor
//! never amplifies roundoff inside the quadrature.

use crate::cubature::{integrate_nd_opts, BoxDomain, IntegrandN, NdOptions};
use crate::error::{Error, Result};
use crate::quad1d::{Interval, QuadResult, Tolerance};

/// Largest supported `n`: 18! is the last factorial exactly
/// representable in both `u64` arithmetic and an `f64` mantissa.
pub const MAX_N: usize = 18;

fn factorial(n: usize) -> u64 {
    (2..=n as u64).product()
}

fn check_alpha(alpha: f64, allow_infinite: bool) -> Result<()> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if alpha == f64::INFINITY && !allow_infinite {
        return Err(Error::InvalidParameter(
            "alpha = inf is only supported by the power construction".into(),
        ));
    }
    Ok(())
}

fn radial_box(n: usize, alpha: f64) -> Result<BoxDomain> {
    let mut dims = vec![Interval::unit(); n - 1];
    dims.push(if alpha == f64::INFINITY {
        Interval::semi_infinite(0.0)?
    } else {
        Interval::new(0.0, alpha)?
    });
    BoxDomain::new(dims)
}

/// An integrand produced by one of the reduction constructions.
///
/// Coordinates are the `n−1` unit-cube variables followed by the radial
/// variable on `(0, α)`; the exact constant multiplier is carried
/// separately from the floating-point inner function.
#[derive(Debug)]
pub struct ReducedIntegrand {
    inner: IntegrandN,
    multiplier: u64,
    domain: BoxDomain,
}

impl ReducedIntegrand {
    pub fn arity(&self) -> usize {
        self.inner.arity()
    }

    /// The exact constant factor (1 for the F1/F2 rewrites, n! for the
    /// power construction).
    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    /// The multiplier as an exactly-representable double.
    pub fn multiplier_f64(&self) -> f64 {
        self.multiplier as f64
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    /// Evaluates the inner integrand (without the multiplier).
    pub fn eval_inner(&self, point: &[f64]) -> f64 {
        self.inner.eval(point)
    }

    /// Integrates the inner integrand over its domain; the returned
    /// value is *not* scaled by the multiplier.
    pub fn integrate(&self, tol: Tolerance) -> Result<QuadResult> {
        self.integrate_opts(tol, &NdOptions::default())
    }

    pub fn integrate_opts(&self, tol: Tolerance, opts: &NdOptions) -> Result<QuadResult> {
        integrate_nd_opts(&self.inner, &self.domain, tol, opts)
    }
}

/// Rewrites the double integral of `f` over `(0, α)²`.
///
/// The returned integrand is `(u, β) ↦ β · (f(β, βu) + f(βu, β))` on
/// `[0, 1] × (0, α)` with multiplier 1; its integral equals
/// `∫₀^α ∫₀^α f`.
pub fn reduce_f1(f: IntegrandN, alpha: f64) -> Result<ReducedIntegrand> {
    if f.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: f.arity(),
        });
    }
    check_alpha(alpha, false)?;
    let inner = IntegrandN::new(2, move |p: &[f64]| {
        let (u, beta) = (p[0], p[1]);
        beta * (f.eval(&[beta, beta * u]) + f.eval(&[beta * u, beta]))
    });
    Ok(ReducedIntegrand {
        inner,
        multiplier: 1,
        domain: radial_box(2, alpha)?,
    })
}

/// Rewrites the n-fold integral of `f` over `(0, α)ⁿ`.
///
/// The returned integrand on `[0,1]^{n−1} × (0, α)` is
/// `β^{n−1} Σ_{p=1..n} Φ_p` with slot `p` of `Φ_p` set to `β` and the
/// remaining slots filled in ascending order with `βu₁, …, βu_{n−1}`.
/// For n = 2 this coincides with [`reduce_f1`] pointwise.
pub fn reduce_f2(f: IntegrandN, n: usize, alpha: f64) -> Result<ReducedIntegrand> {
    if !(2..=MAX_N).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "reduction order n must be in 2..={MAX_N}, got {n}"
        )));
    }
    if f.arity() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: f.arity(),
        });
    }
    check_alpha(alpha, false)?;
    let inner = IntegrandN::new(n, move |p: &[f64]| {
        let beta = p[n - 1];
        let units = &p[..n - 1];
        let weight = beta.powi((n - 1) as i32);
        let mut args = [0.0f64; MAX_N];
        let mut sum = 0.0;
        for slot in 0..n {
            let mut next_unit = 0;
            for (j, arg) in args[..n].iter_mut().enumerate() {
                if j == slot {
                    *arg = beta;
                } else {
                    *arg = beta * units[next_unit];
                    next_unit += 1;
                }
            }
            sum += f.eval(&args[..n]);
        }
        weight * sum
    });
    Ok(ReducedIntegrand {
        inner,
        multiplier: 1,
        domain: radial_box(n, alpha)?,
    })
}

/// Specification of a power-of-an-integral identity
/// `(∫₀^α g)ⁿ = n! · ∫ …`.
pub struct PowerSpec {
    g: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    n: usize,
    alpha: f64,
}

impl PowerSpec {
    /// `n ≥ 2`; `alpha` positive, possibly `f64::INFINITY` (in which
    /// case `g` must have an integrable tail).
    pub fn new<G>(g: G, n: usize, alpha: f64) -> Result<Self>
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "power exponent n must be in 2..={MAX_N}, got {n}"
            )));
        }
        check_alpha(alpha, true)?;
        Ok(Self {
            g: Box::new(g),
            n,
            alpha,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Builds the n-dimensional integrand whose integral, times `n!`,
/// equals `(∫₀^α g)ⁿ`.
///
/// With the radial variable `t₁ ∈ (0, α)` and unit variables
/// `t₂, …, t_n`, the inner integrand is
/// `Π_{j=1..n} t_j^{n−j} · Π_{k=1..n} g(t₁t₂⋯t_k)`.
/// In the returned coordinates the unit variables come first
/// (`point = (t₂, …, t_n, t₁)`), matching [`ReducedIntegrand`]'s
/// radial-last convention.
pub fn power_integrand(spec: PowerSpec) -> Result<ReducedIntegrand> {
    let PowerSpec { g, n, alpha } = spec;
    let domain = radial_box(n, alpha)?;
    let inner = IntegrandN::new(n, move |p: &[f64]| {
        let t1 = p[n - 1];
        let mut weight = t1.powi((n - 1) as i32);
        for j in 2..=n {
            weight *= p[j - 2].powi((n - j) as i32);
        }
        let mut prefix = t1;
        let mut prod = g(prefix);
        for j in 2..=n {
            prefix *= p[j - 2];
            prod *= g(prefix);
        }
        weight * prod
    });
    Ok(ReducedIntegrand {
        inner,
        multiplier: factorial(n),
        domain,
    })
}

/// Verdict of an identity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Residual within tolerance plus the combined error estimates.
    Pass,
    /// Residual too large despite converged quadratures.
    Fail,
    /// One of the sides failed to converge; no judgement.
    Inconclusive,
}

/// Outcome of [`verify_identity`].
#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    /// Value of the directly-computed side.
    pub direct_value: f64,
    /// Inner integral of the reduced side, before the multiplier.
    pub reduced_raw: f64,
    /// Multiplier × raw value: the reduced side in full.
    pub reduced_value: f64,
    /// `|direct − reduced_value|`.
    pub residual: f64,
    /// Direct error estimate plus the scaled reduced estimate.
    pub combined_err: f64,
    pub verdict: Verdict,
    pub neval_direct: u64,
    pub neval_reduced: u64,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Checks a reduction identity numerically.
///
/// `direct` is the caller's evaluation of the plain side; the reduced
/// side is integrated here at the given tolerance. The check passes
/// when the residual is at most `tol.threshold(direct) + combined
/// error estimates`; a non-converged side yields
/// [`Verdict::Inconclusive`] rather than a failure.
pub fn verify_identity(
    direct: &QuadResult,
    reduced: &ReducedIntegrand,
    tol: Tolerance,
) -> Result<IdentityReport> {
    verify_identity_opts(direct, reduced, tol, &NdOptions::default())
}

pub fn verify_identity_opts(
    direct: &QuadResult,
    reduced: &ReducedIntegrand,
    tol: Tolerance,
    opts: &NdOptions,
) -> Result<IdentityReport> {
    let raw = reduced.integrate_opts(tol, opts)?;
    let m = reduced.multiplier_f64();
    let reduced_value = m * raw.value;
    let residual = (direct.value - reduced_value).abs();
    let combined_err = direct.err_est + m * raw.err_est;
    let verdict = if !direct.converged || !raw.converged {
        Verdict::Inconclusive
    } else if residual <= tol.threshold(direct.value) + combined_err {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(IdentityReport {
        direct_value: direct.value,
        reduced_raw: raw.value,
        reduced_value,
        residual,
        combined_err,
        verdict,
        neval_direct: direct.neval,
        neval_reduced: raw.neval,
    })
}

/// Raises a quadrature result to an integer power with a rigorous
/// first-order error bound `(|v| + e)ⁿ − |v|ⁿ`.
pub fn integral_power(q: &QuadResult, n: u32) -> QuadResult {
    let v = q.value;
    let e = q.err_est;
    QuadResult {
        value: v.powi(n as i32),
        err_est: (v.abs() + e).powi(n as i32) - v.abs().powi(n as i32),
        neval: q.neval,
        n_panels: q.n_panels,
        converged: q.converged,
    }
}
