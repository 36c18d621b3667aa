//! Numerical replay of the derivation linking the probability integral
//! to Ahmed's integral.
//!
//! The chain walks the identity
//! `(∫₀^∞ e^{−x²} dx)⁴ = π²/16` down to `A = 5π²/96` in six steps,
//! lowering the dimension one closed-form integration at a time:
//!
//! * `S0` — fourth power of the probability integral (0-D check).
//! * `S1` — the 4-D radial form of the fourth power.
//! * `S2` — the triple integral left after integrating out δ.
//! * `S3` — the two double integrals left after integrating out β.
//! * `S4` — the single integral left after integrating out γ, which is
//!   exactly the Ahmed integrand.
//! * `S5` — Ahmed's integral against `5π²/96`.
//!
//! Each closed-form partial integration is also exposed on its own
//! ([`profile_delta`], [`profile_beta`], [`profile_gamma`]) so a broken
//! step can be localized, and every step value is cross-checked against
//! its neighbours within the combined error estimates.

use std::f64::consts::PI;

use crate::cubature::{integrate_nd_opts, BoxDomain, IntegrandN, NdOptions};
use crate::error::{Error, Result};
use crate::quad1d::{integrate_1d_opts, Interval, QuadOptions, QuadResult, Tolerance};
use crate::reduction::integral_power;

/// `∫₀^∞ δ³ e^{−cδ²} dδ = 1/(2c²)` for `c > 0`.
pub fn profile_delta(c: f64) -> Result<f64> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "profile_delta requires c > 0, got {c}"
        )));
    }
    Ok(1.0 / (2.0 * c * c))
}

/// `∫₀¹ γ²β / (1 + γ² + γ²β²(1 + x²))² dβ` in closed form:
/// `(1/(2(1+x²))) · (1/(1+γ²) − 1/(1+γ²(2+x²)))`.
pub fn profile_beta(gamma: f64, x: f64) -> f64 {
    let g2 = gamma * gamma;
    let x2 = x * x;
    0.5 / (1.0 + x2) * (1.0 / (1.0 + g2) - 1.0 / (1.0 + g2 * (2.0 + x2)))
}

/// `∫₀¹ dγ / (1 + kγ²) = arctan(√k)/√k` for `k > 0`.
pub fn profile_gamma(k: f64) -> Result<f64> {
    if k.is_nan() || k <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "profile_gamma requires k > 0, got {k}"
        )));
    }
    let s = k.sqrt();
    Ok(s.atan() / s)
}

/// The Ahmed integrand `arctan(√(2+x²)) / ((1+x²)√(2+x²))`.
pub fn ahmed_integrand(x: f64) -> f64 {
    let s = (2.0 + x * x).sqrt();
    s.atan() / ((1.0 + x * x) * s)
}

/// Per-step residual tolerances, keyed by the step's dimension.
///
/// Nested-quadrature cost grows geometrically with dimension, so the
/// bounds relax accordingly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainTolerances {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

impl Default for ChainTolerances {
    fn default() -> Self {
        Self {
            d0: 1e-10,
            d1: 1e-10,
            d2: 1e-9,
            d3: 1e-7,
            d4: 1e-5,
        }
    }
}

impl ChainTolerances {
    fn for_dimension(&self, dim: u32) -> f64 {
        match dim {
            0 => self.d0,
            1 => self.d1,
            2 => self.d2,
            3 => self.d3,
            _ => self.d4,
        }
    }
}

/// Options for [`run_chain_opts`].
#[derive(Debug, Clone, Copy)]
pub struct ChainOptions {
    pub tols: ChainTolerances,
    /// Evaluate the heavy cubatures concurrently (and their outer panel
    /// nodes in parallel). The report is identical either way.
    pub parallel: bool,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            tols: ChainTolerances::default(),
            parallel: cfg!(feature = "parallel"),
        }
    }
}

/// A named secondary check attached to a step.
#[derive(Debug, Clone)]
pub struct SubCheck {
    pub name: &'static str,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

/// One verified derivation step.
#[derive(Debug, Clone)]
pub struct ChainStep {
    pub id: &'static str,
    pub description: &'static str,
    /// Dimension of the integral evaluated at this step.
    pub dimension: u32,
    /// Step value after its constant multiplier.
    pub computed: f64,
    /// Closed-form reference value.
    pub reference: f64,
    /// `|computed − reference|`.
    pub residual: f64,
    /// Residual tolerance applied to this step.
    pub tolerance: f64,
    /// Quadrature error estimate scaled by the step multiplier.
    pub err_est: f64,
    /// Integrand evaluations spent on this step.
    pub neval: u64,
    /// False marks the step inconclusive (a sub-integral hit its
    /// budget), which also fails the whole chain.
    pub converged: bool,
    /// The derivation identity this step verifies.
    pub anchor: &'static str,
    pub subchecks: Vec<SubCheck>,
    pub pass: bool,
}

/// Consistency check between two adjacent steps.
#[derive(Debug, Clone)]
pub struct PairCheck {
    pub ids: (&'static str, &'static str),
    /// What the two steps are expected to agree on.
    pub quantity: &'static str,
    pub diff: f64,
    pub bound: f64,
    pub pass: bool,
}

/// The full chain outcome in fixed `S0..S5` order.
#[derive(Debug, Clone)]
pub struct ChainReport {
    pub steps: Vec<ChainStep>,
    pub adjacent: Vec<PairCheck>,
    pub tolerances: ChainTolerances,
    pub all_pass: bool,
}

impl ChainReport {
    pub fn step(&self, id: &str) -> Option<&ChainStep> {
        self.steps.iter().find(|s| s.id == id)
    }
}

/// Slack added to adjacency bounds so agreement at machine precision is
/// never penalized for having error estimates of zero.
const PAIR_FLOOR: f64 = 1e-11;

/// Runs the full derivation chain with default per-step tolerances.
pub fn run_chain(tols: ChainTolerances) -> Result<ChainReport> {
    run_chain_opts(&ChainOptions {
        tols,
        ..ChainOptions::default()
    })
}

struct CubatureJob {
    integrand: IntegrandN,
    domain: BoxDomain,
    tol: Tolerance,
}

impl CubatureJob {
    fn run(&self, parallel: bool) -> Result<QuadResult> {
        let opts = NdOptions {
            parallel,
            ..NdOptions::default()
        };
        integrate_nd_opts(&self.integrand, &self.domain, self.tol, &opts)
    }
}

/// Runs the full derivation chain.
pub fn run_chain_opts(opts: &ChainOptions) -> Result<ChainReport> {
    let tols = opts.tols;
    let pi2_16 = PI * PI / 16.0;
    let ahmed_ref = 5.0 * PI * PI / 96.0;

    let tight = Tolerance::new(1e-13, 1e-13).expect("static tolerance");
    let quad_opts = QuadOptions::default();

    // --- 1-D legs (cheap, computed up front and shared) ---------------

    // Probability integral ∫₀^∞ e^{−x²} dx.
    let prob = integrate_1d_opts(
        &|x: f64| (-x * x).exp(),
        Interval::semi_infinite(0.0)?,
        tight,
        &quad_opts,
    )?;

    // Ahmed's integral, evaluated directly.
    let ahmed = integrate_1d_opts(&ahmed_integrand, Interval::unit(), tight, &quad_opts)?;

    // The γ-profile route to the same value: ∫₀¹ profile_gamma(2+x²)/(1+x²) dx.
    let gamma_route = integrate_1d_opts(
        &|x: f64| {
            let k = 2.0 + x * x;
            profile_gamma(k).expect("k >= 2") / (1.0 + x * x)
        },
        Interval::unit(),
        tight,
        &quad_opts,
    )?;

    // --- multidimensional legs ----------------------------------------

    let unit3 = BoxDomain::unit_cube(3)?;
    let unit2 = BoxDomain::unit_cube(2)?;
    let dom4 = BoxDomain::new(vec![
        Interval::unit(),
        Interval::unit(),
        Interval::unit(),
        Interval::semi_infinite(0.0)?,
    ])?;

    let jobs = [
        // 0: the 4-D Gaussian radial form, point = (x, β, γ, δ).
        CubatureJob {
            integrand: IntegrandN::new(4, |p: &[f64]| {
                let (x, b, g, d) = (p[0], p[1], p[2], p[3]);
                let c = 1.0 + g * g + g * g * b * b + g * g * b * b * x * x;
                d.powi(3) * g * g * b * (-d * d * c).exp()
            }),
            domain: dom4,
            tol: Tolerance::new(1e-7, 1e-7)?,
        },
        // 1: the rational triple left after the δ integration.
        CubatureJob {
            integrand: IntegrandN::new(3, |p: &[f64]| {
                let (x, b, g) = (p[0], p[1], p[2]);
                let c = 1.0 + g * g + g * g * b * b + g * g * b * b * x * x;
                g * g * b / (c * c)
            }),
            domain: unit3.clone(),
            tol: Tolerance::new(1e-9, 1e-9)?,
        },
        // 2: the same triple with the δ integration done through
        //    profile_delta, to pin that closed-form step in isolation.
        CubatureJob {
            integrand: IntegrandN::new(3, |p: &[f64]| {
                let (x, b, g) = (p[0], p[1], p[2]);
                let c = 1.0 + g * g + g * g * b * b + g * g * b * b * x * x;
                g * g * b * profile_delta(c).expect("c >= 1")
            }),
            domain: unit3,
            tol: Tolerance::new(1e-9, 1e-9)?,
        },
        // 3: first double integral, separable arctan factors.
        CubatureJob {
            integrand: IntegrandN::new(2, |p: &[f64]| {
                1.0 / ((1.0 + p[0] * p[0]) * (1.0 + p[1] * p[1]))
            }),
            domain: unit2.clone(),
            tol: Tolerance::new(1e-11, 1e-11)?,
        },
        // 4: second double integral, the 2-D form of Ahmed's integral.
        CubatureJob {
            integrand: IntegrandN::new(2, |p: &[f64]| {
                let (x, g) = (p[0], p[1]);
                1.0 / ((1.0 + x * x) * (1.0 + g * g * (2.0 + x * x)))
            }),
            domain: unit2,
            tol: Tolerance::new(1e-11, 1e-11)?,
        },
    ];

    let results: Vec<Result<QuadResult>> = run_jobs(&jobs, opts.parallel);
    let mut it = results.into_iter();
    let quad4 = it.next().unwrap()?;
    let triple_rational = it.next().unwrap()?;
    let triple_profiled = it.next().unwrap()?;
    let double_arctan = it.next().unwrap()?;
    let double_ahmed = it.next().unwrap()?;

    // --- assemble steps ------------------------------------------------

    let mut steps = Vec::with_capacity(6);

    // S0: (∫₀^∞ e^{−x²} dx)⁴ against π²/16.
    let fourth = integral_power(&prob, 4);
    steps.push(make_step(
        "S0",
        "fourth power of the probability integral",
        0,
        fourth.value,
        pi2_16,
        fourth.err_est,
        fourth.neval,
        fourth.converged,
        "(∫₀^∞ e^{−x²} dx)⁴ = π²/16",
        Vec::new(),
        &tols,
    ));

    // S1: 24 × the 4-D radial form.
    steps.push(make_step(
        "S1",
        "four-dimensional radial form of the fourth power",
        4,
        24.0 * quad4.value,
        pi2_16,
        24.0 * quad4.err_est,
        quad4.neval,
        quad4.converged,
        "π²/16 = 24 ∫₀¹∫₀¹∫₀¹∫₀^∞ δ³γ²β e^{−δ²(1+γ²+γ²β²+γ²β²x²)} dδ dγ dβ dx",
        Vec::new(),
        &tols,
    ));

    // S2: 12 × the rational triple, cross-checked against the
    // profile_delta route (which carries a factor 24, not 12, because
    // the closed form halves the integrand).
    let profiled_value = 24.0 * triple_profiled.value;
    let sub_delta = SubCheck {
        name: "delta_profile_route",
        residual: (profiled_value - pi2_16).abs(),
        bound: tols.d3,
        pass: (profiled_value - pi2_16).abs() <= tols.d3 && triple_profiled.converged,
    };
    steps.push(make_step(
        "S2",
        "triple integral after closed-form δ integration",
        3,
        12.0 * triple_rational.value,
        pi2_16,
        12.0 * triple_rational.err_est,
        triple_rational.neval + triple_profiled.neval,
        triple_rational.converged && triple_profiled.converged,
        "π²/16 = 12 ∫₀¹∫₀¹∫₀¹ γ²β/(1+γ²+γ²β²+γ²β²x²)² dγ dβ dx",
        vec![sub_delta],
        &tols,
    ));

    // S3: 6·(I₁ − I₂) with I₁ checked against (arctan 1)² on its own.
    let s3_value = 6.0 * (double_arctan.value - double_ahmed.value);
    let sub_i1 = SubCheck {
        name: "arctan_square",
        residual: (double_arctan.value - pi2_16).abs(),
        bound: 1e-10,
        pass: (double_arctan.value - pi2_16).abs() <= 1e-10 && double_arctan.converged,
    };
    steps.push(make_step(
        "S3",
        "split into two double integrals after closed-form β integration",
        2,
        s3_value,
        pi2_16,
        6.0 * (double_arctan.err_est + double_ahmed.err_est),
        double_arctan.neval + double_ahmed.neval,
        double_arctan.converged && double_ahmed.converged,
        "π²/16 = 6 ∬ dx dγ/((1+γ²)(1+x²)) − 6 ∬ dx dγ/((1+x²)(1+γ²(2+x²))); ∬ dx dγ/((1+γ²)(1+x²)) = (arctan 1)²",
        vec![sub_i1],
        &tols,
    ));

    // S4: the γ-profile route to I₂, which must also coincide with the
    // direct Ahmed quadrature.
    let cross = (gamma_route.value - ahmed.value).abs();
    let cross_bound = gamma_route.err_est + ahmed.err_est + PAIR_FLOOR;
    let sub_cross = SubCheck {
        name: "ahmed_cross",
        residual: cross,
        bound: cross_bound,
        pass: cross <= cross_bound,
    };
    steps.push(make_step(
        "S4",
        "closed-form γ integration yields the Ahmed integrand",
        1,
        gamma_route.value,
        ahmed_ref,
        gamma_route.err_est,
        gamma_route.neval,
        gamma_route.converged,
        "∫₀¹ dγ/(1+(2+x²)γ²) = arctan(√(2+x²))/√(2+x²)",
        vec![sub_cross],
        &tols,
    ));

    // S5: Ahmed's integral against 5π²/96.
    steps.push(make_step(
        "S5",
        "Ahmed's integral against its closed form",
        1,
        ahmed.value,
        ahmed_ref,
        ahmed.err_est,
        ahmed.neval,
        ahmed.converged,
        "A = ∫₀¹ arctan(√(2+x²))/((1+x²)√(2+x²)) dx = 5π²/96",
        Vec::new(),
        &tols,
    ));

    // --- adjacency: neighbouring steps must estimate the same number ---

    let mut adjacent = Vec::new();
    for k in 0..3 {
        adjacent.push(pair(
            &steps[k],
            &steps[k + 1],
            "π²/16 estimate",
            steps[k].computed,
            steps[k + 1].computed,
            steps[k].err_est + steps[k + 1].err_est,
        ));
    }
    // S3 ↔ S4 agree on I₂ (= A), not on π²/16.
    adjacent.push(pair(
        &steps[3],
        &steps[4],
        "I₂ estimate",
        double_ahmed.value,
        gamma_route.value,
        double_ahmed.err_est + gamma_route.err_est,
    ));
    adjacent.push(pair(
        &steps[4],
        &steps[5],
        "Ahmed estimate",
        gamma_route.value,
        ahmed.value,
        gamma_route.err_est + ahmed.err_est,
    ));

    let all_pass = steps.iter().all(|s| s.pass) && adjacent.iter().all(|p| p.pass);
    Ok(ChainReport {
        steps,
        adjacent,
        tolerances: tols,
        all_pass,
    })
}

fn run_jobs(jobs: &[CubatureJob], parallel: bool) -> Vec<Result<QuadResult>> {
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return jobs.par_iter().map(|j| j.run(true)).collect();
    }
    jobs.iter().map(|j| j.run(parallel)).collect()
}

#[allow(clippy::too_many_arguments)]
fn make_step(
    id: &'static str,
    description: &'static str,
    dimension: u32,
    computed: f64,
    reference: f64,
    err_est: f64,
    neval: u64,
    converged: bool,
    anchor: &'static str,
    subchecks: Vec<SubCheck>,
    tols: &ChainTolerances,
) -> ChainStep {
    let residual = (computed - reference).abs();
    let tolerance = tols.for_dimension(dimension);
    let pass = converged && residual <= tolerance && subchecks.iter().all(|s| s.pass);
    ChainStep {
        id,
        description,
        dimension,
        computed,
        reference,
        residual,
        tolerance,
        err_est,
        neval,
        converged,
        anchor,
        subchecks,
        pass,
    }
}

fn pair(
    a: &ChainStep,
    b: &ChainStep,
    quantity: &'static str,
    va: f64,
    vb: f64,
    err: f64,
) -> PairCheck {
    let diff = (va - vb).abs();
    let bound = err + PAIR_FLOOR;
    PairCheck {
        ids: (a.id, b.id),
        quantity,
        diff,
        bound,
        pass: diff <= bound,
    }
}
