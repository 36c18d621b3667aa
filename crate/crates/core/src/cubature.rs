//! Multidimensional integration over boxes by nested adaptive 1-D
//! quadrature.
//!
//! The outermost axis is integrated adaptively; each node evaluation
//! triggers a full integration of the remaining axes with a tolerance
//! tightened by a factor of 10 per level (floored at 1e−14). A
//! semi-infinite axis, when present, is rotated outermost so the
//! rational transform is confined to a single level.
//!
//! With the `parallel` feature the outermost panel nodes are evaluated
//! through rayon — each node owns an entire inner integral, so the work
//! per task is large — while all summations keep their fixed order, so
//! parallel and sequential runs agree bit for bit.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::quad1d::{integrate_1d_opts, Interval, QuadOptions, QuadResult, Tolerance};

/// Highest dimension the nested driver accepts.
pub const MAX_DIM: usize = 6;

/// An axis-aligned integration domain: the product of per-axis
/// intervals. At most one axis may be semi-infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    dims: Vec<Interval>,
}

impl BoxDomain {
    pub fn new(dims: Vec<Interval>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidParameter(
                "box must have at least one axis".into(),
            ));
        }
        let n_inf = dims.iter().filter(|iv| iv.is_semi_infinite()).count();
        if n_inf > 1 {
            return Err(Error::InvalidParameter(format!(
                "at most one semi-infinite axis is supported, got {n_inf}"
            )));
        }
        Ok(Self { dims })
    }

    /// `[0, 1]^d`.
    pub fn unit_cube(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter(
                "box must have at least one axis".into(),
            ));
        }
        Ok(Self {
            dims: vec![Interval::unit(); d],
        })
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn axes(&self) -> &[Interval] {
        &self.dims
    }

    fn semi_infinite_axis(&self) -> Option<usize> {
        self.dims.iter().position(Interval::is_semi_infinite)
    }
}

type DynNdFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A real-valued function of `d` real variables.
///
/// The evaluation closure must be deterministic and side-effect free;
/// the drivers may call it from multiple threads and rely on repeated
/// calls producing identical values.
pub struct IntegrandN {
    arity: usize,
    f: DynNdFn,
}

impl IntegrandN {
    pub fn new<F>(arity: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        assert!(arity >= 1, "integrand arity must be at least 1");
        Self {
            arity,
            f: Box::new(f),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.arity);
        (self.f)(point)
    }
}

impl std::fmt::Debug for IntegrandN {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntegrandN").field("arity", &self.arity).finish()
    }
}

/// The product integrand `(x₁, …, x_d) ↦ Π g(xᵢ)`.
pub fn product_integrand<G>(g: G, d: usize) -> IntegrandN
where
    G: Fn(f64) -> f64 + Send + Sync + 'static,
{
    IntegrandN::new(d, move |p| p.iter().map(|&x| g(x)).product())
}

/// Options for a nested integration.
#[derive(Debug, Clone, Copy)]
pub struct NdOptions {
    /// Panel budget for every 1-D integration in the nest.
    pub max_panels: usize,
    /// Evaluate outermost panel nodes in parallel. Defaults to the
    /// crate feature; results are identical either way.
    pub parallel: bool,
}

impl Default for NdOptions {
    fn default() -> Self {
        Self {
            max_panels: crate::quad1d::DEFAULT_MAX_PANELS,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

/// Integrates `f` over `dom` with default options.
///
/// `neval` in the result counts true integrand evaluations across all
/// nesting levels; `converged` is true only if every inner integral
/// converged as well as the outer one.
pub fn integrate_nd(f: &IntegrandN, dom: &BoxDomain, tol: Tolerance) -> Result<QuadResult> {
    integrate_nd_opts(f, dom, tol, &NdOptions::default())
}

/// [`integrate_nd`] with explicit options.
pub fn integrate_nd_opts(
    f: &IntegrandN,
    dom: &BoxDomain,
    tol: Tolerance,
    opts: &NdOptions,
) -> Result<QuadResult> {
    let d = dom.dim();
    if d > MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} exceeds the supported maximum {MAX_DIM}"
        )));
    }
    if f.arity() != d {
        return Err(Error::ArityMismatch {
            expected: d,
            got: f.arity(),
        });
    }

    // Rotate a semi-infinite axis (if any) into the outermost slot.
    let mut dims = dom.dims.clone();
    let swap = match dom.semi_infinite_axis() {
        Some(i) if i != d - 1 => {
            dims.swap(i, d - 1);
            Some((i, d - 1))
        }
        _ => None,
    };

    // Per-level tolerances, outermost (level d−1) first in spirit:
    // tols[k] guards the integral over axis k.
    let mut tols = vec![tol; d];
    for k in (0..d - 1).rev() {
        tols[k] = tols[k + 1].inner();
    }

    let ctx = NestCtx {
        f,
        dims: &dims,
        tols: &tols,
        swap,
        d,
        max_panels: opts.max_panels,
        parallel: opts.parallel,
        neval: AtomicU64::new(0),
        inner_converged: AtomicBool::new(true),
        poison: Mutex::new(None),
    };

    let outer = ctx.integrate_level(d - 1, [0.0; MAX_DIM]);
    if let Some(err) = ctx.poison.into_inner().unwrap() {
        return Err(err);
    }
    let outer = outer?;
    let neval = if d == 1 {
        outer.neval
    } else {
        ctx.neval.into_inner()
    };

    // Bias bound contributed by truncating inner integrals at their
    // absolute tolerances, accumulated through the (finite or
    // transformed) outer lengths, which are all bounded by len().
    let mut bias = 0.0;
    let mut scale = 1.0;
    for k in (0..d - 1).rev() {
        scale *= dims[k + 1].length().unwrap_or(1.0);
        bias += tols[k].abs() * scale;
    }

    Ok(QuadResult {
        value: outer.value,
        err_est: outer.err_est + bias,
        neval,
        n_panels: outer.n_panels,
        converged: outer.converged && ctx.inner_converged.into_inner(),
    })
}

struct NestCtx<'a> {
    f: &'a IntegrandN,
    dims: &'a [Interval],
    tols: &'a [Tolerance],
    swap: Option<(usize, usize)>,
    d: usize,
    max_panels: usize,
    parallel: bool,
    neval: AtomicU64,
    inner_converged: AtomicBool,
    poison: Mutex<Option<Error>>,
}

impl NestCtx<'_> {
    /// Integrates axes `0..=level` with coordinates above `level`
    /// already fixed.
    fn integrate_level(&self, level: usize, fixed: [f64; MAX_DIM]) -> Result<QuadResult> {
        let opts = QuadOptions {
            max_panels: self.max_panels,
            // Only the outermost level fans out: each of its node
            // evaluations is an entire (d−1)-dimensional integral.
            parallel: self.parallel && level == self.d - 1 && self.d > 1,
        };
        let g = |x: f64| -> f64 {
            let mut point = fixed;
            point[level] = x;
            if level == 0 {
                self.eval_point(&point)
            } else {
                match self.integrate_level(level - 1, point) {
                    Ok(r) => {
                        // The innermost driver already counted its own
                        // integrand calls; fold them in per integral
                        // rather than per evaluation so threads do not
                        // contend on the counter.
                        if level == 1 {
                            self.neval.fetch_add(r.neval, Ordering::Relaxed);
                        }
                        if !r.converged {
                            self.inner_converged.store(false, Ordering::Relaxed);
                        }
                        r.value
                    }
                    Err(e) => {
                        let mut slot = self.poison.lock().unwrap();
                        slot.get_or_insert(e);
                        f64::NAN
                    }
                }
            }
        };
        integrate_1d_opts(&g, self.dims[level], self.tols[level], &opts)
    }

    fn eval_point(&self, point: &[f64; MAX_DIM]) -> f64 {
        let mut p = *point;
        if let Some((i, j)) = self.swap {
            p.swap(i, j);
        }
        self.f.eval(&p[..self.d])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad1d::{integrate_1d, transform_semi_infinite};
    use std::f64::consts::PI;

    fn unit_box(d: usize) -> BoxDomain {
        BoxDomain::unit_cube(d).unwrap()
    }

    fn tol(abs: f64) -> Tolerance {
        Tolerance::new(abs, abs).unwrap()
    }

    #[test]
    fn box_rejects_two_infinite_axes() {
        let iv = Interval::semi_infinite(0.0).unwrap();
        assert!(BoxDomain::new(vec![iv, iv]).is_err());
        assert!(BoxDomain::new(vec![]).is_err());
        assert!(BoxDomain::new(vec![iv, Interval::unit()]).is_ok());
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let f = IntegrandN::new(3, |p: &[f64]| p.iter().sum());
        let r = integrate_nd(&f, &unit_box(2), Tolerance::default());
        assert!(matches!(r, Err(Error::ArityMismatch { expected: 2, got: 3 })));
    }

    #[test]
    fn one_dimensional_box_degenerates_to_quad1d() {
        let f = IntegrandN::new(1, |p: &[f64]| p[0].exp());
        let nd = integrate_nd(&f, &unit_box(1), Tolerance::default()).unwrap();
        let direct = integrate_1d(|x: f64| x.exp(), Interval::unit(), Tolerance::default()).unwrap();
        assert_eq!(nd.value.to_bits(), direct.value.to_bits());
        assert_eq!(nd.neval, direct.neval);
    }

    #[test]
    fn constant_over_unit_square() {
        let f = IntegrandN::new(2, |_: &[f64]| 1.0);
        let r = integrate_nd(&f, &unit_box(2), Tolerance::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
        assert!(r.converged);
        assert!(r.neval >= 225);
    }

    #[test]
    fn arctan_square_over_unit_square() {
        let f = IntegrandN::new(2, |p: &[f64]| {
            1.0 / ((1.0 + p[0] * p[0]) * (1.0 + p[1] * p[1]))
        });
        let r = integrate_nd(&f, &unit_box(2), tol(1e-12)).unwrap();
        let exact = PI * PI / 16.0;
        assert!((exact - 0.616_850_275_068_084_9).abs() < 1e-15);
        assert!((r.value - exact).abs() < 1e-10, "value {}", r.value);
        assert!(r.converged);
    }

    /// Rational triple integrand shared by the identity chain.
    fn triple(p: &[f64]) -> f64 {
        let (x, b, g) = (p[0], p[1], p[2]);
        let c = 1.0 + g * g + g * g * b * b + g * g * b * b * x * x;
        g * g * b / (c * c)
    }

    #[test]
    fn rational_triple_matches_closed_form() {
        let f = IntegrandN::new(3, triple);
        let r = integrate_nd(&f, &unit_box(3), tol(1e-9)).unwrap();
        let exact = PI * PI / 192.0;
        assert!((exact - 0.051_404_189_589_007_1).abs() < 1e-15);
        assert!((r.value - exact).abs() < 1e-8, "value {}", r.value);
        assert!(r.converged);
    }

    #[test]
    fn rational_triple_matches_monte_carlo_oracle() {
        // Test-only plain Monte Carlo estimator with a fixed seed.
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x9e3779b97f4a7c15);
        let n = 400_000usize;
        let mut acc = 0.0;
        for _ in 0..n {
            let p = [
                rng.random_range(0.0..1.0),
                rng.random_range(0.0..1.0),
                rng.random_range(0.0..1.0),
            ];
            acc += triple(&p);
        }
        let mc = acc / n as f64;
        let f = IntegrandN::new(3, triple);
        let r = integrate_nd(&f, &unit_box(3), tol(1e-9)).unwrap();
        // MC standard error here is ≈ 6e-5; 5 sigma.
        assert!(
            (mc - r.value).abs() < 3e-4,
            "Monte Carlo {mc} vs quadrature {}",
            r.value
        );
    }

    #[test]
    fn gaussian_power_integrand_4d() {
        let f = IntegrandN::new(4, |p: &[f64]| {
            let (x, b, g, d) = (p[0], p[1], p[2], p[3]);
            let c = 1.0 + g * g + g * g * b * b + g * g * b * b * x * x;
            d.powi(3) * g * g * b * (-d * d * c).exp()
        });
        let dom = BoxDomain::new(vec![
            Interval::unit(),
            Interval::unit(),
            Interval::unit(),
            Interval::semi_infinite(0.0).unwrap(),
        ])
        .unwrap();
        let r = integrate_nd(&f, &dom, Tolerance::absolute(1e-7).unwrap()).unwrap();
        let exact = PI * PI / 384.0;
        assert!((exact - 0.025_702_094_794_503_55).abs() < 1e-15);
        assert!((r.value - exact).abs() < 1e-6, "value {}", r.value);
        assert!(r.converged);
    }

    #[test]
    fn product_integrand_examples() {
        let one = product_integrand(|_| 1.0, 3);
        assert_eq!(one.eval(&[0.2, 0.5, 0.9]), 1.0);
        let lin = product_integrand(|x| x, 2);
        assert_eq!(lin.eval(&[0.5, 0.25]), 0.125);
    }

    #[test]
    fn squared_gaussian_tail_product() {
        // (∫₀^∞ e^{−x²} dx)² computed as a genuine 2-D integral of the
        // per-axis transformed integrand over [0, 1)².
        let g = transform_semi_infinite(|x: f64| (-x * x).exp());
        let f = product_integrand(g, 2);
        let r = integrate_nd(&f, &unit_box(2), tol(1e-11)).unwrap();
        let exact = PI / 4.0;
        assert!((r.value - exact).abs() < 1e-9, "value {}", r.value);
        assert!(r.converged);
    }

    #[test]
    fn fubini_consistency_on_separable_integrands() {
        type Pair = (fn(f64) -> f64, fn(f64) -> f64);
        let cases: [Pair; 3] = [
            (|x| x * x, |y| 1.0 - y),
            (|x| 1.0 / (1.0 + x * x), |y| y.powi(3)),
            (|x| 3.0 * x.powi(4) - x + 0.5, |y| 1.0 / (1.0 + y * y)),
        ];
        for (u, v) in cases {
            let f = IntegrandN::new(2, move |p: &[f64]| u(p[0]) * v(p[1]));
            let nd = integrate_nd(&f, &unit_box(2), tol(1e-12)).unwrap();
            let iu = integrate_1d(u, Interval::unit(), Tolerance::default()).unwrap();
            let iv = integrate_1d(v, Interval::unit(), Tolerance::default()).unwrap();
            assert!(
                (nd.value - iu.value * iv.value).abs() < 1e-10,
                "fubini mismatch: {} vs {}",
                nd.value,
                iu.value * iv.value
            );
        }
    }

    #[test]
    fn axis_permutation_stays_within_error_estimates() {
        let f = IntegrandN::new(3, triple);
        let perm = IntegrandN::new(3, |p: &[f64]| triple(&[p[2], p[0], p[1]]));
        let a = integrate_nd(&f, &unit_box(3), tol(1e-9)).unwrap();
        let b = integrate_nd(&perm, &unit_box(3), tol(1e-9)).unwrap();
        assert!(
            (a.value - b.value).abs() <= (a.err_est + b.err_est).max(1e-12),
            "permuted results differ: {} vs {} (errs {} {})",
            a.value,
            b.value,
            a.err_est,
            b.err_est
        );
    }

    #[test]
    fn monotone_budget_never_unconverges() {
        let integrands: Vec<IntegrandN> = vec![
            IntegrandN::new(2, |p: &[f64]| (p[0] * p[1]).sqrt()),
            IntegrandN::new(2, |p: &[f64]| 1.0 / ((1.0 + p[0] * p[0]) * (1.0 + p[1]))),
            IntegrandN::new(2, |p: &[f64]| (p[0] - p[1]).abs()),
        ];
        for f in &integrands {
            let mut was_converged = false;
            for budget in [20usize, 200, 2000] {
                let opts = NdOptions {
                    max_panels: budget,
                    ..NdOptions::default()
                };
                let r = integrate_nd_opts(f, &unit_box(2), tol(1e-10), &opts).unwrap();
                assert!(
                    !was_converged || r.converged,
                    "budget {budget} flipped converged back to false"
                );
                was_converged = r.converged;
            }
        }
    }

    #[test]
    fn inner_non_convergence_propagates() {
        // |x − y|^{-0.6} is integrable but hopeless at a 4-panel budget.
        let f = IntegrandN::new(2, |p: &[f64]| (p[0] - p[1]).abs().powf(-0.6).min(1e12));
        let opts = NdOptions {
            max_panels: 4,
            ..NdOptions::default()
        };
        let r = integrate_nd_opts(&f, &unit_box(2), tol(1e-12), &opts).unwrap();
        assert!(!r.converged);
        assert!(r.value.is_finite());
    }

    #[test]
    fn evaluation_error_surfaces_from_inner_axis() {
        let f = IntegrandN::new(2, |p: &[f64]| 1.0 / (p[0] - 0.5));
        let r = integrate_nd(&f, &unit_box(2), Tolerance::default());
        match r {
            Err(Error::NonFiniteEvaluation { x }) => assert_eq!(x, 0.5),
            other => panic!("expected non-finite evaluation, got {other:?}"),
        }
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let f = IntegrandN::new(3, triple);
        let seq = integrate_nd_opts(
            &f,
            &unit_box(3),
            tol(1e-8),
            &NdOptions {
                parallel: false,
                ..NdOptions::default()
            },
        )
        .unwrap();
        let par = integrate_nd_opts(
            &f,
            &unit_box(3),
            tol(1e-8),
            &NdOptions {
                parallel: true,
                ..NdOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq.value.to_bits(), par.value.to_bits());
        assert_eq!(seq.err_est.to_bits(), par.err_est.to_bits());
        assert_eq!(seq.neval, par.neval);
    }
}
