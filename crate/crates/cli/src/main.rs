//! `quadident` — evaluate named integrals against their closed forms,
//! verify reduction identities for user-supplied integrands, and replay
//! the derivation chain from the probability integral to Ahmed's
//! integral.
//!
//! Exit codes: 0 every check passed, 1 a check failed or was
//! inconclusive, 2 usage or parse error, 3 integrand evaluation error.

mod registry;
mod report;

use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use quadident::chain::{run_chain, ChainTolerances};
use quadident::cubature::{integrate_nd, BoxDomain, IntegrandN, NdOptions};
use quadident::expr::{self, Expr};
use quadident::quad1d::{integrate_1d_opts, QuadOptions};
use quadident::reduction::{
    integral_power, power_integrand, reduce_f1, reduce_f2, verify_identity_opts, PowerSpec,
    Verdict,
};
use quadident::{Error as QuadError, Interval, Tolerance};

use registry::{registry, Definition};
use report::{full, Report, StepRecord};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EVAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "quadident",
    version,
    about = "Numerical verification of integral identities",
    long_about = "Adaptive-quadrature evaluation of named integrals, verification of \
                  radial reduction identities, and a step-by-step numerical replay of \
                  the derivation linking the probability integral to Ahmed's integral."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

const EXPR_HELP: &str = "Integrand g(x): literals, x, pi, e, + - * / ^ (right-assoc), \
                         unary minus, sin cos exp sqrt atan abs log";

#[derive(Subcommand)]
enum Cmd {
    /// List the named integrals with their closed forms
    List,
    /// Evaluate a named integral and compare it to its closed form
    Eval {
        /// Registry name (see `list`)
        name: String,
        /// Absolute tolerance override
        #[arg(long)]
        abs: Option<f64>,
        /// Relative tolerance override
        #[arg(long)]
        rel: Option<f64>,
        /// Integrand-evaluation budget per 1-D integration
        #[arg(long)]
        max_evals: Option<u64>,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Verify a reduction identity for an integrand g(x)
    Verify {
        /// Which identity to check
        #[arg(value_enum)]
        kind: VerifyKind,
        #[arg(long, help = EXPR_HELP)]
        g: String,
        /// Number of variables (power exponent for `power`)
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Upper integration limit; `inf` is allowed for `power`
        #[arg(long, default_value = "1", value_parser = parse_alpha)]
        alpha: f64,
        /// Absolute tolerance override
        #[arg(long)]
        abs: Option<f64>,
        /// Relative tolerance override
        #[arg(long)]
        rel: Option<f64>,
        /// Integrand-evaluation budget per 1-D integration
        #[arg(long)]
        max_evals: Option<u64>,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Replay the derivation chain from (√π/2)⁴ = π²/16 to A = 5π²/96
    Chain {
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        /// Residual tolerance override for the 4-D step
        #[arg(long)]
        tol_4d: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    /// Two-variable radial rewrite applied to f(x,y) = g(x)·g(y)
    F1,
    /// n-variable radial rewrite applied to f = g(x₁)⋯g(x_n)
    F2,
    /// (∫₀^α g)ⁿ = n! × reduced n-dimensional integral
    Power,
}

impl VerifyKind {
    fn name(self) -> &'static str {
        match self {
            VerifyKind::F1 => "f1",
            VerifyKind::F2 => "f2",
            VerifyKind::Power => "power",
        }
    }
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let alpha = match s.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "∞" => f64::INFINITY,
        other => other
            .parse::<f64>()
            .map_err(|_| format!("`{other}` is neither a number nor `inf`"))?,
    };
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(format!("alpha must be positive, got {alpha}"));
    }
    Ok(alpha)
}

/// Failures that terminate a command, mapped onto exit codes.
enum CmdError {
    Usage(String),
    Eval(String),
}

impl From<QuadError> for CmdError {
    fn from(e: QuadError) -> Self {
        match e {
            QuadError::NonFiniteEvaluation { .. } => CmdError::Eval(e.to_string()),
            _ => CmdError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match cli.cmd {
        Cmd::List => {
            print!("{}", render_list());
            return ExitCode::SUCCESS;
        }
        Cmd::Eval {
            ref name,
            abs,
            rel,
            max_evals,
            json,
        } => cmd_eval(name, abs, rel, max_evals).map(|r| (r, json)),
        Cmd::Verify {
            kind,
            ref g,
            n,
            alpha,
            abs,
            rel,
            max_evals,
            json,
        } => cmd_verify(kind, g, n, alpha, abs, rel, max_evals).map(|r| (r, json)),
        Cmd::Chain { json, tol_4d } => cmd_chain(tol_4d).map(|r| (r, json)),
    };

    match outcome {
        Ok((mut report, json)) => {
            report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            if report.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CmdError::Eval(msg)) => {
            eprintln!("evaluation error: {msg}");
            ExitCode::from(EXIT_EVAL)
        }
    }
}

fn render_list() -> String {
    let mut out = String::new();
    for e in registry() {
        out.push_str(&format!(
            "{:<16} {}\n{:<16}   closed form: {} = {}\n",
            e.name,
            e.definition,
            "",
            e.closed_form,
            full(e.reference),
        ));
    }
    out
}

/// Budget conversion: `--max-evals` counts integrand evaluations and a
/// panel costs 15 of them.
fn budget(max_evals: Option<u64>) -> usize {
    match max_evals {
        Some(n) => ((n / 15).max(1)) as usize,
        None => quadident::quad1d::DEFAULT_MAX_PANELS,
    }
}

fn override_tol(base: Tolerance, abs: Option<f64>, rel: Option<f64>) -> Result<Tolerance, CmdError> {
    match (abs, rel) {
        (None, None) => Ok(base),
        (a, r) => Ok(Tolerance::new(a.unwrap_or(base.abs()), r.unwrap_or(base.rel()))?),
    }
}

fn cmd_eval(
    name: &str,
    abs: Option<f64>,
    rel: Option<f64>,
    max_evals: Option<u64>,
) -> Result<Report, CmdError> {
    let reg = registry();
    let Some(entry) = reg.iter().find(|e| e.name == name) else {
        let names: Vec<&str> = reg.iter().map(|e| e.name).collect();
        return Err(CmdError::Usage(format!(
            "unknown integral `{name}`; valid names: {}",
            names.join(", ")
        )));
    };
    let tol = override_tol(entry.default_tol, abs, rel)?;
    let max_panels = budget(max_evals);

    let q = match &entry.kind {
        Definition::OneD { f, iv } => {
            let opts = QuadOptions {
                max_panels,
                ..QuadOptions::default()
            };
            integrate_1d_opts(f, *iv, tol, &opts)?
        }
        Definition::MultiD { f, domain } => {
            let opts = NdOptions {
                max_panels,
                ..NdOptions::default()
            };
            let integrand = IntegrandN::new(domain.dim(), *f);
            quadident::cubature::integrate_nd_opts(&integrand, domain, tol, &opts)?
        }
    };

    let residual = (q.value - entry.reference).abs();
    let pass = q.converged && residual <= tol.threshold(entry.reference) + q.err_est;

    let mut report = Report::new("eval");
    report.param("name", name);
    report.param("abs", format!("{:e}", tol.abs()));
    report.param("rel", format!("{:e}", tol.rel()));
    report.steps.push(StepRecord {
        id: entry.name.to_string(),
        dim: entry.dimension,
        computed: q.value,
        reference: entry.reference,
        residual,
        neval: q.neval,
        converged: q.converged,
        anchor: entry.anchor.to_string(),
    });
    report.all_pass = pass;
    Ok(report)
}

/// Expression-backed integrand that records the first domain error and
/// reports NaN to the quadrature engine, which then aborts.
struct ExprFn {
    expr: Expr,
    first_error: Mutex<Option<(f64, expr::EvalError)>>,
}

impl ExprFn {
    fn new(expr: Expr) -> std::sync::Arc<Self> {
        std::sync::Arc::new(Self {
            expr,
            first_error: Mutex::new(None),
        })
    }

    fn call(&self, x: f64) -> f64 {
        match self.expr.eval(x) {
            Ok(v) => v,
            Err(e) => {
                self.first_error.lock().unwrap().get_or_insert((x, e));
                f64::NAN
            }
        }
    }

    fn take_error(&self) -> Option<(f64, expr::EvalError)> {
        self.first_error.lock().unwrap().take()
    }
}

fn default_verify_tol(dim: usize) -> Tolerance {
    let abs = match dim {
        0..=2 => 1e-12,
        3 => 1e-9,
        _ => 1e-7,
    };
    Tolerance::new(abs, abs).expect("static tolerance")
}

fn cmd_verify(
    kind: VerifyKind,
    g_src: &str,
    n: usize,
    alpha: f64,
    abs: Option<f64>,
    rel: Option<f64>,
    max_evals: Option<u64>,
) -> Result<Report, CmdError> {
    let parsed = expr::parse(g_src).map_err(|e| CmdError::Usage(e.to_string()))?;
    let g = ExprFn::new(parsed);
    let max_panels = budget(max_evals);

    let dim = match kind {
        VerifyKind::F1 => 2,
        VerifyKind::F2 | VerifyKind::Power => n,
    };
    if !(2..=quadident::cubature::MAX_DIM).contains(&dim) {
        return Err(CmdError::Usage(format!(
            "n must be in 2..={} for verification, got {n}",
            quadident::cubature::MAX_DIM
        )));
    }
    let tol = override_tol(default_verify_tol(dim), abs, rel)?;
    let nd_opts = NdOptions {
        max_panels,
        ..NdOptions::default()
    };

    struct Outcome {
        computed: f64,
        reference: f64,
        residual: f64,
        neval: u64,
        verdict: Verdict,
        anchor: &'static str,
    }

    let run = || -> Result<Outcome, QuadError> {
        match kind {
            VerifyKind::F1 | VerifyKind::F2 => {
                if alpha == f64::INFINITY {
                    return Err(QuadError::InvalidParameter(
                        "alpha = inf is only supported by the power construction".into(),
                    ));
                }
                let side = Interval::new(0.0, alpha)?;
                let domain = BoxDomain::new(vec![side; dim])?;
                let gd = g.clone();
                let product = IntegrandN::new(dim, move |p: &[f64]| {
                    p.iter().map(|&x| gd.call(x)).product()
                });
                let direct = integrate_nd(&product, &domain, tol)?;
                let gr = g.clone();
                let f = IntegrandN::new(dim, move |p: &[f64]| {
                    p.iter().map(|&x| gr.call(x)).product()
                });
                let reduced = match kind {
                    VerifyKind::F1 => reduce_f1(f, alpha)?,
                    _ => reduce_f2(f, dim, alpha)?,
                };
                let rep = verify_identity_opts(&direct, &reduced, tol, &nd_opts)?;
                let anchor = match kind {
                    VerifyKind::F1 => "∬ f = ∫₀¹∫₀^α β(f(β,βu) + f(βu,β)) dβ du",
                    _ => "∫_{(0,α)ⁿ} f = ∫_{[0,1]^{n−1}}∫₀^α β^{n−1} ΣΦ_p dβ du",
                };
                Ok(Outcome {
                    computed: rep.reduced_value,
                    reference: rep.direct_value,
                    residual: rep.residual,
                    neval: rep.neval_direct + rep.neval_reduced,
                    verdict: rep.verdict,
                    anchor,
                })
            }
            VerifyKind::Power => {
                let iv = if alpha == f64::INFINITY {
                    Interval::semi_infinite(0.0)?
                } else {
                    Interval::new(0.0, alpha)?
                };
                let g1 = g.clone();
                let opts = QuadOptions {
                    max_panels,
                    ..QuadOptions::default()
                };
                let one_d = integrate_1d_opts(&move |x| g1.call(x), iv, tol.inner_for_direct(), &opts)?;
                let direct = integral_power(&one_d, n as u32);
                let g2 = g.clone();
                let spec = PowerSpec::new(move |x| g2.call(x), n, alpha)?;
                let reduced = power_integrand(spec)?;
                let rep = verify_identity_opts(&direct, &reduced, tol, &nd_opts)?;
                Ok(Outcome {
                    computed: rep.reduced_value,
                    reference: rep.direct_value,
                    residual: rep.residual,
                    neval: rep.neval_direct + rep.neval_reduced,
                    verdict: rep.verdict,
                    anchor: "(∫₀^α g)ⁿ = n! ∫ Π t_j^{n−j} Π g(t₁t₂⋯t_k)",
                })
            }
        }
    };

    let result = run();
    // A domain error in g is the root cause of any NaN the quadrature
    // saw; report it in preference to the propagated abscissa.
    if let Some((x, e)) = g.take_error() {
        return Err(CmdError::Eval(format!("g({x}) failed: {e}")));
    }
    let out = result.map_err(CmdError::from)?;

    let mut report = Report::new("verify");
    report.param("kind", kind.name());
    report.param("g", g_src);
    report.param("n", n);
    report.param(
        "alpha",
        if alpha == f64::INFINITY {
            "inf".to_string()
        } else {
            alpha.to_string()
        },
    );
    report.param("abs", format!("{:e}", tol.abs()));
    report.param("rel", format!("{:e}", tol.rel()));
    report.steps.push(StepRecord {
        id: kind.name().to_string(),
        dim: dim as u32,
        computed: out.computed,
        reference: out.reference,
        residual: out.residual,
        neval: out.neval,
        converged: out.verdict != Verdict::Inconclusive,
        anchor: out.anchor.to_string(),
    });
    report.all_pass = out.verdict == Verdict::Pass;
    Ok(report)
}

fn cmd_chain(tol_4d: Option<f64>) -> Result<Report, CmdError> {
    let mut tols = ChainTolerances::default();
    if let Some(t) = tol_4d {
        if t.is_nan() || t <= 0.0 {
            return Err(CmdError::Usage(format!(
                "--tol-4d must be positive, got {t}"
            )));
        }
        tols.d4 = t;
    }
    let chain = run_chain(tols)?;

    let mut report = Report::new("chain");
    report.param("tol_0d", format!("{:e}", tols.d0));
    report.param("tol_1d", format!("{:e}", tols.d1));
    report.param("tol_2d", format!("{:e}", tols.d2));
    report.param("tol_3d", format!("{:e}", tols.d3));
    report.param("tol_4d", format!("{:e}", tols.d4));
    for s in &chain.steps {
        report.steps.push(StepRecord {
            id: s.id.to_string(),
            dim: s.dimension,
            computed: s.computed,
            reference: s.reference,
            residual: s.residual,
            neval: s.neval,
            converged: s.converged,
            anchor: s.anchor.to_string(),
        });
    }
    report.all_pass = chain.all_pass;
    Ok(report)
}

/// Extension helpers on [`Tolerance`] local to the CLI.
trait ToleranceExt {
    /// Tighter tolerance for the 1-D direct side of a power identity,
    /// whose error enters the comparison raised to the n-th power.
    fn inner_for_direct(&self) -> Tolerance;
}

impl ToleranceExt for Tolerance {
    fn inner_for_direct(&self) -> Tolerance {
        let abs = (self.abs() / 100.0).max(1e-14);
        let rel = (self.rel() / 100.0).max(1e-14);
        Tolerance::new(abs, rel).expect("derived tolerance")
    }
}
