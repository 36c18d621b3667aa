//! The registry of named integrals with closed forms.

use std::f64::consts::PI;

use quadident::cubature::BoxDomain;
use quadident::{Interval, Tolerance};

/// How a named integral is evaluated.
pub enum Definition {
    OneD { f: fn(f64) -> f64, iv: Interval },
    MultiD { f: fn(&[f64]) -> f64, domain: BoxDomain },
}

/// A registry entry: an integrand with a domain, its closed form, and
/// the identity it instantiates.
pub struct NamedIntegral {
    pub name: &'static str,
    pub definition: &'static str,
    pub closed_form: &'static str,
    pub reference: f64,
    pub anchor: &'static str,
    pub dimension: u32,
    pub default_tol: Tolerance,
    pub kind: Definition,
}

fn ahmed_f(x: f64) -> f64 {
    let s = (2.0 + x * x).sqrt();
    s.atan() / ((1.0 + x * x) * s)
}

fn gauss_f(x: f64) -> f64 {
    (-x * x).exp()
}

fn arctan_square_f(p: &[f64]) -> f64 {
    1.0 / ((1.0 + p[0] * p[0]) * (1.0 + p[1] * p[1]))
}

fn ahmed_double_f(p: &[f64]) -> f64 {
    let (x, g) = (p[0], p[1]);
    1.0 / ((1.0 + x * x) * (1.0 + g * g * (2.0 + x * x)))
}

fn rational_triple_f(p: &[f64]) -> f64 {
    let (x, b, g) = (p[0], p[1], p[2]);
    let c = 1.0 + g * g + g * g * b * b + g * g * b * b * x * x;
    g * g * b / (c * c)
}

fn power4_gauss_f(p: &[f64]) -> f64 {
    let (x, b, g, d) = (p[0], p[1], p[2], p[3]);
    let c = 1.0 + g * g + g * g * b * b + g * g * b * b * x * x;
    d.powi(3) * g * g * b * (-d * d * c).exp()
}

fn tol(abs: f64) -> Tolerance {
    Tolerance::new(abs, abs).expect("static tolerance")
}

/// All registry entries, in alphabetical order by name.
pub fn registry() -> Vec<NamedIntegral> {
    let unit = Interval::unit();
    let tail = Interval::semi_infinite(0.0).expect("static interval");
    let unit2 = BoxDomain::unit_cube(2).expect("static box");
    let unit3 = BoxDomain::unit_cube(3).expect("static box");
    let dom4 = BoxDomain::new(vec![unit, unit, unit, tail]).expect("static box");

    let mut entries = vec![
        NamedIntegral {
            name: "ahmed",
            definition: "∫₀¹ atan(sqrt(2+x^2)) / ((1+x^2)·sqrt(2+x^2)) dx",
            closed_form: "5*pi^2/96",
            reference: 5.0 * PI * PI / 96.0,
            anchor: "A = ∫₀¹ arctan(√(2+x²))/((1+x²)√(2+x²)) dx = 5π²/96",
            dimension: 1,
            default_tol: tol(1e-12),
            kind: Definition::OneD { f: ahmed_f, iv: unit },
        },
        NamedIntegral {
            name: "ahmed_double",
            definition: "∫₀¹∫₀¹ 1/((1+x^2)(1+y^2*(2+x^2))) dy dx",
            closed_form: "5*pi^2/96",
            reference: 5.0 * PI * PI / 96.0,
            anchor: "∬ dx dγ/((1+x²)(1+γ²(2+x²))) = A",
            dimension: 2,
            default_tol: tol(1e-11),
            kind: Definition::MultiD {
                f: ahmed_double_f,
                domain: unit2.clone(),
            },
        },
        NamedIntegral {
            name: "arctan_square",
            definition: "∫₀¹∫₀¹ 1/((1+x^2)(1+y^2)) dy dx",
            closed_form: "pi^2/16",
            reference: PI * PI / 16.0,
            anchor: "∬ dx dγ/((1+x²)(1+γ²)) = (arctan 1)² = π²/16",
            dimension: 2,
            default_tol: tol(1e-11),
            kind: Definition::MultiD {
                f: arctan_square_f,
                domain: unit2,
            },
        },
        NamedIntegral {
            name: "gauss",
            definition: "∫₀^∞ exp(-x^2) dx",
            closed_form: "sqrt(pi)/2",
            reference: PI.sqrt() / 2.0,
            anchor: "∫₀^∞ e^{−x²} dx = √π/2",
            dimension: 1,
            default_tol: tol(1e-12),
            kind: Definition::OneD { f: gauss_f, iv: tail },
        },
        NamedIntegral {
            name: "power4_gauss_4d",
            definition: "∫₀¹∫₀¹∫₀¹∫₀^∞ d^3·g^2·b·exp(-d^2·(1+g^2+g^2b^2+g^2b^2x^2)) dd dg db dx",
            closed_form: "pi^2/384",
            reference: PI * PI / 384.0,
            anchor: "∫ δ³γ²β e^{−δ²(1+γ²+γ²β²+γ²β²x²)} = π²/384",
            dimension: 4,
            default_tol: tol(1e-7),
            kind: Definition::MultiD {
                f: power4_gauss_f,
                domain: dom4,
            },
        },
        NamedIntegral {
            name: "rational_triple",
            definition: "∫₀¹∫₀¹∫₀¹ g^2·b/(1+g^2+g^2b^2+g^2b^2x^2)^2 dg db dx",
            closed_form: "pi^2/192",
            reference: PI * PI / 192.0,
            anchor: "∫∫∫ γ²β/(1+γ²+γ²β²+γ²β²x²)² dγ dβ dx = π²/192",
            dimension: 3,
            default_tol: tol(1e-9),
            kind: Definition::MultiD {
                f: rational_triple_f,
                domain: unit3,
            },
        },
    ];
    entries.sort_by_key(|e| e.name);
    entries
}
