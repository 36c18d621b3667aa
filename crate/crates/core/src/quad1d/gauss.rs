//! Gauss–Legendre rule generation by Newton iteration on Legendre roots.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Highest supported rule order.
pub const MAX_ORDER: usize = 64;

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-15;

/// A Gauss–Legendre quadrature rule on `[−1, 1]`.
///
/// Nodes are strictly increasing and symmetric about 0; weights are
/// positive, symmetric, and sum to 2. An order-`n` rule integrates
/// polynomials of degree ≤ 2n−1 exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule to `f` on `[lo, hi]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> f64 {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Legendre polynomial value pair `(P_n(x), P_{n−1}(x))` by the
/// three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0; // P_0
    let mut p1 = x; // P_1
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Derivative of `P_n` from the pair identity
/// `P'_n(x) = n (x P_n − P_{n−1}) / (x² − 1)`.
fn legendre_deriv(n: usize, x: f64, pn: f64, pnm1: f64) -> f64 {
    (n as f64) * (x * pn - pnm1) / (x * x - 1.0)
}

/// Computes the order-`n` Gauss–Legendre rule.
///
/// Roots are found by Newton iteration from the standard cosine initial
/// guesses, capped at 100 iterations with a 1e−15 convergence threshold.
/// Only the positive half is iterated; the negative nodes are exact
/// mirror images, so the rule is symmetric by construction and the same
/// order always yields a bit-identical rule.
pub fn gauss_rule(order: usize) -> Result<GaussRule> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidParameter(format!(
            "gauss rule order must be in 1..={MAX_ORDER}, got {order}"
        )));
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pairs = n / 2;

    for i in 0..pairs {
        // i-th root counted from the upper end of (0, 1).
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (pn, pnm1) = legendre_pair(n, z);
            let step = pn / legendre_deriv(n, z, pn, pnm1);
            z -= step;
            if step.abs() <= NEWTON_TOL {
                break;
            }
        }
        let (pn, pnm1) = legendre_pair(n, z);
        let pp = legendre_deriv(n, z, pn, pnm1);
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }

    if !n.is_multiple_of(2) {
        // Odd orders have the exact root 0 in the middle, where the
        // derivative identity collapses to P'_n(0) = n · P_{n−1}(0).
        let mid = n / 2;
        let (_, pnm1) = legendre_pair(n, 0.0);
        let pp = n as f64 * pnm1;
        nodes[mid] = 0.0;
        weights[mid] = 2.0 / (pp * pp);
    }

    Ok(GaussRule {
        order: n,
        nodes,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact value of ∫_{−1}^{1} x^d dx.
    fn monomial_integral(d: u32) -> f64 {
        if d.is_multiple_of(2) {
            2.0 / (d as f64 + 1.0)
        } else {
            0.0
        }
    }

    #[test]
    fn order_bounds_are_enforced() {
        assert!(matches!(gauss_rule(0), Err(Error::InvalidParameter(_))));
        assert!(matches!(gauss_rule(65), Err(Error::InvalidParameter(_))));
        assert!(gauss_rule(1).is_ok());
        assert!(gauss_rule(64).is_ok());
    }

    #[test]
    fn order_one_is_midpoint() {
        let r = gauss_rule(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert_eq!(r.weights(), &[2.0]);
    }

    #[test]
    fn order_two_matches_legendre_roots() {
        // Roots of P₂(x) = (3x² − 1)/2 are ±1/√3.
        let r = gauss_rule(2).unwrap();
        assert!((r.nodes()[0] + 0.577_350_269_189_625_7).abs() < 1e-15);
        assert!((r.nodes()[1] - 0.577_350_269_189_625_7).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15);
        assert!((r.weights()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn order_three_matches_legendre_roots() {
        // Roots of P₃(x) = (5x³ − 3x)/2 are 0 and ±√(3/5).
        let r = gauss_rule(3).unwrap();
        assert!((r.nodes()[0] + 0.774_596_669_241_483_4).abs() < 1e-15);
        assert_eq!(r.nodes()[1], 0.0);
        assert!((r.nodes()[2] - 0.774_596_669_241_483_4).abs() < 1e-15);
        assert!((r.weights()[0] - 5.0 / 9.0).abs() < 1e-15);
        assert!((r.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((r.weights()[2] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn nodes_increase_and_mirror() {
        for order in 1..=MAX_ORDER {
            let r = gauss_rule(order).unwrap();
            for w in r.nodes().windows(2) {
                assert!(w[0] < w[1], "order {order}: nodes not increasing");
            }
            for i in 0..order {
                assert_eq!(
                    r.nodes()[i],
                    -r.nodes()[order - 1 - i],
                    "order {order}: nodes not mirrored"
                );
                assert_eq!(r.weights()[i], r.weights()[order - 1 - i]);
                assert!(r.weights()[i] > 0.0);
                assert!(r.nodes()[i].abs() < 1.0);
            }
        }
    }

    #[test]
    fn weights_sum_to_two() {
        for order in 1..=MAX_ORDER {
            let r = gauss_rule(order).unwrap();
            let sum: f64 = r.weights().iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "order {order}: sum {sum}");
        }
    }

    #[test]
    fn exact_for_monomials_up_to_degree_2n_minus_1() {
        for order in 1..=16usize {
            let r = gauss_rule(order).unwrap();
            for d in 0..=(2 * order - 1) as u32 {
                let got: f64 = r
                    .nodes()
                    .iter()
                    .zip(r.weights())
                    .map(|(&x, &w)| w * x.powi(d as i32))
                    .sum();
                let exact = monomial_integral(d);
                assert!(
                    (got - exact).abs() < 1e-13,
                    "order {order}, degree {d}: got {got}, want {exact}"
                );
            }
        }
    }

    #[test]
    fn deterministic_across_calls() {
        let a = gauss_rule(17).unwrap();
        let b = gauss_rule(17).unwrap();
        for i in 0..17 {
            assert_eq!(a.nodes()[i].to_bits(), b.nodes()[i].to_bits());
            assert_eq!(a.weights()[i].to_bits(), b.weights()[i].to_bits());
        }
    }

    #[test]
    fn integrate_maps_interval() {
        let r = gauss_rule(5).unwrap();
        let v = r.integrate(|x| x * x, 0.0, 2.0);
        assert!((v - 8.0 / 3.0).abs() < 1e-14);
    }
}
