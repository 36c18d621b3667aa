//! The Gauss–Kronrod 7/15 embedded pair used by the adaptive driver.
//!
//! Coefficients are the standard published values. All 15 nodes are
//! interior to `(−1, 1)`, so panel endpoints are never sampled. The
//! tables are checked once on first use: K15 must integrate monomials
//! of degree ≤ 22 exactly and G7 of degree ≤ 13.

use crate::error::{Error, Result};
use std::sync::LazyLock;

/// Positive Kronrod abscissae, outermost first; index 7 is the centre.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Kronrod weights matching `XGK`.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed abscissae of `XGK` (the embedded
/// 7-point rule); the last entry belongs to the centre node.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Number of integrand evaluations per panel.
pub(crate) const PANEL_NEVAL: u64 = 15;

/// The 15 abscissae on the reference interval, in fixed ascending order.
fn reference_nodes() -> [f64; 15] {
    let mut xs = [0.0; 15];
    for (i, &x) in XGK.iter().take(7).enumerate() {
        xs[i] = -x;
        xs[14 - i] = x;
    }
    xs[7] = 0.0;
    xs
}

/// `(kronrod, gauss)` weights aligned with `reference_nodes()`.
fn reference_weights() -> ([f64; 15], [f64; 15]) {
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    for i in 0..7 {
        wk[i] = WGK[i];
        wk[14 - i] = WGK[i];
        // Odd XGK indices (1, 3, 5) are Gauss nodes.
        if !i.is_multiple_of(2) {
            wg[i] = WG[i / 2];
            wg[14 - i] = WG[i / 2];
        }
    }
    wk[7] = WGK[7];
    wg[7] = WG[3];
    (wk, wg)
}

pub(crate) struct GkPair {
    pub nodes: [f64; 15],
    pub wk: [f64; 15],
    pub wg: [f64; 15],
}

impl GkPair {
    fn build() -> Self {
        let nodes = reference_nodes();
        let (wk, wg) = reference_weights();
        Self { nodes, wk, wg }
    }

    /// Exactness check over `[−1, 1]`: K15 has polynomial degree 22,
    /// the embedded G7 degree 13.
    fn verify(&self) -> Result<()> {
        let exact = |d: u32| if d.is_multiple_of(2) { 2.0 / (d as f64 + 1.0) } else { 0.0 };
        for d in 0..=22u32 {
            let k: f64 = self
                .nodes
                .iter()
                .zip(&self.wk)
                .map(|(&x, &w)| w * x.powi(d as i32))
                .sum();
            if (k - exact(d)).abs() > 1e-13 {
                return Err(Error::InvalidParameter(format!(
                    "K15 table failed exactness at degree {d}: {k}"
                )));
            }
            if d <= 13 {
                let g: f64 = self
                    .nodes
                    .iter()
                    .zip(&self.wg)
                    .map(|(&x, &w)| w * x.powi(d as i32))
                    .sum();
                if (g - exact(d)).abs() > 1e-13 {
                    return Err(Error::InvalidParameter(format!(
                        "G7 table failed exactness at degree {d}: {g}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The verified pair, built once per process.
pub(crate) static GK15: LazyLock<GkPair> = LazyLock::new(|| {
    let pair = GkPair::build();
    pair.verify().expect("Gauss-Kronrod 7/15 tables are inconsistent");
    pair
});

/// Evaluates the integrand at the 15 panel abscissae.
///
/// Returns the abscissae and values in fixed ascending-node order; the
/// caller combines them sequentially so the panel estimate does not
/// depend on evaluation order.
pub(crate) fn eval_nodes<F>(f: &F, lo: f64, hi: f64, parallel: bool) -> ([f64; 15], [f64; 15])
where
    F: Fn(f64) -> f64 + Sync,
{
    let pair = &*GK15;
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut xs = [0.0; 15];
    for (x, &node) in xs.iter_mut().zip(&pair.nodes) {
        *x = mid + half * node;
    }
    let mut vals = [0.0; 15];
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        let computed: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect();
        vals.copy_from_slice(&computed);
        return (xs, vals);
    }
    let _ = parallel;
    for (v, &x) in vals.iter_mut().zip(&xs) {
        *v = f(x);
    }
    (xs, vals)
}

/// Combines node values into the `(value, err_est)` embedded-pair
/// estimate for a panel of half-width `half`.
pub(crate) fn combine(vals: &[f64; 15], half: f64) -> (f64, f64) {
    let pair = &*GK15;
    let mut k15 = 0.0;
    let mut g7 = 0.0;
    for ((&v, &wk), &wg) in vals.iter().zip(&pair.wk).zip(&pair.wg) {
        k15 += wk * v;
        g7 += wg * v;
    }
    let value = k15 * half;
    let err = ((k15 - g7) * half).abs();
    (value, err)
}

/// Single-panel integration of `f` over the finite interval `[lo, hi]`
/// with the embedded 7/15 pair.
///
/// Returns the high-order (K15) estimate together with the error
/// estimate `|K15 − G7|`. Endpoints are never sampled. A non-finite
/// integrand value fails with the offending abscissa.
pub fn integrate_panel<F>(f: F, lo: f64, hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidParameter(format!(
            "panel requires finite lo < hi, got [{lo}, {hi}]"
        )));
    }
    panel_estimate(&f, lo, hi, false)
}

pub(crate) fn panel_estimate<F>(f: &F, lo: f64, hi: f64, parallel: bool) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    let (xs, vals) = eval_nodes(f, lo, hi, parallel);
    for (&x, &v) in xs.iter().zip(&vals) {
        if !v.is_finite() {
            return Err(Error::NonFiniteEvaluation { x });
        }
    }
    Ok(combine(&vals, 0.5 * (hi - lo)))
}
