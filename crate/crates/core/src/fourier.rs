//! Characteristic-function side of the expansion: `psi_n`, `a_k(s)`, the
//! partial sums `V_{r,n}` and a quadrature check of the inversion identity
//!
//! ```text
//! (1/k!) ∫ B_k(a_1(s), ..., a_k(s)) e^{isx} e^{-s^2/2} ds = sqrt(2 pi) G_k(-x) e^{-x^2/2}
//! ```

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::bell::bell_sequence;
use crate::cumulants::CumulantSet;
use crate::error::{Error, Result};
use crate::expansion::edgeworth_terms;
use crate::scalar::factorial;
use crate::simulator::ProfileSnapshot;

/// `a_k(s) = kappa_{k+2} / ((k+1)(k+2)) (is/sigma)^{k+2} + chi_k (is/sigma)^k`.
pub fn a_k(k: usize, c: &CumulantSet<f64>, s: f64) -> Result<Complex64> {
    let t = Complex64::new(0.0, s / c.sigma());
    let kappa = *c.kappa(k + 2)?;
    let chi = *c.chi(k)?;
    Ok(t.powu(k as u32 + 2) * (kappa / ((k + 1) * (k + 2)) as f64) + t.powu(k as u32) * chi)
}

/// `a_1(s) .. a_order(s)`.
pub fn a_series(order: usize, c: &CumulantSet<f64>, s: f64) -> Result<Vec<Complex64>> {
    (1..=order).map(|k| a_k(k, c, s)).collect()
}

/// `V_{r,n}(s) = W e^{-s^2/2} sum_{k<=r} B_k(a_1(s), .., a_k(s)) / k! w_n^{-k/2}`.
pub fn v_partial_sum(r: usize, c: &CumulantSet<f64>, w_inf: f64, w_n: f64, s: f64) -> Result<Complex64> {
    let a = a_series(r, c, s)?;
    let b = bell_sequence(&a);
    let sum: Complex64 = b
        .iter()
        .enumerate()
        .map(|(k, bk)| bk / (factorial(k as u64) as f64 * w_n.powf(k as f64 / 2.0)))
        .sum();
    Ok(sum * (w_inf * (-0.5 * s * s).exp()))
}

/// `psi_n(s) = e^{-phi w_n - i s mu w_n/(sigma sqrt(w_n))} sum_k L_n(k) e^{k (beta + i s/(sigma sqrt(w_n)))}`,
/// with `beta`, `mu` and `sigma` taken from `c`.
pub fn char_fn_psi(profile: &ProfileSnapshot, c: &CumulantSet<f64>, phi_val: f64, w_n: f64, s: f64) -> Complex64 {
    let beta = c.beta;
    let scale = c.sigma() * w_n.sqrt();
    let shift = profile
        .levels()
        .filter(|&(_, n)| n > 0)
        .map(|(k, _)| beta * k as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let centre = c.mu() * w_n;
    let sum: Complex64 = profile
        .levels()
        .filter(|&(_, n)| n > 0)
        .map(|(k, n)| {
            let k = k as f64;
            Complex64::from_polar(n as f64 * (beta * k - shift).exp(), s * (k - centre) / scale)
        })
        .sum();
    sum * (shift - phi_val * w_n).exp()
}

/// Composite Gauss-Legendre rule on `[-half_width, half_width]`.
struct CompositeRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CompositeRule {
    fn new(half_width: f64, panels: usize, per_panel: usize) -> Self {
        let base = GaussLegendre::new(NonZeroUsize::new(per_panel).expect("positive order"));
        let h = 2.0 * half_width / panels as f64;
        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for p in 0..panels {
            let mid = -half_width + (p as f64 + 0.5) * h;
            for &(x, w) in base.as_node_weight_pairs() {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        CompositeRule { nodes, weights }
    }
}

/// Quadrature settings for [`fourier_invert_check_with`].
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSettings {
    pub panels: usize,
    pub per_panel: usize,
    /// Required agreement between the full rule and the half rule,
    /// relative to the largest closed-form value.
    pub convergence_tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings { panels: 128, per_panel: 16, convergence_tol: 1e-10 }
    }
}

/// Truncation half-width: at least 12 and large enough that
/// `e^{-S^2/2} (1+S)^{3 k_max} < 1e-14`.
pub fn truncation_width(k_max: usize) -> f64 {
    let mut s: f64 = 12.0;
    while -0.5 * s * s + 3.0 * k_max as f64 * (1.0 + s).ln() >= (1e-14f64).ln() {
        s += 1.0;
    }
    s
}

/// Largest relative error over `k <= k_max` and the grid, each order
/// normalised by the largest closed-form value on the grid.
pub fn fourier_invert_check(k_max: usize, c: &CumulantSet<f64>, x_grid: &[f64]) -> Result<f64> {
    fourier_invert_check_with(k_max, c, x_grid, QuadratureSettings::default())
}

pub fn fourier_invert_check_with(
    k_max: usize,
    c: &CumulantSet<f64>,
    x_grid: &[f64],
    settings: QuadratureSettings,
) -> Result<f64> {
    let half_width = truncation_width(k_max);
    let g = edgeworth_terms(k_max, c)?;
    let full = CompositeRule::new(half_width, settings.panels, settings.per_panel);
    let half = CompositeRule::new(half_width, (settings.panels / 2).max(1), settings.per_panel);
    let integrate = |rule: &CompositeRule| -> Result<Vec<Vec<Complex64>>> {
        // bell[node][k] / k!
        let bells = rule
            .nodes
            .iter()
            .map(|&s| {
                let b = bell_sequence(&a_series(k_max, c, s)?);
                Ok(b.into_iter()
                    .enumerate()
                    .map(|(k, v)| v * ((-0.5 * s * s).exp() / factorial(k as u64) as f64))
                    .collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((0..=k_max)
            .map(|k| {
                x_grid
                    .iter()
                    .map(|&x| {
                        rule.nodes
                            .iter()
                            .zip(&rule.weights)
                            .zip(&bells)
                            .map(|((&s, &w), b)| b[k] * Complex64::from_polar(w, s * x))
                            .sum()
                    })
                    .collect()
            })
            .collect())
    };
    let fine = integrate(&full)?;
    let coarse = integrate(&half)?;
    let root = (2.0 * PI).sqrt();
    let mut worst: f64 = 0.0;
    for k in 0..=k_max {
        let exact: Vec<f64> = x_grid
            .iter()
            .map(|&x| root * g[k].eval(&(-x)) * (-0.5 * x * x).exp())
            .collect();
        let scale = exact.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let norm = if scale > 0.0 { scale } else { 1.0 };
        let drift = fine[k]
            .iter()
            .zip(&coarse[k])
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
            / norm;
        if drift > settings.convergence_tol {
            return Err(Error::QuadratureNonConvergence(drift));
        }
        let err = fine[k]
            .iter()
            .zip(&exact)
            .fold(0.0f64, |m, (a, e)| m.max((a - e).norm()))
            / norm;
        worst = worst.max(err);
    }
    Ok(worst)
}
