//! Local limit and saddle-point harnesses.

use crate::error::{Error, Result};
use crate::estimators::{estimate_at, trend, LimitEstimate};
use crate::expansion::{saddle_expansion_value, Expansion};
use crate::models::ModelSpec;
use crate::simulator::{ProfileSnapshot, RunTrace};

use super::{PassIf, SeriesPoint, TheoremReport};

/// Half-width, in standard deviations, of the window around `mu w_n` that
/// is added to the profile support when taking the supremum over `k`.
pub const SUP_WINDOW_SIGMAS: f64 = 10.0;

/// `e^{beta k - phi w_n} L_n(k)`.
fn scaled_count(s: &ProfileSnapshot, k: i64, beta: f64, phi: f64, w_n: f64) -> f64 {
    match s.count(k) {
        0 => 0.0,
        c => (beta * k as f64 - phi * w_n + (c as f64).ln()).exp(),
    }
}

fn summarise(report: &mut TheoremReport) {
    if let Some(last) = report.final_statistic() {
        report.summary.insert("final".into(), last);
    }
    if let Some(first) = report.series.first().map(|p| p.statistic) {
        report.summary.insert("first".into(), first);
    }
    let pts: Vec<(u64, f64)> = report.series.iter().map(|p| (p.n, p.statistic)).collect();
    if let Ok(t) = trend(&pts) {
        report.summary.insert("monotone_fraction".into(), t.monotone_fraction);
        report.summary.insert("last_over_first".into(), t.last_over_first_ratio);
    }
}

/// `w_n^{(r+1)/2} sup_k |e^{beta k - phi(beta) w_n} L_n(k) - expansion_value(r, ...)|`
/// per snapshot, with `W` and `chi` taken from `chi_source`. The supremum
/// runs over the profile support joined with `mu w_n ± 10 sigma sqrt(w_n)`.
/// Snapshots with `n < 2` have `w_n = 0` and are skipped.
pub fn clt_sup_error(
    run: &RunTrace,
    model: &ModelSpec,
    r: usize,
    beta: f64,
    chi_source: &LimitEstimate,
) -> Result<TheoremReport> {
    if r > 4 {
        return Err(Error::Unsupported(format!("expansion order {r} > 4")));
    }
    if !model.beta_range()?.contains(beta) {
        return Err(Error::InvalidInput(format!("beta = {beta} outside (beta_-, beta_+)")));
    }
    if (chi_source.beta - beta).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "limit estimate is at beta = {}, harness at {beta}",
            chi_source.beta
        )));
    }
    if chi_source.chi_hat.len() < r {
        return Err(Error::InsufficientCumulants { what: "chi_hat", needed: r, have: chi_source.chi_hat.len() });
    }
    let c = model.cumulant_set(beta, r + 2, chi_source.chi_hat[..r].to_vec())?;
    let expansion = Expansion::new(&c, chi_source.w_hat, r)?;
    let (mu, sigma, phi) = (model.phi_deriv(1, beta), model.sigma(beta), model.phi(beta));
    let mut report = TheoremReport::new("clt_sup_error", "final", PassIf::AtMost);
    report.model = Some(model.name().to_string());
    report.seed = Some(run.seed);
    report.beta = Some(beta);
    report.r = Some(r);
    report.predicted.insert("limit".into(), 0.0);
    report.predicted.insert("W_hat".into(), chi_source.w_hat);
    for (j, v) in chi_source.chi_hat.iter().take(r).enumerate() {
        report.predicted.insert(format!("chi_hat_{}", j + 1), *v);
    }
    for s in run.snapshots.iter().filter(|s| s.n >= 2) {
        let w = s.w_n();
        let half = SUP_WINDOW_SIGMAS * sigma * w.sqrt();
        let lo = s.min_level.min((mu * w - half).floor() as i64);
        let hi = s.max_level().max((mu * w + half).ceil() as i64);
        let mut sup: f64 = 0.0;
        for k in lo..=hi {
            let diff = scaled_count(s, k, beta, phi, w) - expansion.value(w, k as f64)?;
            sup = sup.max(diff.abs());
        }
        report.series.push(SeriesPoint {
            n: s.n,
            statistic: w.powf((r as f64 + 1.0) / 2.0) * sup,
            prediction: Some(0.0),
        });
    }
    summarise(&mut report);
    Ok(report)
}

/// `W_n(beta)` and `chi_hat_j(beta)` from one snapshot as functions of
/// `beta`, tabulated on a 33-point grid and interpolated by local cubics,
/// or evaluated exactly at every call.
#[derive(Clone, Debug)]
pub struct LimitFunction {
    snapshot: ProfileSnapshot,
    order: usize,
    exact: bool,
    grid: Vec<f64>,
    ln_w: Vec<f64>,
    chi: Vec<Vec<f64>>,
}

pub const LIMIT_GRID_POINTS: usize = 33;

impl LimitFunction {
    pub fn new(snapshot: &ProfileSnapshot, model: &ModelSpec, interval: (f64, f64), order: usize, exact: bool) -> Result<Self> {
        let (a, b) = interval;
        if !(a < b) {
            return Err(Error::InvalidInput(format!("empty interval ({a}, {b})")));
        }
        let mut f = LimitFunction {
            snapshot: snapshot.clone(),
            order,
            exact,
            grid: Vec::new(),
            ln_w: Vec::new(),
            chi: Vec::new(),
        };
        if !exact {
            for i in 0..LIMIT_GRID_POINTS {
                let beta = a + (b - a) * i as f64 / (LIMIT_GRID_POINTS - 1) as f64;
                let e = estimate_at(snapshot, model, beta, order)?;
                f.grid.push(beta);
                f.ln_w.push(e.w_hat.ln());
                f.chi.push(e.chi_hat);
            }
        }
        Ok(f)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// `(W(beta), [chi_1(beta), ..])`.
    pub fn eval(&self, model: &ModelSpec, beta: f64) -> Result<(f64, Vec<f64>)> {
        if self.exact {
            let e = estimate_at(&self.snapshot, model, beta, self.order)?;
            return Ok((e.w_hat, e.chi_hat));
        }
        let g = &self.grid;
        let h = g[1] - g[0];
        let pos = ((beta - g[0]) / h).floor() as i64;
        let start = (pos - 1).clamp(0, g.len() as i64 - 4) as usize;
        let idx = start..start + 4;
        let weights: Vec<f64> = idx
            .clone()
            .map(|i| {
                idx.clone()
                    .filter(|&j| j != i)
                    .map(|j| (beta - g[j]) / (g[i] - g[j]))
                    .product()
            })
            .collect();
        let ln_w: f64 = idx.clone().zip(&weights).map(|(i, w)| w * self.ln_w[i]).sum();
        let chi = (0..self.order)
            .map(|j| idx.clone().zip(&weights).map(|(i, w)| w * self.chi[i][j]).sum())
            .collect();
        Ok((ln_w.exp(), chi))
    }
}

/// `w_n^{r+1} sup_k |e^{k beta_n(k) - phi(beta_n(k)) w_n} L_n(k) - saddle_expansion_value|`
/// over integers `k` in `w_n phi'(K)`.
pub fn saddle_sup_error(
    run: &RunTrace,
    model: &ModelSpec,
    r: usize,
    interval: (f64, f64),
    limit: &LimitFunction,
) -> Result<TheoremReport> {
    let range = model.beta_range()?;
    if !(range.contains(interval.0) && range.contains(interval.1) && interval.0 < interval.1) {
        return Err(Error::InvalidInput(format!(
            "interval ({}, {}) is not inside (beta_-, beta_+)",
            interval.0, interval.1
        )));
    }
    if limit.order() < 2 * r {
        return Err(Error::InsufficientCumulants { what: "chi", needed: 2 * r, have: limit.order() });
    }
    let mut report = TheoremReport::new("saddle_sup_error", "final", PassIf::AtMost);
    report.model = Some(model.name().to_string());
    report.seed = Some(run.seed);
    report.r = Some(r);
    report.predicted.insert("limit".into(), 0.0);
    report.predicted.insert("beta_lo".into(), interval.0);
    report.predicted.insert("beta_hi".into(), interval.1);
    let (t_lo, t_hi) = (model.phi_deriv(1, interval.0), model.phi_deriv(1, interval.1));
    for s in run.snapshots.iter().filter(|s| s.n >= 2) {
        let w = s.w_n();
        let k_lo = (w * t_lo).ceil() as i64;
        let k_hi = (w * t_hi).floor() as i64;
        if k_lo > k_hi {
            report.notes.push(format!("n = {}: no admissible level", s.n));
            continue;
        }
        let mut sup: f64 = 0.0;
        for k in k_lo..=k_hi {
            let beta = model.saddle_beta(k as f64, w)?;
            let (w_inf, chi) = limit.eval(model, beta)?;
            let c = model.cumulant_set(beta, 2 * r + 2, chi[..2 * r].to_vec())?;
            let value = saddle_expansion_value(r, &c, w_inf, w, k as f64)?;
            let lhs = scaled_count(s, k, beta, model.phi(beta), w);
            sup = sup.max((lhs - value).abs());
        }
        report.series.push(SeriesPoint {
            n: s.n,
            statistic: w.powi(r as i32 + 1) * sup,
            prediction: Some(0.0),
        });
    }
    if limit.is_exact() {
        report.notes.push("limit functions evaluated exactly at every saddle point".into());
    }
    summarise(&mut report);
    Ok(report)
}
