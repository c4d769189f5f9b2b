//! Mode and width harnesses.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::estimators::LimitEstimate;
use crate::models::ModelSpec;
use crate::simulator::{mode_width, ModeWidthStats, RunTrace};

use super::{PassIf, SeriesPoint, TheoremReport};

#[derive(Clone, Copy, Debug)]
pub struct ModeCheckOptions {
    /// Snapshots with smaller `n` are ignored.
    pub n_min: u64,
}

impl Default for ModeCheckOptions {
    fn default() -> Self {
        ModeCheckOptions { n_min: 10_000 }
    }
}

/// `u_n* = phi'(0) log n + chi_1(0) - kappa_3(0) / (2 sigma^2(0))`.
pub fn u_star(model: &ModelSpec, n: u64, chi1: f64) -> f64 {
    model.phi_deriv(1, 0.0) * (n as f64).ln() + chi1 - model.phi_deriv(3, 0.0) / (2.0 * model.phi_deriv(2, 0.0))
}

/// `chi_2(0) + kappa_3^2 / (6 sigma^4) - kappa_4 / (4 sigma^2)`.
pub fn width_limit(model: &ModelSpec, chi2: f64) -> f64 {
    let s2 = model.phi_deriv(2, 0.0);
    let k3 = model.phi_deriv(3, 0.0);
    let k4 = model.phi_deriv(4, 0.0);
    chi2 + k3 * k3 / (6.0 * s2 * s2) - k4 / (4.0 * s2)
}

/// Nearest integer, half-integers rounded down.
fn nint(u: f64) -> i64 {
    (u - 0.5).ceil() as i64
}

fn check_source(chi_source: &LimitEstimate, needed: usize) -> Result<()> {
    if chi_source.beta != 0.0 {
        return Err(Error::InvalidInput(format!(
            "mode and width need estimates at beta = 0, got {}",
            chi_source.beta
        )));
    }
    if chi_source.chi_hat.len() < needed {
        return Err(Error::InsufficientCumulants { what: "chi_hat", needed, have: chi_source.chi_hat.len() });
    }
    Ok(())
}

/// Fills the predicted quantities of [`ModeWidthStats`].
pub fn mode_width_stats(model: &ModelSpec, s: &crate::simulator::ProfileSnapshot, chi1: f64) -> Result<ModeWidthStats> {
    let mut st = mode_width(s)?;
    let u = u_star(model, s.n, chi1);
    let theta = (u - u.round()).abs();
    let w = s.w_n();
    let sigma = model.sigma(0.0);
    let ratio = (2.0 * PI * w).sqrt() * sigma * st.m_n as f64 / (model.m0() * s.n as f64);
    st.u_star = Some(u);
    st.theta_n = Some(theta);
    st.m_tilde = Some(2.0 * sigma * sigma * w * (1.0 - ratio));
    Ok(st)
}

/// Whether the empirical mode lies in `{floor(u*), ceil(u*)}` at every
/// snapshot with `n >= n_min`, plus the fraction of snapshots where the
/// mode is unique and equals `nint(u*)`. The snapshot grid samples `n`
/// non-uniformly, so the latter only approximates an asymptotic density.
pub fn mode_check(run: &RunTrace, model: &ModelSpec, chi_source: &LimitEstimate, opts: ModeCheckOptions) -> Result<TheoremReport> {
    check_source(chi_source, 1)?;
    let chi1 = chi_source.chi_hat[0];
    let mut report = TheoremReport::new("mode_check", "fraction_floor_ceil", PassIf::AtLeast);
    report.model = Some(model.name().to_string());
    report.seed = Some(run.seed);
    report.beta = Some(0.0);
    report.predicted.insert("chi_hat_1".into(), chi1);
    report.predicted.insert("offset".into(), chi1 - model.phi_deriv(3, 0.0) / (2.0 * model.phi_deriv(2, 0.0)));
    let (mut used, mut hits, mut nint_hits, mut ties) = (0usize, 0usize, 0usize, 0usize);
    for s in run.snapshots.iter().filter(|s| s.n >= opts.n_min.max(2)) {
        let st = mode_width_stats(model, s, chi1)?;
        let u = st.u_star.unwrap_or(f64::NAN);
        used += 1;
        if st.u_n == u.floor() as i64 || st.u_n == u.ceil() as i64 {
            hits += 1;
        }
        if !st.tie && st.u_n == nint(u) {
            nint_hits += 1;
        }
        if st.tie {
            ties += 1;
        }
        report.series.push(SeriesPoint { n: s.n, statistic: st.u_n as f64, prediction: Some(u) });
    }
    if used == 0 {
        report.notes.push(format!("no snapshot with n >= {}", opts.n_min));
    } else {
        report.summary.insert("fraction_floor_ceil".into(), hits as f64 / used as f64);
        report.summary.insert("fraction_nint_unique".into(), nint_hits as f64 / used as f64);
    }
    report.summary.insert("snapshots".into(), used as f64);
    report.summary.insert("ties".into(), ties as f64);
    report.summary.insert("n_min".into(), opts.n_min as f64);
    Ok(report)
}

/// First-order width ratio `sqrt(2 pi log n) sigma(0) M_n / (m(0) n)` and the
/// series `M~_n - theta_n^2` against its predicted limit.
pub fn width_check(run: &RunTrace, model: &ModelSpec, chi_source: &LimitEstimate, opts: ModeCheckOptions) -> Result<TheoremReport> {
    check_source(chi_source, 2)?;
    let (chi1, chi2) = (chi_source.chi_hat[0], chi_source.chi_hat[1]);
    let limit = width_limit(model, chi2);
    let mut report = TheoremReport::new("width_check", "first_order_gap", PassIf::AtMost);
    report.model = Some(model.name().to_string());
    report.seed = Some(run.seed);
    report.beta = Some(0.0);
    report.predicted.insert("limit".into(), limit);
    report.predicted.insert("chi_hat_2".into(), chi2);
    if model.phi_deriv(1, 0.0) != 0.0 {
        // theta_n^2 sweeps [0, 1/4]
        report.predicted.insert("interval_lo".into(), limit);
        report.predicted.insert("interval_hi".into(), limit + 0.25);
    }
    let sigma = model.sigma(0.0);
    let mut last_ratio = None;
    for s in run.snapshots.iter().filter(|s| s.n >= opts.n_min.max(2)) {
        let st = mode_width_stats(model, s, chi1)?;
        let theta = st.theta_n.unwrap_or(f64::NAN);
        let m_tilde = st.m_tilde.unwrap_or(f64::NAN);
        last_ratio = Some((2.0 * PI * s.w_n()).sqrt() * sigma * st.m_n as f64 / (model.m0() * s.n as f64));
        report.series.push(SeriesPoint { n: s.n, statistic: m_tilde - theta * theta, prediction: Some(limit) });
    }
    if let Some(r) = last_ratio {
        report.summary.insert("first_order_ratio".into(), r);
        report.summary.insert("first_order_gap".into(), (r - 1.0).abs());
    }
    if let Some(v) = report.final_statistic() {
        report.summary.insert("final".into(), v);
        report.summary.insert("final_minus_limit".into(), v - limit);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nint_rounds_half_down() {
        assert_eq!(nint(2.5), 2);
        assert_eq!(nint(2.51), 3);
        assert_eq!(nint(-1.5), -2);
        assert_eq!(nint(3.2), 3);
    }

    #[test]
    fn bst_predictions() {
        let bst = ModelSpec::bst();
        let n = 1_000_000u64;
        let u = u_star(&bst, n, 0.3);
        assert!((u - (2.0 * (n as f64).ln() + 0.3 - 0.5)).abs() < 1e-12);
        assert!((width_limit(&bst, 0.7) - (0.7 - 1.0 / 12.0)).abs() < 1e-15);
        let vb = ModelSpec::vertical_bst();
        assert!((u_star(&vb, n, 0.3) - 0.3).abs() < 1e-15);
    }
}
