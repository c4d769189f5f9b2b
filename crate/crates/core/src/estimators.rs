//! Estimates of `W_inf(beta)` and `chi_j(beta)` from simulated profiles,
//! moment/cumulant conversion, and convergence diagnostics.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::bell::bell_sequence;
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::scalar::{binomial, Scalar};
use crate::simulator::{jabbour_J, laplace_W, tilted_cumulants, ProfileSnapshot, RunTrace};

/// Highest cumulant order supported by the conversions.
pub const MAX_CUMULANT_ORDER: usize = 8;

/// Cumulants `chi_1 .. chi_J` from the mean and the central moments
/// `m_2 .. m_J`, by `k_n = m_n - sum_{j=2}^{n-2} C(n-1, j-1) k_j m_{n-j}`.
pub fn moments_to_cumulants<T: Scalar>(mean: T, central: &[T]) -> Result<Vec<T>> {
    let order = central.len() + 1;
    if order > MAX_CUMULANT_ORDER {
        return Err(Error::Unsupported(format!(
            "cumulant order {order} exceeds {MAX_CUMULANT_ORDER}"
        )));
    }
    // m[i] = i-th central moment
    let mut m = vec![T::one(), T::zero()];
    m.extend_from_slice(central);
    let mut k = vec![T::zero(); order + 1];
    for n in 2..=order {
        let mut acc = m[n].clone();
        for j in 2..n {
            let c = T::from_i64(binomial(n as u64 - 1, j as u64 - 1) as i64);
            acc = acc - c * k[j].clone() * m[n - j].clone();
        }
        k[n] = acc;
    }
    k[1] = mean;
    Ok(k.split_off(1))
}

/// Inverse of [`moments_to_cumulants`]: returns `(mean, [m_2 .. m_J])`.
pub fn cumulants_to_moments<T: Scalar>(cumulants: &[T]) -> Result<(T, Vec<T>)> {
    if cumulants.is_empty() {
        return Err(Error::InvalidInput("no cumulants given".into()));
    }
    if cumulants.len() > MAX_CUMULANT_ORDER {
        return Err(Error::Unsupported(format!(
            "cumulant order {} exceeds {MAX_CUMULANT_ORDER}",
            cumulants.len()
        )));
    }
    let mut centred = cumulants.to_vec();
    centred[0] = T::zero();
    let b = bell_sequence(&centred);
    Ok((cumulants[0].clone(), b[2..].to_vec()))
}

/// Estimates of the limit objects at one tilt.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub beta: f64,
    #[serde(rename = "W_hat")]
    pub w_hat: f64,
    pub chi_hat: Vec<f64>,
    pub n_used: u64,
    pub stderr: Option<Vec<f64>>,
}

/// `W_n(beta)` and `chi_{j,n}(beta) - phi^(j)(beta) log n` at one snapshot.
pub fn estimate_at(snapshot: &ProfileSnapshot, model: &ModelSpec, beta: f64, order: usize) -> Result<LimitEstimate> {
    let raw = tilted_cumulants(snapshot, beta, order)?;
    let w_n = snapshot.w_n();
    let chi_hat = raw
        .iter()
        .enumerate()
        .map(|(i, c)| c - model.phi_deriv(i as u32 + 1, beta) * w_n)
        .collect();
    Ok(LimitEstimate {
        beta,
        w_hat: laplace_W(snapshot, model, beta)?,
        chi_hat,
        n_used: snapshot.n,
        stderr: None,
    })
}

/// Estimates from the largest snapshot of a run. With `richardson` the
/// estimates of the last two snapshots are averaged.
pub fn estimate_chi(run: &RunTrace, model: &ModelSpec, beta: f64, order: usize, richardson: bool) -> Result<LimitEstimate> {
    if let Ok(range) = model.beta_range() {
        if !range.contains(beta) {
            warn!("beta = {beta} lies outside (beta_-, beta_+); the limit may vanish or oscillate");
        }
    }
    let last = run.last();
    if last.n < 1000 {
        warn!("estimating limits from a run with only {} steps", last.n);
    }
    let est = estimate_at(last, model, beta, order)?;
    if !richardson || run.snapshots.len() < 2 {
        return Ok(est);
    }
    let prev = estimate_at(&run.snapshots[run.snapshots.len() - 2], model, beta, order)?;
    Ok(LimitEstimate {
        w_hat: 0.5 * (est.w_hat + prev.w_hat),
        chi_hat: est
            .chi_hat
            .iter()
            .zip(&prev.chi_hat)
            .map(|(a, b)| 0.5 * (a + b))
            .collect(),
        ..est
    })
}

/// Largest successive change of each `chi_hat_j` over the last three
/// snapshots.
pub fn chi_stability(run: &RunTrace, model: &ModelSpec, beta: f64, order: usize) -> Result<Vec<f64>> {
    let tail = &run.snapshots[run.snapshots.len().saturating_sub(3)..];
    let ests = tail
        .iter()
        .map(|s| estimate_at(s, model, beta, order))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..order)
        .map(|j| {
            ests.windows(2)
                .map(|w| (w[1].chi_hat[j] - w[0].chi_hat[j]).abs())
                .fold(0.0, f64::max)
        })
        .collect())
}

/// Per-snapshot statistics averaged over replicates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Statistic {
    /// `W_n(beta)`.
    W(f64),
    /// Jabbour martingale `J_n(beta)`.
    J(f64),
    /// `L_n(k)`.
    Occupation(i64),
    /// `S_n`.
    Total,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicateSummary {
    pub n: u64,
    pub mean: f64,
    pub stderr: f64,
    pub replicates: usize,
}

/// Mean and standard error per snapshot of an arbitrary statistic.
pub fn replicate_series<F>(runs: &[RunTrace], mut stat: F) -> Result<Vec<ReplicateSummary>>
where
    F: FnMut(&ProfileSnapshot) -> Result<f64>,
{
    if runs.len() < 2 {
        return Err(Error::InvalidInput("need at least two replicates".into()));
    }
    let steps = runs[0].steps();
    if runs.iter().any(|r| r.steps() != steps) {
        return Err(Error::MismatchedSchedules);
    }
    let count = runs.len();
    (0..steps.len())
        .map(|i| {
            let values = runs
                .iter()
                .map(|r| stat(&r.snapshots[i]))
                .collect::<Result<Vec<f64>>>()?;
            let (mean, stderr) = mean_stderr(&values);
            Ok(ReplicateSummary { n: steps[i], mean, stderr, replicates: count })
        })
        .collect()
}

pub fn replicate_moments(runs: &[RunTrace], model: &ModelSpec, statistic: Statistic) -> Result<Vec<ReplicateSummary>> {
    replicate_series(runs, |s| match statistic {
        Statistic::W(beta) => laplace_W(s, model, beta),
        Statistic::J(beta) => jabbour_J(s, model, beta),
        Statistic::Occupation(k) => Ok(s.count(k) as f64),
        Statistic::Total => Ok(s.total as f64),
    })
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Unbiased sample variance.
pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendReport {
    /// Fraction of successive pairs that decrease.
    pub monotone_fraction: f64,
    pub last_over_first_ratio: f64,
}

pub fn trend(series: &[(u64, f64)]) -> Result<TrendReport> {
    if series.len() < 3 {
        return Err(Error::InvalidInput("trend needs at least three points".into()));
    }
    let drops = series.windows(2).filter(|w| w[1].1 < w[0].1).count();
    let first = series[0].1;
    let last = series[series.len() - 1].1;
    let ratio = if first == last { 1.0 } else { last / first };
    Ok(TrendReport {
        monotone_fraction: drops as f64 / (series.len() - 1) as f64,
        last_over_first_ratio: ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::grow;
    use num_rational::BigRational as Q;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bernoulli_cumulants() {
        let q = |n, d| Q::from_ratio(n, d);
        // Bernoulli(1/2): central moments 1/4, 0, 1/16
        let k = moments_to_cumulants(q(1, 2), &[q(1, 4), q(0, 1), q(1, 16)]).unwrap();
        assert_eq!(k, vec![q(1, 2), q(1, 4), q(0, 1), q(-1, 8)]);
    }

    #[test]
    fn fourth_cumulant_formula() {
        let k = moments_to_cumulants(1.0, &[2.0, 3.0, 17.0]).unwrap();
        assert_eq!(k, vec![1.0, 2.0, 3.0, 17.0 - 3.0 * 4.0]);
    }

    #[test]
    fn point_mass() {
        let k = moments_to_cumulants(3.0, &[0.0; 7]).unwrap();
        assert_eq!(k[0], 3.0);
        assert!(k[1..].iter().all(|&v| v == 0.0));
        assert!(matches!(moments_to_cumulants(0.0, &[0.0; 8]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn poisson_sample_cumulants_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let lambda = 5.0_f64;
        let n = 200_000;
        let mut draws = Vec::with_capacity(n);
        for _ in 0..n {
            // inversion sampling
            let u: f64 = rng.random();
            let (mut k, mut p) = (0u64, (-lambda).exp());
            let mut cdf = p;
            while u > cdf {
                k += 1;
                p *= lambda / k as f64;
                cdf += p;
            }
            draws.push(k);
        }
        let s = ProfileSnapshot::from_levels(1, draws.iter().fold(std::collections::BTreeMap::new(), |mut m, &k| {
            *m.entry(k as i64).or_insert(0u64) += 1;
            m
        }));
        let c = tilted_cumulants(&s, 0.0, 4).unwrap();
        for (j, v) in c.iter().enumerate() {
            assert!((v - lambda).abs() < 0.1 * lambda * (j + 1) as f64, "order {} gives {v}", j + 1);
        }
        assert!((c[0] - lambda).abs() < 0.03);
        assert!((c[1] - lambda).abs() < 0.1);
    }

    #[test]
    fn bst_exact_estimates() {
        let bst = ModelSpec::bst();
        let run = grow(&bst, 2000, 3, &[500, 1000]).unwrap();
        let e = estimate_chi(&run, &bst, -(2f64.ln()), 2, false).unwrap();
        assert!((e.w_hat - 1.0).abs() < 1e-12);
        let e0 = estimate_chi(&run, &bst, 0.0, 1, false).unwrap();
        let s = run.last();
        let mean = s.levels().map(|(k, c)| k as f64 * c as f64).sum::<f64>() / s.total as f64;
        assert!((e0.chi_hat[0] - (mean - 2.0 * (2000f64).ln())).abs() < 1e-10);
        let r = estimate_chi(&run, &bst, 0.0, 1, true).unwrap();
        assert_ne!(r.chi_hat, e0.chi_hat);
        assert_eq!(chi_stability(&run, &bst, 0.0, 2).unwrap().len(), 2);
    }

    #[test]
    fn replicate_bookkeeping() {
        let bst = ModelSpec::bst();
        let runs: Vec<RunTrace> = (0..4).map(|s| grow(&bst, 50, s, &[10]).unwrap()).collect();
        let totals = replicate_moments(&runs, &bst, Statistic::Total).unwrap();
        assert_eq!(totals[1].mean, 51.0);
        assert_eq!(totals[1].stderr, 0.0);
        let mut other = runs.clone();
        other.push(grow(&bst, 50, 9, &[20]).unwrap());
        assert!(matches!(
            replicate_moments(&other, &bst, Statistic::Total),
            Err(Error::MismatchedSchedules)
        ));
        assert!(replicate_moments(&runs[..1], &bst, Statistic::Total).is_err());
    }

    #[test]
    fn trend_summary() {
        let t = trend(&[(1, 3.0), (2, 2.0), (3, 1.0)]).unwrap();
        assert_eq!(t.monotone_fraction, 1.0);
        assert_eq!(t.last_over_first_ratio, 1.0 / 3.0);
        let c = trend(&[(1, 2.0), (2, 2.0), (3, 2.0)]).unwrap();
        assert_eq!(c.last_over_first_ratio, 1.0);
        assert!(trend(&[(1, 1.0), (2, 0.5)]).is_err());
    }
}
