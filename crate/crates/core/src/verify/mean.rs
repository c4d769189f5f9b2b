//! Replicate means of `W_n(beta)` against the exact mean `E W_n(beta)`.

use crate::error::{Error, Result};
use crate::estimators::{replicate_moments, Statistic};
use crate::models::ModelSpec;
use crate::simulator::RunTrace;

use super::{PassIf, SeriesPoint, TheoremReport};

/// Standard-error floor; at `beta = 0` the statistic can be deterministic.
pub const SE_FLOOR: f64 = 1e-12;

/// Per snapshot, the largest over `betas` of
/// `|mean_r W_n(beta) - E W_n(beta)| / stderr`. The headline is the largest
/// such z-score over all snapshots.
pub fn mean_check(runs: &[RunTrace], model: &ModelSpec, betas: &[f64]) -> Result<TheoremReport> {
    if betas.is_empty() {
        return Err(Error::InvalidInput("need at least one beta".into()));
    }
    let mut report = TheoremReport::new("mean", "max_z", PassIf::AtMost);
    report.model = Some(model.name().to_string());
    report.seed = runs.first().map(|r| r.seed);
    let per_beta = betas
        .iter()
        .map(|&b| replicate_moments(runs, model, Statistic::W(b)))
        .collect::<Result<Vec<_>>>()?;
    let mut max_z: f64 = 0.0;
    for i in 0..per_beta[0].len() {
        let n = per_beta[0][i].n;
        let mut worst: f64 = 0.0;
        for (series, &beta) in per_beta.iter().zip(betas) {
            let exact = model.exact_mean_W(n, beta)?;
            let s = &series[i];
            worst = worst.max((s.mean - exact).abs() / s.stderr.max(SE_FLOOR));
        }
        max_z = max_z.max(worst);
        report.series.push(SeriesPoint { n, statistic: worst, prediction: Some(0.0) });
    }
    for &beta in betas {
        report.predicted.insert(format!("limit_mean_W({beta})"), model.limit_mean_W(beta)?);
    }
    report.summary.insert("max_z".into(), max_z);
    report.summary.insert("replicates".into(), runs.len() as f64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::grow_replicates;

    #[test]
    fn rrt_means_agree() {
        let rrt = ModelSpec::rrt();
        let runs = grow_replicates(&rrt, 500, 4, &[100, 500], 100).unwrap();
        let report = mean_check(&runs, &rrt, &[-0.4, 0.0, 0.4]).unwrap();
        assert_eq!(report.series.len(), 2);
        assert!(report.summary["max_z"] < 5.0);
    }
}
