//! Theorem harnesses. Each harness turns simulated or exact data into a
//! scaled error statistic per snapshot together with its predicted limit.

mod classical;
mod clt;
mod fixtures;
mod mean;
mod mode_width;
mod occupation;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

pub use classical::{classical_outcomes, classical_edgeworth_check, exact_convolution, lattice_span, ClassicalOutcome};
pub use clt::{clt_sup_error, saddle_sup_error, LimitFunction, SUP_WINDOW_SIGMAS};
pub use fixtures::Fixtures;
pub use mean::mean_check;
pub use mode_width::{mode_check, u_star, width_check, width_limit, ModeCheckOptions};
pub use occupation::{
    mean_expansion_value, mean_occupation, occupation_check, KRule, OccupationCase, ReplicateLimits,
};

/// One point of a statistic series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub n: u64,
    pub statistic: f64,
    pub prediction: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PassIf {
    AtLeast,
    AtMost,
}

/// Statistic series, predicted limits and the inputs needed to reproduce
/// them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub model: Option<String>,
    pub seed: Option<u64>,
    pub beta: Option<f64>,
    pub r: Option<usize>,
    pub series: Vec<SeriesPoint>,
    pub predicted: BTreeMap<String, f64>,
    pub summary: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    /// Summary entry compared against a fixture threshold.
    pub headline: String,
    pub pass_if: PassIf,
    pub threshold: Option<f64>,
    pub passed: Option<bool>,
}

impl TheoremReport {
    pub fn new(theorem: impl Into<String>, headline: impl Into<String>, pass_if: PassIf) -> Self {
        TheoremReport {
            theorem: theorem.into(),
            model: None,
            seed: None,
            beta: None,
            r: None,
            series: Vec::new(),
            predicted: BTreeMap::new(),
            summary: BTreeMap::new(),
            notes: Vec::new(),
            headline: headline.into(),
            pass_if,
            threshold: None,
            passed: None,
        }
    }

    pub fn headline_value(&self) -> Option<f64> {
        self.summary.get(&self.headline).copied()
    }

    /// Compares the headline statistic with `threshold` and records the
    /// outcome.
    pub fn judge(&mut self, threshold: f64) -> bool {
        let ok = match (self.headline_value(), self.pass_if) {
            (Some(v), PassIf::AtLeast) => v >= threshold,
            (Some(v), PassIf::AtMost) => v <= threshold,
            (None, _) => false,
        };
        self.threshold = Some(threshold);
        self.passed = Some(ok);
        ok
    }

    /// Plot data with header `n,statistic,prediction`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,statistic,prediction\n");
        for p in &self.series {
            let pred = p.prediction.map(|v| format!("{v:.17e}")).unwrap_or_default();
            let _ = writeln!(s, "{},{:.17e},{}", p.n, p.statistic, pred);
        }
        s
    }

    pub fn final_statistic(&self) -> Option<f64> {
        self.series.last().map(|p| p.statistic)
    }
}
