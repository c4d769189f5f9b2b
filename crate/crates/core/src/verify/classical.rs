//! Classical lattice Edgeworth expansion for sums of i.i.d. integer
//! variables, checked against the exact law of the sum.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive, Zero};

use crate::cumulants::CumulantSet;
use crate::error::{Error, Result};
use crate::estimators::moments_to_cumulants;
use crate::expansion::Expansion;

use super::{PassIf, SeriesPoint, TheoremReport};

/// Largest `n` accepted by [`classical_edgeworth_check`].
pub const MAX_N: u64 = 4096;

/// Per-`n` diagnostics of the classical check.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalOutcome {
    pub n: u64,
    /// `n^{(r+1)/2} sup_k |P[S_n = k] - expansion(k)|`.
    pub e_r: f64,
    pub sup_error: f64,
    /// Total mass of the exact law, `1` up to rounding.
    pub convolution_sum: f64,
    /// Sum of the expansion over the support of `S_n`.
    pub expansion_sum: f64,
}

/// Smallest `a` with support in `a Z + b`; errors if `a > 1`.
pub fn lattice_span(pmf: &[(i64, f64)]) -> Result<i64> {
    let support: Vec<i64> = pmf.iter().filter(|&&(_, p)| p > 0.0).map(|&(k, _)| k).collect();
    let first = *support.first().ok_or_else(|| Error::InvalidInput("empty pmf".into()))?;
    let span = support.iter().fold(0i64, |g, &k| g.gcd(&(k - first)));
    if span == 0 {
        return Err(Error::InvalidInput("degenerate pmf: variance is zero".into()));
    }
    if span > 1 {
        return Err(Error::Sublattice { a: span, b: first.rem_euclid(span) });
    }
    Ok(span)
}

fn normalise(pmf: &[(i64, f64)]) -> Result<(i64, Vec<f64>)> {
    if pmf.iter().any(|&(_, p)| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidInput("probabilities must be finite and non-negative".into()));
    }
    let total: f64 = pmf.iter().map(|&(_, p)| p).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("probabilities sum to {total}, not 1")));
    }
    let lo = pmf.iter().filter(|&&(_, p)| p > 0.0).map(|&(k, _)| k).min().unwrap_or(0);
    let hi = pmf.iter().filter(|&&(_, p)| p > 0.0).map(|&(k, _)| k).max().unwrap_or(0);
    let mut dense = vec![0.0; (hi - lo + 1) as usize];
    for &(k, p) in pmf.iter().filter(|&&(_, p)| p > 0.0) {
        dense[(k - lo) as usize] += p;
    }
    Ok((lo, dense))
}

/// Exact law of `S_n` by iterated convolution: `(min support, masses)`.
pub fn exact_convolution(pmf: &[(i64, f64)], n: u64) -> Result<(i64, Vec<f64>)> {
    let (lo, step) = normalise(pmf)?;
    let mut law = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; law.len() + step.len() - 1];
        for (i, &a) in law.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in step.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        law = next;
    }
    Ok((lo * n as i64, law))
}

/// Cumulants `kappa_1 .. kappa_order` of the pmf, computed exactly from the
/// binary values of its probabilities.
fn exact_cumulants(pmf: &[(i64, f64)], order: usize) -> Result<Vec<f64>> {
    let q: Vec<(BigRational, BigRational)> = pmf
        .iter()
        .map(|&(k, p)| {
            let p = BigRational::from_f64(p).ok_or_else(|| Error::InvalidInput(format!("bad probability {p}")))?;
            Ok((BigRational::from_integer(k.into()), p))
        })
        .collect::<Result<_>>()?;
    let total = q.iter().fold(BigRational::zero(), |s, (_, p)| s + p);
    let mean = q.iter().fold(BigRational::zero(), |s, (k, p)| s + k * p) / &total;
    let central: Vec<BigRational> = (2..=order)
        .map(|j| {
            q.iter().fold(BigRational::zero(), |s, (k, p)| {
                let d = k - &mean;
                let mut pow = BigRational::from_integer(1.into());
                for _ in 0..j {
                    pow *= &d;
                }
                s + pow * p
            }) / &total
        })
        .collect();
    Ok(moments_to_cumulants(mean, &central)?
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect())
}

/// Per-`n` errors of the order-`r` lattice expansion with `W = 1` and all
/// random cumulants removed.
pub fn classical_outcomes(pmf: &[(i64, f64)], n_list: &[u64], r: usize) -> Result<Vec<ClassicalOutcome>> {
    lattice_span(pmf)?;
    if let Some(&n) = n_list.iter().find(|&&n| n == 0 || n > MAX_N) {
        return Err(Error::InvalidInput(format!("n = {n} outside 1..={MAX_N}")));
    }
    let kappa = exact_cumulants(pmf, r + 2)?;
    let sigma = kappa[1].sqrt();
    let c = CumulantSet::new(0.0, kappa, vec![0.0; r], sigma)?;
    let expansion = Expansion::new(&c, 1.0, r)?;
    n_list
        .iter()
        .map(|&n| {
            let (start, law) = exact_convolution(pmf, n)?;
            let w = n as f64;
            let mut sup: f64 = 0.0;
            let mut expansion_sum = 0.0;
            for (i, &p) in law.iter().enumerate() {
                let e = expansion.value(w, (start + i as i64) as f64)?;
                expansion_sum += e;
                sup = sup.max((p - e).abs());
            }
            Ok(ClassicalOutcome {
                n,
                e_r: w.powf((r as f64 + 1.0) / 2.0) * sup,
                sup_error: sup,
                convolution_sum: law.iter().sum(),
                expansion_sum,
            })
        })
        .collect()
}

/// Series of `E_r(n)`; the headline is `last_over_first`.
pub fn classical_edgeworth_check(pmf: &[(i64, f64)], n_list: &[u64], r: usize) -> Result<TheoremReport> {
    let outcomes = classical_outcomes(pmf, n_list, r)?;
    let mut report = TheoremReport::new("classical", "last_over_first", PassIf::AtMost);
    report.r = Some(r);
    report.beta = Some(0.0);
    for o in &outcomes {
        report.series.push(SeriesPoint { n: o.n, statistic: o.e_r, prediction: None });
    }
    if let (Some(first), Some(last)) = (outcomes.first(), outcomes.last()) {
        report.summary.insert("first".into(), first.e_r);
        report.summary.insert("final".into(), last.e_r);
        report.summary.insert("last_over_first".into(), last.e_r / first.e_r);
    }
    let mass_gap = outcomes.iter().fold(0.0f64, |m, o| m.max((o.convolution_sum - 1.0).abs()));
    let expansion_gap = outcomes.iter().fold(0.0f64, |m, o| m.max((o.expansion_sum - 1.0).abs()));
    report.summary.insert("max_convolution_mass_gap".into(), mass_gap);
    report.summary.insert("max_expansion_mass_gap".into(), expansion_gap);
    let pmf_text: Vec<String> = pmf.iter().map(|(k, p)| format!("{k}:{p}")).collect();
    report.notes.push(format!("pmf {}", pmf_text.join(",")));
    Ok(report)
}
