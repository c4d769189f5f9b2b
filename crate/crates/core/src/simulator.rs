//! Discrete-time growth of one-split branching random walks.
//!
//! At every step a uniformly chosen particle at `x` is removed and replaced by
//! particles at `x + Z_1, ..., x + Z_N` for an independent cluster draw.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::moments_to_cumulants;
use crate::models::ModelSpec;

/// The profile `L_n(k)` after `n` splits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSnapshot {
    pub n: u64,
    /// Lowest occupied level; `counts[i]` is `L_n(min_level + i)`.
    pub min_level: i64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl ProfileSnapshot {
    /// Builds a snapshot from `(level, count)` pairs; zero counts are dropped.
    pub fn from_levels(n: u64, levels: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let pairs: Vec<(i64, u64)> = levels.into_iter().filter(|&(_, c)| c > 0).collect();
        let Some(min) = pairs.iter().map(|p| p.0).min() else {
            return ProfileSnapshot { n, min_level: 0, counts: Vec::new(), total: 0 };
        };
        let max = pairs.iter().map(|p| p.0).max().unwrap_or(min);
        let mut counts = vec![0u64; (max - min + 1) as usize];
        for (k, c) in pairs {
            counts[(k - min) as usize] += c;
        }
        let total = counts.iter().sum();
        ProfileSnapshot { n, min_level: min, counts, total }
    }

    fn from_dense(n: u64, base: i64, dense: &[u64]) -> Self {
        let first = dense.iter().position(|&c| c > 0);
        let last = dense.iter().rposition(|&c| c > 0);
        match (first, last) {
            (Some(f), Some(l)) => {
                let counts = dense[f..=l].to_vec();
                let total = counts.iter().sum();
                ProfileSnapshot { n, min_level: base + f as i64, counts, total }
            }
            _ => ProfileSnapshot { n, min_level: 0, counts: Vec::new(), total: 0 },
        }
    }

    pub fn max_level(&self) -> i64 {
        self.min_level + self.counts.len() as i64 - 1
    }

    /// `log n`.
    pub fn w_n(&self) -> f64 {
        (self.n as f64).ln()
    }

    /// `L_n(k)`, zero outside the occupied range.
    pub fn count(&self, k: i64) -> u64 {
        let i = k - self.min_level;
        if i < 0 {
            return 0;
        }
        self.counts.get(i as usize).copied().unwrap_or(0)
    }

    /// Occupied and empty levels between the extremes.
    pub fn levels(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.min_level + i as i64, c))
    }

    /// `ln sum_k L(k) e^{beta k}`.
    pub fn ln_laplace(&self, beta: f64) -> f64 {
        let shift = self
            .levels()
            .filter(|&(_, c)| c > 0)
            .map(|(k, _)| beta * k as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = self
            .levels()
            .filter(|&(_, c)| c > 0)
            .map(|(k, c)| c as f64 * (beta * k as f64 - shift).exp())
            .sum();
        shift + sum.ln()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("level,count\n");
        for (k, c) in self.levels().filter(|&(_, c)| c > 0) {
            let _ = writeln!(s, "{k},{c}");
        }
        s
    }

    pub fn from_csv(n: u64, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next().map(str::trim) {
            Some("level,count") => {}
            other => return Err(Error::Parse(format!("bad profile header {other:?}"))),
        }
        let mut pairs = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (k, c) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad profile row {line:?}")))?;
            let k = k.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{line:?}: {e}")))?;
            let c = c.trim().parse::<u64>().map_err(|e| Error::Parse(format!("{line:?}: {e}")))?;
            pairs.push((k, c));
        }
        Ok(Self::from_levels(n, pairs))
    }
}

/// The output of one seeded run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub model: String,
    pub seed: u64,
    pub snapshots: Vec<ProfileSnapshot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_positions: Option<Vec<i64>>,
}

impl RunTrace {
    pub fn last(&self) -> &ProfileSnapshot {
        self.snapshots.last().expect("a run always records its final snapshot")
    }

    pub fn steps(&self) -> Vec<u64> {
        self.snapshots.iter().map(|s| s.n).collect()
    }

    /// Writes `run.json` plus one `profile_<n>.csv` per snapshot into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut entries = Vec::new();
        for s in &self.snapshots {
            let name = format!("profile_{}.csv", s.n);
            let path = dir.join(&name);
            fs::write(&path, s.to_csv()).map_err(|e| Error::io(&path, e))?;
            entries.push(SnapshotEntry {
                n: s.n,
                total: s.total,
                min_level: s.min_level,
                max_level: s.max_level(),
                counts_csv_path: name,
            });
        }
        let index = TraceIndex { model: self.model.clone(), seed: self.seed, snapshots: entries };
        let path = dir.join("run.json");
        let text = serde_json::to_string_pretty(&index)?;
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// Reads a directory written by [`RunTrace::write_dir`].
    pub fn read_dir(dir: &Path) -> Result<Self> {
        let path = dir.join("run.json");
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let index: TraceIndex = serde_json::from_str(&text)?;
        let mut snapshots = Vec::with_capacity(index.snapshots.len());
        for e in index.snapshots {
            let p = dir.join(&e.counts_csv_path);
            let csv = fs::read_to_string(&p).map_err(|err| Error::io(&p, err))?;
            snapshots.push(ProfileSnapshot::from_csv(e.n, &csv)?);
        }
        Ok(RunTrace { model: index.model, seed: index.seed, snapshots, final_positions: None })
    }
}

#[derive(Serialize, Deserialize)]
struct SnapshotEntry {
    n: u64,
    #[serde(rename = "S")]
    total: u64,
    min_level: i64,
    max_level: i64,
    counts_csv_path: String,
}

#[derive(Serialize, Deserialize)]
struct TraceIndex {
    model: String,
    seed: u64,
    snapshots: Vec<SnapshotEntry>,
}

/// Seed of replicate `r`, derived from the base seed by a 64-bit mix.
pub fn replicate_seed(seed: u64, r: u64) -> u64 {
    splitmix64(seed ^ splitmix64(r.wrapping_add(0x6a09_e667_f3bc_c909)))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `ceil(n0 gamma^i)` for `i = 0, 1, ...` up to `n_max`, deduplicated.
pub fn geometric_schedule(n0: f64, gamma: f64, n_max: u64) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    let mut i = 0;
    loop {
        let raw = n0 * gamma.powi(i);
        // snap values that are integers up to rounding, e.g. 1000 * (10^{1/4})^4
        let v = if (raw - raw.round()).abs() <= 1e-9 * raw { raw.round() } else { raw.ceil() };
        if v > n_max as f64 {
            break;
        }
        let v = v as u64;
        if out.last() != Some(&v) {
            out.push(v);
        }
        i += 1;
    }
    out
}

/// The default grid `ceil(1000 * 10^{i/4})`.
pub fn default_schedule(n_max: u64) -> Vec<u64> {
    geometric_schedule(1000.0, 10f64.powf(0.25), n_max)
}

/// A running simulation, advanced one split at a time.
pub struct Simulation<'a> {
    model: &'a ModelSpec,
    rng: ChaCha8Rng,
    positions: Vec<i64>,
    base: i64,
    counts: Vec<u64>,
    n: u64,
}

impl<'a> Simulation<'a> {
    pub fn new(model: &'a ModelSpec, seed: u64) -> Self {
        let x0 = model.initial_position();
        Simulation {
            model,
            rng: ChaCha8Rng::seed_from_u64(seed),
            positions: vec![x0],
            base: x0,
            counts: vec![1],
            n: 0,
        }
    }

    pub fn steps(&self) -> u64 {
        self.n
    }

    pub fn particles(&self) -> usize {
        self.positions.len()
    }

    fn add(&mut self, k: i64) {
        if k < self.base {
            let grow = ((self.base - k) as usize).max(self.counts.len());
            let mut fresh = vec![0u64; grow];
            fresh.extend_from_slice(&self.counts);
            self.counts = fresh;
            self.base -= grow as i64;
        }
        let i = (k - self.base) as usize;
        if i >= self.counts.len() {
            let new_len = (i + 1).max(2 * self.counts.len());
            self.counts.resize(new_len, 0);
        }
        self.counts[i] += 1;
        self.positions.push(k);
    }

    /// Performs one split. Returns `false` when no particle is left.
    pub fn step(&mut self) -> bool {
        if self.positions.is_empty() {
            return false;
        }
        let idx = self.rng.random_range(0..self.positions.len() as u64) as usize;
        let x = self.positions.swap_remove(idx);
        self.counts[(x - self.base) as usize] -= 1;
        let cluster = self.model.cluster();
        let atoms = cluster.atoms();
        let atom = if atoms.len() == 1 {
            &atoms[0]
        } else {
            let u: f64 = self.rng.random();
            let cum = cluster.cumulative();
            let j = cum.iter().position(|&c| u < c).unwrap_or(atoms.len() - 1);
            &atoms[j]
        };
        for &z in &atom.offsets {
            self.add(x + z);
        }
        self.n += 1;
        true
    }

    pub fn snapshot(&self) -> ProfileSnapshot {
        ProfileSnapshot::from_dense(self.n, self.base, &self.counts)
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }
}

fn validate_schedule(n_target: u64, schedule: &[u64]) -> Result<Vec<u64>> {
    let mut s = schedule.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&v| v > n_target) {
        return Err(Error::InvalidInput(format!(
            "snapshot step {bad} exceeds n_target = {n_target}"
        )));
    }
    if s.last() != Some(&n_target) {
        s.push(n_target);
    }
    Ok(s)
}

fn run(model: &ModelSpec, n_target: u64, seed: u64, schedule: &[u64], keep: bool) -> Result<RunTrace> {
    let schedule = validate_schedule(n_target, schedule)?;
    let mut sim = Simulation::new(model, seed);
    let mut snapshots = Vec::with_capacity(schedule.len());
    for &target in &schedule {
        while sim.steps() < target {
            if !sim.step() {
                return Err(Error::InvalidInput(format!(
                    "population of {} died out at step {}",
                    model.name(),
                    sim.steps()
                )));
            }
        }
        snapshots.push(sim.snapshot());
    }
    Ok(RunTrace {
        model: model.name().to_string(),
        seed,
        snapshots,
        final_positions: keep.then(|| sim.positions().to_vec()),
    })
}

/// Runs `n_target` splits and records the profile at every scheduled step
/// and at the end.
pub fn grow(model: &ModelSpec, n_target: u64, seed: u64, schedule: &[u64]) -> Result<RunTrace> {
    run(model, n_target, seed, schedule, false)
}

/// As [`grow`], also keeping the final particle positions.
pub fn grow_keep_positions(model: &ModelSpec, n_target: u64, seed: u64, schedule: &[u64]) -> Result<RunTrace> {
    run(model, n_target, seed, schedule, true)
}

/// Independent replicates with seeds `replicate_seed(seed, r)`, run in
/// parallel on the current rayon pool.
pub fn grow_replicates(
    model: &ModelSpec,
    n_target: u64,
    seed: u64,
    schedule: &[u64],
    replicates: u64,
) -> Result<Vec<RunTrace>> {
    (0..replicates)
        .into_par_iter()
        .map(|r| grow(model, n_target, replicate_seed(seed, r), schedule))
        .collect()
}

/// `W_n(beta) = n^{-phi(beta)} sum_k L_n(k) e^{beta k}`.
#[allow(non_snake_case)]
pub fn laplace_W(snapshot: &ProfileSnapshot, model: &ModelSpec, beta: f64) -> Result<f64> {
    if snapshot.n == 0 {
        return Err(Error::InvalidInput("W_n needs n >= 1".into()));
    }
    Ok((snapshot.ln_laplace(beta) - model.phi(beta) * snapshot.w_n()).exp())
}

/// Jabbour martingale `e^{-beta x_0} n^{phi(beta)} W_n(beta) / alpha_n(beta)`;
/// mean one for deterministic offspring numbers.
#[allow(non_snake_case)]
pub fn jabbour_J(snapshot: &ProfileSnapshot, model: &ModelSpec, beta: f64) -> Result<f64> {
    let ln_alpha = model.ln_jabbour_normalizer(snapshot.n, beta)?;
    let x0 = model.initial_position() as f64;
    Ok((snapshot.ln_laplace(beta) - beta * x0 - ln_alpha).exp())
}

/// Cumulants `chi_{1,n}(beta) .. chi_{J,n}(beta)` of the Gibbs measure
/// `p_k ∝ L_n(k) e^{beta k}`.
pub fn tilted_cumulants(snapshot: &ProfileSnapshot, beta: f64, order: usize) -> Result<Vec<f64>> {
    if order == 0 {
        return Err(Error::InvalidInput("need at least one cumulant".into()));
    }
    if snapshot.total == 0 {
        return Err(Error::InvalidInput("empty profile".into()));
    }
    let ln_z = snapshot.ln_laplace(beta);
    let weights: Vec<(f64, f64)> = snapshot
        .levels()
        .filter(|&(_, c)| c > 0)
        .map(|(k, c)| (k as f64, (c as f64).ln() + beta * k as f64 - ln_z))
        .map(|(k, lw)| (k, lw.exp()))
        .collect();
    let mass: f64 = weights.iter().map(|w| w.1).sum();
    let mean = weights.iter().map(|&(k, p)| k * p).sum::<f64>() / mass;
    let mut central = vec![0.0; order + 1];
    for &(k, p) in &weights {
        let d = k - mean;
        let mut pow = d;
        for m in central.iter_mut().skip(2) {
            pow *= d;
            *m += p * pow;
        }
    }
    for m in central.iter_mut().skip(2) {
        *m /= mass;
    }
    central[1] = 0.0;
    moments_to_cumulants(mean, &central[2..])
}

/// Mode and width of a profile, with the predicted quantities filled in by
/// the harnesses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeWidthStats {
    pub n: u64,
    pub u_n: i64,
    #[serde(rename = "M_n")]
    pub m_n: u64,
    pub tie: bool,
    pub u_star: Option<f64>,
    pub theta_n: Option<f64>,
    pub m_tilde: Option<f64>,
}

/// `u_n` is the smallest level attaining the maximum `M_n`.
pub fn mode_width(snapshot: &ProfileSnapshot) -> Result<ModeWidthStats> {
    let m = snapshot.counts.iter().copied().max().filter(|&m| m > 0);
    let Some(m) = m else {
        return Err(Error::InvalidInput("empty profile".into()));
    };
    let mut hits = snapshot.levels().filter(|&(_, c)| c == m);
    let (u, _) = hits.next().expect("maximum is attained");
    Ok(ModeWidthStats {
        n: snapshot.n,
        u_n: u,
        m_n: m,
        tie: hits.next().is_some(),
        u_star: None,
        theta_n: None,
        m_tilde: None,
    })
}

pub fn occupation(snapshot: &ProfileSnapshot, k: i64) -> u64 {
    snapshot.count(k)
}

/// `L_n(k) - E L_n(k)`, with the mean approximated by the second-order mean
/// expansion at the saddle point of `k` (or at `beta = 0` when `k / log n`
/// leaves the admissible cone).
pub fn occupation_centered(snapshot: &ProfileSnapshot, model: &ModelSpec, k: i64) -> Result<f64> {
    Ok(snapshot.count(k) as f64 - crate::verify::mean_occupation(model, snapshot.n, k)?)
}
