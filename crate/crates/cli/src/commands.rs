use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use edgeworth::estimators::{estimate_chi, LimitEstimate};
use edgeworth::models::{ModelDescription, ModelSpec};
use edgeworth::simulator::{grow, grow_replicates, laplace_W, mode_width, RunTrace};
use edgeworth::verify::{
    classical_edgeworth_check, clt_sup_error, mean_check, mode_check, occupation_check, saddle_sup_error,
    width_check, Fixtures, KRule, LimitFunction, ModeCheckOptions, OccupationCase, TheoremReport,
};
use edgeworth::{Error, Expansion};
use serde::Serialize;

use crate::config::{parse_count, Settings};
use crate::output::{float, to_json};
use crate::{CliError, Harness, Verdict};

const DEFAULT_N: u64 = 100_000;
const DEFAULT_PMF_N: [u64; 4] = [64, 128, 256, 512];

fn resolve(name: &str) -> Result<ModelSpec, CliError> {
    ModelSpec::resolve(name).map_err(|e| match e {
        Error::UnknownModel(_) | Error::Parse(_) => CliError::Usage(e.to_string()),
        other => other.into(),
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    println!("{}", to_json(value)?);
    Ok(())
}

pub fn models_list() -> Result<Verdict, CliError> {
    print_json(&ModelSpec::builtin_names())?;
    Ok(Verdict::Done)
}

pub fn models_describe(name: &str) -> Result<Verdict, CliError> {
    let d: ModelDescription = resolve(name)?.describe()?;
    print_json(&d)?;
    Ok(Verdict::Done)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

pub fn simulate(s: &Settings) -> Result<Verdict, CliError> {
    let model = resolve(s.model_name()?)?;
    let n = s.n.ok_or_else(|| CliError::Usage("missing --n".into()))?;
    let seed = s.seed.unwrap_or(0);
    let replicates = s.replicates.unwrap_or(1);
    if replicates == 0 {
        return Err(CliError::Usage("--replicates must be positive".into()));
    }
    let schedule = s.schedule_for(n)?;
    let out = s.out.clone().unwrap_or_else(|| PathBuf::from("run"));
    let runs = if replicates == 1 {
        vec![grow(&model, n, seed, &schedule)?]
    } else {
        grow_replicates(&model, n, seed, &schedule, replicates)?
    };
    println!("replicate,seed,n,S,mode,width,W_n(0)");
    for (i, run) in runs.iter().enumerate() {
        let dir = if replicates == 1 { out.clone() } else { out.join(format!("replicate_{i:03}")) };
        run.write_dir(&dir)?;
        for snap in &run.snapshots {
            let mw = mode_width(snap)?;
            let w0 = laplace_W(snap, &model, 0.0)?;
            println!("{i},{},{},{},{},{},{}", run.seed, snap.n, snap.total, mw.u_n, mw.m_n, float(w0));
        }
    }
    Ok(Verdict::Done)
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, value_parser = parse_count)]
    n: Option<u64>,
    /// Random cumulants `chi_1,...,chi_r`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    chi: Option<Vec<f64>>,
    /// Limit estimate JSON as printed by `report`.
    #[arg(long)]
    chi_file: Option<PathBuf>,
    /// Set every `chi_j` to zero.
    #[arg(long)]
    zero_chi: bool,
    /// Mean profile: `chi` replaced by the mean cumulants and `W` by `E W_inf`.
    #[arg(long)]
    mean: bool,
    /// Value of `W_inf(beta)`; defaults to the estimate in `--chi-file`, else 1.
    #[arg(long)]
    w: Option<f64>,
    /// Levels `LO:HI`; defaults to the mean plus or minus five standard deviations.
    #[arg(long, allow_hyphen_values = true)]
    k_range: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn chi_from_file(path: &Path, beta: f64) -> Result<LimitEstimate, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    // either a single estimate or a report with an `estimates` array
    let candidates: Vec<LimitEstimate> = match value.get("estimates") {
        Some(list) => serde_json::from_value(list.clone())?,
        None => vec![serde_json::from_value(value)?],
    };
    candidates
        .into_iter()
        .find(|e| (e.beta - beta).abs() < 1e-12)
        .ok_or_else(|| CliError::Usage(format!("{} has no estimate at beta = {beta}", path.display())))
}

pub fn expand(args: ExpandArgs, file: Settings) -> Result<Verdict, CliError> {
    let model = resolve(args.model.as_deref().or(file.model.as_deref()).ok_or_else(|| CliError::Usage("missing --model".into()))?)?;
    let beta = match args.beta {
        Some(b) => b,
        None => file.single_beta(0.0)?,
    };
    let r = args.r.or(file.r).unwrap_or(0);
    let n = args.n.or(file.n).ok_or_else(|| CliError::Usage("missing --n".into()))?;
    if n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    if !model.beta_range()?.contains(beta) {
        return Err(CliError::Usage(format!("beta = {beta} outside (beta_-, beta_+)")));
    }
    let sources = [args.chi.is_some(), args.chi_file.is_some(), args.zero_chi, args.mean];
    if sources.iter().filter(|&&b| b).count() != 1 {
        return Err(CliError::Usage("give exactly one of --chi, --chi-file, --zero-chi, --mean".into()));
    }
    let (chi, w_inf) = if args.mean {
        (model.mean_cumulants(beta, r)?, model.limit_mean_W(beta)?)
    } else if let Some(path) = &args.chi_file {
        let est = chi_from_file(path, beta)?;
        (est.chi_hat, args.w.unwrap_or(est.w_hat))
    } else if let Some(chi) = args.chi {
        (chi, args.w.unwrap_or(1.0))
    } else {
        (vec![0.0; r], args.w.unwrap_or(1.0))
    };
    if chi.len() < r {
        return Err(CliError::Usage(format!("need {r} random cumulants, got {}", chi.len())));
    }
    let c = model.cumulant_set(beta, r + 2, chi[..r].to_vec())?;
    let expansion = Expansion::new(&c, w_inf, r)?;
    let w = (n as f64).ln();
    let (mu, sigma) = (model.phi_deriv(1, beta), model.sigma(beta));
    let (lo, hi) = match &args.k_range {
        Some(spec) => {
            let bad = || CliError::Usage(format!("invalid --k-range {spec}"));
            let (a, b) = spec.split_once(':').ok_or_else(bad)?;
            (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?)
        }
        None => (
            (mu * w - 5.0 * sigma * w.sqrt()).floor() as i64,
            (mu * w + 5.0 * sigma * w.sqrt()).ceil() as i64,
        ),
    };
    let mut csv = String::from("k,x");
    for j in 0..=r {
        write!(csv, ",term_{j}").expect("write to string");
    }
    csv.push_str(",total\n");
    for k in lo..=hi {
        let terms = expansion.terms(w, k as f64)?;
        write!(csv, "{k},{}", float(expansion.x(w, k as f64))).expect("write to string");
        for t in &terms {
            write!(csv, ",{}", float(*t)).expect("write to string");
        }
        writeln!(csv, ",{}", float(terms.iter().sum())).expect("write to string");
    }
    match args.out.or(file.out) {
        Some(path) => write_file(&path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(Verdict::Done)
}

fn parse_pmf(spec: &str) -> Result<Vec<(i64, f64)>, CliError> {
    spec.split(',')
        .map(|item| {
            let bad = || CliError::Usage(format!("invalid pmf entry {item}"));
            let (k, p) = item.split_once(':').ok_or_else(bad)?;
            Ok((k.trim().parse().map_err(|_| bad())?, p.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn occupation_setup(harness: Harness, s: &Settings) -> Result<(OccupationCase, KRule, f64), CliError> {
    Ok(match harness {
        Harness::OccupationA => (OccupationCase::A, KRule::Gaussian { alpha: s.alpha.unwrap_or(1.0) }, 0.0),
        Harness::OccupationB => (
            OccupationCase::B,
            KRule::Growing { exponent: s.exponent.unwrap_or(0.75), sign: s.sign.unwrap_or(1.0) },
            0.0,
        ),
        Harness::OccupationC => (OccupationCase::C, KRule::Offset { a: s.a.unwrap_or(0) }, 0.0),
        Harness::OccupationUncentered => {
            let beta = s.single_beta(0.3)?;
            (OccupationCase::Uncentered { beta }, KRule::Gaussian { alpha: s.alpha.unwrap_or(0.0) }, beta)
        }
        Harness::OccupationLog2 => (OccupationCase::BstLogTwo, KRule::Offset { a: s.a.unwrap_or(0) }, -(2f64.ln())),
        _ => unreachable!("not an occupation harness"),
    })
}

fn run_harness(harness: Harness, s: &Settings) -> Result<TheoremReport, CliError> {
    if harness == Harness::Classical {
        let pmf = parse_pmf(s.pmf.as_deref().ok_or_else(|| CliError::Usage("missing --pmf".into()))?)?;
        let ns = s.n_list.clone().unwrap_or_else(|| DEFAULT_PMF_N.to_vec());
        return classical_edgeworth_check(&pmf, &ns, s.r.unwrap_or(2)).map_err(|e| match e {
            Error::Sublattice { .. } | Error::InvalidInput(_) => CliError::Usage(e.to_string()),
            other => other.into(),
        });
    }
    let model = resolve(s.model.as_deref().unwrap_or("bst"))?;
    let n = s.n.unwrap_or(DEFAULT_N);
    let seed = s.seed.unwrap_or(0);
    let schedule = s.schedule_for(n)?;
    let r = s.r.unwrap_or(0);
    let report = match harness {
        Harness::Clt => {
            let beta = s.single_beta(0.0)?;
            let run = grow(&model, n, seed, &schedule)?;
            let est = estimate_chi(&run, &model, beta, s.order.unwrap_or(r.max(1)), false)?;
            clt_sup_error(&run, &model, r, beta, &est)?
        }
        Harness::Saddle => {
            let iv = s.interval.clone().unwrap_or_else(|| vec![-0.2, 0.2]);
            let [lo, hi] = iv[..] else {
                return Err(CliError::Usage("--interval takes two values".into()));
            };
            let run = grow(&model, n, seed, &schedule)?;
            let limit = LimitFunction::new(run.last(), &model, (lo, hi), s.order.unwrap_or((2 * r).max(1)), false)?;
            saddle_sup_error(&run, &model, r, (lo, hi), &limit)?
        }
        Harness::Mode | Harness::Width => {
            let run = grow(&model, n, seed, &schedule)?;
            let est = estimate_chi(&run, &model, 0.0, 2, false)?;
            let opts = ModeCheckOptions { n_min: s.n_min.unwrap_or(ModeCheckOptions::default().n_min) };
            if harness == Harness::Mode {
                mode_check(&run, &model, &est, opts)?
            } else {
                width_check(&run, &model, &est, opts)?
            }
        }
        Harness::Mean => {
            let runs = grow_replicates(&model, n, seed, &schedule, s.replicates.unwrap_or(200))?;
            let betas = s.beta.clone().unwrap_or_else(|| vec![-0.5, 0.0, 0.5]);
            mean_check(&runs, &model, &betas)?
        }
        _ => {
            let (case, rule, beta) = occupation_setup(harness, s)?;
            let runs = grow_replicates(&model, n, seed, &schedule, s.replicates.unwrap_or(50))?;
            let limits = runs
                .iter()
                .map(|run| estimate_chi(run, &model, beta, 2, false))
                .collect::<Result<Vec<_>, _>>()?;
            occupation_check(&runs, &model, case, rule, &limits).map_err(|e| match e {
                Error::InvalidInput(_) => CliError::Usage(e.to_string()),
                other => other.into(),
            })?
        }
    };
    Ok(report)
}

pub fn verify(harness: Harness, s: &Settings, fixtures: Option<&Path>) -> Result<Verdict, CliError> {
    let mut report = run_harness(harness, s)?;
    let mut verdict = Verdict::Done;
    if let Some(path) = fixtures {
        let f = Fixtures::load(path)?;
        let threshold = f
            .threshold(harness.id(), report.model.as_deref(), report.seed)
            .ok_or_else(|| CliError::Runtime(format!("{} has no threshold for {}", path.display(), harness.id())))?;
        if !report.judge(threshold) {
            verdict = Verdict::Failed;
        }
    }
    if let Some(dir) = &s.out {
        write_file(&dir.join("report.json"), &to_json(&report)?)?;
        write_file(&dir.join("series.csv"), &report.to_csv())?;
    }
    print_json(&report)?;
    Ok(verdict)
}

#[derive(Serialize)]
struct SnapshotSummary {
    n: u64,
    #[serde(rename = "S")]
    total: u64,
    mode: i64,
    width: u64,
    tie: bool,
    #[serde(rename = "W_n")]
    w_n: BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct RunReport {
    model: String,
    seed: u64,
    snapshots: Vec<SnapshotSummary>,
    estimates: Vec<LimitEstimate>,
}

pub fn report(dir: &Path, s: &Settings) -> Result<Verdict, CliError> {
    let run = RunTrace::read_dir(dir)?;
    let model = resolve(s.model.as_deref().unwrap_or(&run.model))?;
    let betas = s.beta.clone().unwrap_or_else(|| vec![0.0]);
    let order = s.order.unwrap_or(4);
    let mut snapshots = Vec::with_capacity(run.snapshots.len());
    for snap in &run.snapshots {
        let mw = mode_width(snap)?;
        let mut w_n = BTreeMap::new();
        for &b in &betas {
            w_n.insert(format!("{b}"), laplace_W(snap, &model, b)?);
        }
        snapshots.push(SnapshotSummary { n: snap.n, total: snap.total, mode: mw.u_n, width: mw.m_n, tie: mw.tie, w_n });
    }
    let estimates = betas
        .iter()
        .map(|&b| estimate_chi(&run, &model, b, order, false))
        .collect::<Result<Vec<_>, _>>()?;
    let out = RunReport { model: run.model.clone(), seed: run.seed, snapshots, estimates };
    let text = to_json(&out)?;
    match &s.out {
        Some(path) => write_file(path, &text)?,
        None => println!("{text}"),
    }
    Ok(Verdict::Done)
}
