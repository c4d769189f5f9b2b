use edgeworth::estimators::{estimate_chi, mean_stderr};
use edgeworth::models::ModelSpec;
use edgeworth::simulator::{default_schedule, grow, grow_replicates, RunTrace};
use edgeworth::verify::{
    clt_sup_error, mean_occupation, occupation_check, saddle_sup_error, KRule, LimitFunction, OccupationCase,
};

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("edgeworth-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn runs_are_reproducible_and_round_trip() {
    let port = ModelSpec::port();
    let a = grow(&port, 20_000, 3, &default_schedule(20_000)).unwrap();
    let b = grow(&port, 20_000, 3, &default_schedule(20_000)).unwrap();
    assert_eq!(a.snapshots, b.snapshots);
    let dir = scratch("trace");
    a.write_dir(&dir).unwrap();
    let back = RunTrace::read_dir(&dir).unwrap();
    assert_eq!(back.snapshots, a.snapshots);
    assert_eq!((back.seed, back.model.as_str()), (3, "port"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn clt_harness_on_a_tiny_run() {
    let bst = ModelSpec::bst();
    let run = grow(&bst, 1, 1, &[1]).unwrap();
    let est = estimate_chi(&run, &bst, 0.0, 2, false).unwrap();
    let report = clt_sup_error(&run, &bst, 0, 0.0, &est).unwrap();
    assert!(report.series.is_empty());
    let run = grow(&bst, 2, 1, &[2]).unwrap();
    let report = clt_sup_error(&run, &bst, 1, 0.0, &est).unwrap();
    assert!(report.series[0].statistic.is_finite());
}

#[test]
fn saddle_harness_agrees_with_clt_near_the_centre() {
    let bst = ModelSpec::bst();
    let n = 200_000;
    let run = grow(&bst, n, 5, &[n]).unwrap();
    let limit = LimitFunction::new(run.last(), &bst, (-0.05, 0.05), 2, true).unwrap();
    let saddle = saddle_sup_error(&run, &bst, 0, (-0.05, 0.05), &limit).unwrap();
    let est = estimate_chi(&run, &bst, 0.0, 2, false).unwrap();
    let clt = clt_sup_error(&run, &bst, 0, 0.0, &est).unwrap();
    let w = (n as f64).ln();
    // both errors are o(1); the saddle form is scaled by w_n, the CLT form by sqrt(w_n)
    let s = saddle.series[0].statistic / w;
    let c = clt.series[0].statistic / w.sqrt();
    assert!(s < 0.05 && c < 0.05, "{s} {c}");
}

#[test]
fn mean_occupation_matches_replicates() {
    let bst = ModelSpec::bst();
    let n = 100_000;
    let k = (2.0 * (n as f64).ln()).round() as i64;
    let runs = grow_replicates(&bst, n, 11, &[n], 200).unwrap();
    let counts: Vec<f64> = runs.iter().map(|r| r.last().count(k) as f64).collect();
    let (mean, se) = mean_stderr(&counts);
    let predicted = mean_occupation(&bst, n, k).unwrap();
    assert!((mean - predicted).abs() < 5.0 * se, "{mean} vs {predicted} (se {se})");
}

#[test]
fn centred_occupation_cases_run() {
    let bst = ModelSpec::bst();
    let sched = [10_000, 100_000];
    let runs = grow_replicates(&bst, 100_000, 2, &sched, 20).unwrap();
    let limits: Vec<_> = runs.iter().map(|r| estimate_chi(r, &bst, 0.0, 2, false).unwrap()).collect();
    for (case, rule) in [
        (OccupationCase::A, KRule::Gaussian { alpha: 1.0 }),
        (OccupationCase::B, KRule::Growing { exponent: 0.75, sign: 1.0 }),
        (OccupationCase::C, KRule::Offset { a: 1 }),
    ] {
        let report = occupation_check(&runs, &bst, case, rule, &limits).unwrap();
        assert_eq!(report.series.len(), 2);
        assert!(report.summary["l1_gap_final"].is_finite());
    }
    let limits: Vec<_> = runs.iter().map(|r| estimate_chi(r, &bst, -(2f64.ln()), 2, false).unwrap()).collect();
    let report = occupation_check(&runs, &bst, OccupationCase::BstLogTwo, KRule::Offset { a: 0 }, &limits).unwrap();
    assert!(report.notes.iter().any(|n| n.contains("R°")));
}
