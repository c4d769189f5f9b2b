use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn edgeworth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgeworth"))
        .args(args)
        .env_remove("EDGEWORTH_FIXTURES")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn models_list_and_describe() {
    let out = edgeworth(&["models", "list"]);
    assert!(out.status.success());
    assert_eq!(json(&out).as_array().unwrap().len(), 6);

    let d = json(&edgeworth(&["models", "describe", "bst"]));
    assert_eq!(d["phi1"].as_f64(), Some(2.0));
    assert_eq!(d["sigma2"].as_f64(), Some(2.0));
    assert!((d["beta_minus"].as_f64().unwrap() + 1.678).abs() < 1e-3);
    assert!((d["beta_plus"].as_f64().unwrap() - 0.768).abs() < 1e-3);

    let v = json(&edgeworth(&["models", "describe", "vertical_bst"]));
    assert_eq!(v["phi1"].as_f64(), Some(0.0));
    assert!((v["beta_plus"].as_f64().unwrap() - 0.9071).abs() < 1e-4);

    let bad = edgeworth(&["models", "describe", "nope"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("nope"));
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let run = |out: &Path| edgeworth(&["simulate", "--model", "bst", "--n", "1000", "--seed", "7", "--out", path(out)]);
    let (x, y) = (run(&a), run(&b));
    assert!(x.status.success());
    assert_eq!(x.stdout, y.stdout);
    let last = String::from_utf8(x.stdout).unwrap().lines().last().unwrap().to_string();
    assert!(last.starts_with("0,7,1000,1001,"), "{last}");
    for name in ["run.json", "profile_1000.csv"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap());
    }

    let port = edgeworth(&["simulate", "--model", "port", "--n", "10", "--schedule", "final", "--out", path(&dir.path().join("p"))]);
    assert!(String::from_utf8(port.stdout).unwrap().contains("\n0,0,10,21,"));
}

#[test]
fn replicates_get_distinct_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = edgeworth(&["simulate", "--model", "rrt", "--n", "200", "--replicates", "3", "--schedule", "final", "--out", path(dir.path())]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let seeds: std::collections::BTreeSet<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(seeds.len(), 3);
    for i in 0..3 {
        assert!(dir.path().join(format!("replicate_{i:03}/run.json")).exists());
    }
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# demo\nmodel = port\nn = 50\nschedule = final\n").unwrap();
    let out_dir = dir.path().join("o");
    let out = edgeworth(&["simulate", "--config", path(&cfg), "--out", path(&out_dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains("\n0,0,50,101,"));
    let out = edgeworth(&["simulate", "--config", path(&cfg), "--model", "bst", "--out", path(&out_dir)]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("\n0,0,50,51,"));

    std::fs::write(&cfg, "model = bst\ncolour = blue\n").unwrap();
    let bad = edgeworth(&["simulate", "--config", path(&cfg)]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown key colour"));
}

#[test]
fn expand_columns() {
    let out = edgeworth(&["expand", "--model", "bst", "--n", "1e4", "--r", "0", "--zero-chi", "--k-range", "15:20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,x,term_0,total"));
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[2], f[3]);
    }
    let bad = edgeworth(&["expand", "--model", "bst", "--n", "100", "--beta", "2", "--zero-chi"]);
    assert_eq!(bad.status.code(), Some(2));
    let none = edgeworth(&["expand", "--model", "bst", "--n", "100"]);
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn verify_classical_and_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = edgeworth(&["verify", "classical", "--pmf", "0:0.2,1:0.5,2:0.3", "--r", "2", "--out", path(dir.path())]);
    assert!(out.status.success());
    let report = json(&out);
    let series = report["series"].as_array().unwrap();
    assert_eq!(series.len(), 4);
    assert!(series[3]["statistic"].as_f64().unwrap() < series[0]["statistic"].as_f64().unwrap());
    let csv = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert!(csv.starts_with("n,statistic,prediction\n64,"));

    let fx = dir.path().join("fx.txt");
    std::fs::write(&fx, "classical = 0.5\n").unwrap();
    let pass = edgeworth(&["verify", "classical", "--pmf", "0:0.2,1:0.5,2:0.3", "--fixtures", path(&fx)]);
    assert_eq!(pass.status.code(), Some(0));
    assert_eq!(json(&pass)["passed"], Value::Bool(true));
    std::fs::write(&fx, "classical = 0.1\n").unwrap();
    let fail = edgeworth(&["verify", "classical", "--pmf", "0:0.2,1:0.5,2:0.3", "--fixtures", path(&fx)]);
    assert_eq!(fail.status.code(), Some(1));
    let missing = edgeworth(&["verify", "classical", "--pmf", "0:0.2,1:0.5,2:0.3", "--fixtures", path(&dir.path().join("none"))]);
    assert_eq!(missing.status.code(), Some(3));

    let sub = edgeworth(&["verify", "classical", "--pmf", "1:0.5,3:0.5"]);
    assert_eq!(sub.status.code(), Some(2));
}

#[test]
fn verify_simulated_harnesses() {
    let clt = json(&edgeworth(&["verify", "clt", "--model", "rrt", "--n", "1e5", "--seed", "3"]));
    let s = clt["series"].as_array().unwrap();
    assert!(s.last().unwrap()["statistic"].as_f64().unwrap() < s[0]["statistic"].as_f64().unwrap());

    let mean = json(&edgeworth(&["verify", "mean", "--model", "bst", "--n", "500", "--replicates", "100", "--schedule", "final"]));
    assert!(mean["summary"]["max_z"].as_f64().unwrap() < 5.0);

    let occ = edgeworth(&["verify", "occupation-c", "--model", "bst", "--n", "2e4", "--replicates", "10", "--a", "1"]);
    assert!(occ.status.success());
    let bad = edgeworth(&["verify", "occupation-log2", "--model", "rrt", "--n", "2e4", "--replicates", "4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn report_round_trip_into_expand() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    assert!(edgeworth(&["simulate", "--model", "bst", "--n", "5000", "--seed", "1", "--out", path(&run)]).status.success());
    let rep = dir.path().join("report.json");
    let out = edgeworth(&["report", "--run", path(&run), "--beta=-0.3,0", "--order", "2", "--out", path(&rep)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["estimates"].as_array().unwrap().len(), 2);
    let exp = edgeworth(&["expand", "--model", "bst", "--n", "5000", "--beta=-0.3", "--r", "2", "--chi-file", path(&rep), "--k-range", "5:6"]);
    assert!(exp.status.success(), "{}", String::from_utf8_lossy(&exp.stderr));
    assert_eq!(String::from_utf8(exp.stdout).unwrap().lines().count(), 3);
}
