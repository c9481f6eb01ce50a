//! The `backbone` binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn backbone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_backbone")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("backbone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exact_reports_fixed_keys() {
    let v = json(&backbone(&["exact", "--kappa", "6"]));
    for key in ["kappa", "xi", "rho", "residual", "degenerate", "provenance"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!((v["xi"].as_f64().unwrap() - 0.35666683671288).abs() < 1e-10);
    let by_q = json(&backbone(&["exact", "--q", "1"]));
    assert_eq!(by_q["xi"], v["xi"]);
}

#[test]
fn simulate_replays_byte_for_byte() {
    let args = ["simulate", "--event", "bb", "--radii", "8,16", "--samples", "1000", "--seed", "7"];
    let a = backbone(&args);
    let b = backbone(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let threaded = Command::new(env!("CARGO_BIN_EXE_backbone")).args(args).env("BACKBONE_THREADS", "3").output().unwrap();
    assert_eq!(threaded.stdout, a.stdout);

    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# backbone ") && text.contains("seed=7"));
    assert_eq!(lines.next().unwrap(), "event,r_in,r_out,samples,successes,p_hat,lo,hi");
    assert_eq!(lines.count(), 2);
}

#[test]
fn simulate_then_estimate() {
    let csv = scratch("sim.csv");
    let out = backbone(&[
        "simulate", "--event", "backbone", "--radii", "8,16,32,64", "--inner-radius", "4", "--samples", "3000",
        "--seed", "3", "--output", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v = json(&backbone(&["estimate", "--input", csv.to_str().unwrap()]));
    let report = &v["exponents"][0];
    assert_eq!(report["event"], "backbone");
    let xi = report["annulus_xi"][0].as_f64().unwrap();
    assert!(xi > 0.0 && xi < 1.0, "{xi}");
    // (4, 8, 16) and (4, 8, 32) need (8, 16)/(8, 32) rows, which this file lacks
    assert_eq!(v["quasi_multiplicativity"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_exit_codes() {
    let ok = backbone(&["verify", "--suite", "numtheory"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["failed"], 0);
    let strict = backbone(&["verify", "--suite", "integrals", "--tol", "1e-30"]);
    assert_eq!(strict.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("FAIL"));
    let csv = backbone(&["verify", "--suite", "constants", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("name,params,lhs,rhs,error,tol,pass"));
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["exact", "--kappa", "8.5"][..],
        &["exact", "--gamma", "1"],
        &["moment", "--kappa", "6", "--lambda", "-0.7"],
        &["simulate", "--radii", "16,8", "--samples", "10"],
        &["simulate", "--radii", "8", "--inner-radius", "7", "--samples", "10"],
        &["simulate", "--event", "six-arm"],
        &["verify", "--suite", "everything"],
        &["estimate", "--input", "/nonexistent/file.csv"],
        &["numtheory"],
        &[],
    ] {
        let out = backbone(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn config_file_with_override() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# defaults\ncommand = simulate\nevent = one-arm\nradii = 8,16\nsamples = 500\nseed = 11\n").unwrap();
    let base = backbone(&["--config", cfg.to_str().unwrap()]);
    assert!(base.status.success(), "{}", String::from_utf8_lossy(&base.stderr));
    let text = String::from_utf8(base.stdout.clone()).unwrap();
    assert!(text.contains("one-arm,0,16,500,"));
    let overridden = backbone(&["--config", cfg.to_str().unwrap(), "--samples", "200"]);
    assert!(String::from_utf8(overridden.stdout).unwrap().contains("one-arm,0,16,200,"));
    // a different effective configuration changes the hash
    let first = |o: &[u8]| String::from_utf8_lossy(o).lines().next().unwrap().to_string();
    assert_ne!(first(&base.stdout), first(&backbone(&["--config", cfg.to_str().unwrap(), "--seed", "12"]).stdout));
}

#[test]
fn numtheory_and_table() {
    let v = json(&backbone(&["numtheory", "--n", "7", "--k", "2", "--x", "1.4142135623730951"]));
    assert_eq!(v["totient"], 6);
    assert_eq!(v["two_cos_min_poly"], "x^3 + x^2 - 2x - 1");
    assert_eq!(v["class"]["irrational_algebraic_degree"], 3);
    assert_eq!(v["scan"]["polynomial"], "x^2 - 2");
    let t = json(&backbone(&["table"]));
    assert_eq!(t["rows"].as_array().unwrap().len(), 5);
}
