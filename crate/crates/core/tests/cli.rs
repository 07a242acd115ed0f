use std::process::{Command, Output};

use serde_json::Value;

fn qswitch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qswitch")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = qswitch(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn exact_discrimination() {
    let r = report(&["discriminate", "--n", "3", "--y", "4"]);
    assert_eq!(r["results"]["inferred_y"], 4);
    assert!((r["results"]["p_claimed"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(r["passed"], true);
    let trivial = report(&["discriminate", "--n", "1", "--y", "0"]);
    assert_eq!(trivial["results"]["distribution"].as_array().unwrap().len(), 1);
}

#[test]
fn perturbed_run_is_reproducible() {
    let args = [
        "discriminate", "--n", "3", "--y", "2", "--mode", "perturbed", "--epsilon", "0.05", "--seed", "7",
        "--repetitions", "15",
    ];
    let a = report(&args);
    let b = report(&args);
    assert_eq!(a, b);
    let p = a["results"]["p_claimed"].as_f64().unwrap();
    if p >= 2.0 / 3.0 {
        assert_eq!(a["results"]["majority_vote"], 2);
    } else {
        assert_eq!(a["results"]["promise_violation"], true);
    }
}

#[test]
fn every_subcommand_is_deterministic() {
    for args in [
        vec!["compare-circuit", "--n", "3", "--trials", "3", "--seed", "5"],
        vec!["supersequence", "--n", "3"],
        vec!["router", "--n", "3", "--trials", "5", "--seed", "2"],
        vec!["period", "--n", "3"],
        vec!["pairwise", "--n", "4", "--seed", "9"],
        vec!["discriminate", "--n", "3", "--y", "1", "--mode", "low-dim", "--input", "random", "--seed", "3"],
    ] {
        assert_eq!(report(&args), report(&args), "{args:?}");
    }
}

#[test]
fn circuit_report() {
    let r = report(&["compare-circuit", "--n", "3", "--y", "1", "--trials", "5"]);
    assert_eq!(r["results"]["switch_queries"], 3);
    assert_eq!(r["results"]["circuit_queries"], 9);
    assert_eq!(r["results"]["count_cases"]["002+021"]["disentangled"], false);
    assert_eq!(r["results"]["count_cases"]["002+020+200"]["disentangled"], true);
    let one = report(&["compare-circuit", "--n", "1", "--y", "0", "--trials", "2"]);
    assert!(one["results"]["max_deviation"].as_f64().unwrap() < 1e-12);
}

#[test]
fn supersequence_and_period_reports() {
    let s = report(&["supersequence", "--n", "2"]);
    assert_eq!(s["results"]["minimal_length"], 3);
    assert_eq!(s["results"]["witness"], serde_json::json!([0, 1, 0]));
    let p = report(&["period", "--n", "3", "--r", "2"]);
    assert!((p["results"]["simulated_p0"].as_f64().unwrap() - 0.75).abs() < 1e-9);
    let csv = qswitch(&["period", "--n", "3", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("outcome,probability\n0,"));
}

#[test]
fn exit_codes() {
    assert_eq!(qswitch(&["pairwise", "--n", "5", "--representation", "dense"]).status.code(), Some(3));
    assert_eq!(qswitch(&["discriminate", "--n", "5", "--y", "1"]).status.code(), Some(3));
    assert_eq!(qswitch(&["supersequence", "--n", "5"]).status.code(), Some(3));
    assert_eq!(qswitch(&["discriminate", "--n", "3", "--y", "9"]).status.code(), Some(2));
    assert_eq!(qswitch(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qswitch(&["discriminate", "--n", "2", "--mode", "low-dim"]).status.code(), Some(2));
    // a tolerance below rounding error turns the comparison into a failed check
    let strict = qswitch(&["compare-circuit", "--n", "3", "--trials", "2", "--tolerance", "1e-300"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn fixtures_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("qswitch-fixture-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("set.json");
    let export = qswitch(&[
        "export-set", "--n", "3", "--y", "5", "--mode", "low-dim", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(export.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let set = serde_json::to_string(&written["results"]).unwrap();
    let set_path = dir.join("only-set.json");
    std::fs::write(&set_path, set).unwrap();
    let r = report(&["discriminate", "--n", "3", "--set", set_path.to_str().unwrap()]);
    assert_eq!(r["results"]["inferred_y"], 5);
    std::fs::remove_dir_all(&dir).unwrap();
}
