use std::process::Command;

use dbg_persist::cli::{run, Outcome};
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("dbg-persist").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = cli(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = cli(&["validate", &fixture("worked_example")]);
    assert_eq!(ok.code, 0);
    assert_eq!(serde_json::from_str::<Value>(&ok.stdout).unwrap()["status"], "OK");

    let bad = cli(&["validate", &fixture("invalid_row_sum"), "--format", "text"]);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.contains("non-stochastic row"), "{}", bad.stdout);
    assert!(bad.stdout.contains("child B"));

    assert_eq!(cli(&["validate", "/nonexistent/net.json"]).code, 2);
    assert_eq!(cli(&["strengths", &fixture("invalid_row_sum")]).code, 1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dbg-persist");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["validate", &fixture("merge")]), Some(0));
    assert_eq!(status(&["validate", &fixture("invalid_row_sum")]), Some(1));
    assert_eq!(status(&["validate", "/nonexistent/net.json"]), Some(2));
    assert_eq!(status(&["frobnicate"]), Some(2));
}

#[test]
fn malformed_document_is_a_domain_error() {
    let dir = std::env::temp_dir().join(format!("dbg-persist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\"delta_t\": 1.0,").unwrap();
    assert_eq!(cli(&["validate", path.to_str().unwrap()]).code, 1);
}

#[test]
fn single_edge_has_one_row_per_slice() {
    let v = json(&["strengths", &fixture("single_edge")]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row["slice"], k);
        assert_eq!(row["parent"], "A");
        assert_eq!(row["child"], "B");
        assert!((f(&row["strength"]) - 0.7).abs() < 1e-12);
    }
}

#[test]
fn two_parent_strengths() {
    let text = cli(&["strengths", &fixture("two_parent"), "--format", "text"]).stdout;
    assert!(text.contains("0\tJ\tC\t0.700000000"), "{text}");
    assert!(text.contains("0\tO\tC\t0.400000000"), "{text}");

    // only the O=0 configuration separates the J rows
    let h = ((0.9f64.sqrt() - 0.2f64.sqrt()).powi(2) + (0.1f64.sqrt() - 0.8f64.sqrt()).powi(2)).sqrt()
        / 2f64.sqrt();
    let v = json(&["strengths", &fixture("two_parent"), "--divergence", "hellinger"]);
    assert_eq!(v["divergence"], "hellinger");
    let j = v["rows"].as_array().unwrap().iter().find(|r| r["parent"] == "J").unwrap();
    assert!((f(&j["strength"]) - h).abs() < 1e-9);
}

#[test]
fn missing_eta_is_usage_error() {
    for cmd in ["barcode", "events", "graph", "formigram", "stability"] {
        assert_eq!(cli(&[cmd, &fixture("merge")]).code, 2, "{cmd}");
    }
}

#[test]
fn zero_eps_is_identity() {
    let path = fixture("worked_example");
    let plain = cli(&["barcode", &path, "--eta", "0.3"]);
    let zero = cli(&["barcode", &path, "--eta", "0.3", "--eps", "0"]);
    assert_eq!(plain.code, 0);
    assert_eq!(plain.stdout, zero.stdout);
}

#[test]
fn eps_validation() {
    let path = fixture("worked_example");
    assert_eq!(cli(&["barcode", &path, "--eta", "0.3", "--eps", "-0.5"]).code, 2);
    assert_eq!(cli(&["stability", &path, "--eta", "0.3", "--eps", "0.5,-1"]).code, 2);
    assert_eq!(cli(&["barcode", &path, "--eta", "0.3", "--eps", "0.5,1"]).code, 2);
}

#[test]
fn worked_example_barcode() {
    let v = json(&["barcode", &fixture("worked_example"), "--eta", "0.3"]);
    let bars = v.as_array().unwrap();
    assert_eq!(bars.len(), 3);
    let spans: Vec<(f64, f64)> = bars.iter().map(|b| (f(&b["birth"]), f(&b["death"]))).collect();
    assert_eq!(spans, vec![(0.0, 2.0), (1.0, 2.0), (1.0, 2.0)]);
}

#[test]
fn low_threshold_gives_union_components() {
    // every edge kept: the time-union graph of the worked example is connected
    let v = json(&["barcode", &fixture("worked_example"), "--eta", "-1"]);
    let bars = v.as_array().unwrap();
    assert_eq!(bars.len(), 1);
    assert_eq!(f(&bars[0]["birth"]), 0.0);
    assert_eq!(f(&bars[0]["death"]), 2.0);
}

#[test]
fn svg_output() {
    let out = cli(&["barcode", &fixture("worked_example"), "--eta", "0.3", "--format", "svg"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("<svg"));
    assert!(out.stdout.contains("height=\"100\""));
    assert_eq!(out.stdout.matches("stroke=\"black\" stroke-width=\"2\"").count(), 3);
    assert!(out.stdout.trim_end().ends_with("</svg>"));

    let other = cli(&["events", &fixture("worked_example"), "--eta", "0.3", "--format", "svg"]);
    assert_eq!(other.code, 2);
}

#[test]
fn merge_fixture_event() {
    let v = json(&["events", &fixture("merge"), "--eta", "0.3"]);
    let events = v.as_array().unwrap();
    assert_eq!(events.len(), 1);
    assert_eq!(events[0]["kind"], "merge");
    assert_eq!(f(&events[0]["time"]), 1.0);
    assert_eq!(events[0]["blocks_before"], serde_json::json!([["A"], ["B"]]));
    assert_eq!(events[0]["blocks_after"], serde_json::json!([["A", "B"]]));
}

#[test]
fn constant_network_has_no_events() {
    let v = json(&["events", &fixture("single_edge"), "--eta", "0.3"]);
    assert!(v.as_array().unwrap().is_empty());
}

#[test]
fn worked_example_disbands() {
    let v = json(&["events", &fixture("worked_example"), "--eta", "0.3"]);
    let events = v.as_array().unwrap();
    assert_eq!(events.len(), 3);
    assert!(events.iter().all(|e| e["kind"] == "disband" && f(&e["time"]) == 1.0));
}

#[test]
fn clusters_edge_cases() {
    let path = fixture("single_edge");
    let full = json(&["clusters", &path, "0", "--eta", "0.3"]);
    assert_eq!(full["clusters"], serde_json::json!([["A", "B"]]));
    assert_eq!(f(&full["time"]), 0.5);

    let empty = json(&["clusters", &path, "2", "--eta", "0.9"]);
    assert_eq!(empty["clusters"], serde_json::json!([["A"], ["B"]]));

    assert_eq!(cli(&["clusters", &path, "3", "--eta", "0.3"]).code, 2);
}

#[test]
fn compare_shifted_pair() {
    let (a, b) = (fixture("shift_a"), fixture("shift_b"));
    let ab = json(&["compare", &a, &b, "--eta", "0.3"]);
    let ba = json(&["compare", &b, &a, "--eta", "0.3"]);
    assert_eq!(f(&ab["bottleneck"]), 1.0);
    assert_eq!(ab["bottleneck"], ba["bottleneck"]);
    assert_eq!(ab["unmatched_a"], ba["unmatched_b"]);
    assert!(f(&ab["interleaving_lower_bound"]) <= f(&ab["bottleneck"]));
}

#[test]
fn compare_with_itself_is_zero() {
    let a = fixture("worked_example");
    let v = json(&["compare", &a, &a, "--eta", "0.3"]);
    assert_eq!(f(&v["bottleneck"]), 0.0);
    assert_eq!(v["barcode_a"], v["barcode_b"]);
}

#[test]
fn compare_separate_thresholds() {
    let a = fixture("worked_example");
    let v = json(&["compare", &a, &a, "--eta", "0.3", "--eta-b", "-1"]);
    assert!(f(&v["bottleneck"]) > 0.0);
}

#[test]
fn stability_default_grid_passes() {
    let v = json(&["stability", &fixture("worked_example"), "--eta", "0.3"]);
    assert_eq!(v["all_pass"], true);
    let checks = v["checks"].as_array().unwrap();
    let eps: Vec<f64> = checks.iter().map(|c| f(&c["eps"])).collect();
    assert_eq!(eps, vec![0.0, 0.5, 1.0, 2.0]);
    for c in checks {
        assert!(f(&c["lhs"]) <= f(&c["eps"]) + 1e-9);
    }
}

#[test]
fn oracle_flag_agrees() {
    for path in ["worked_example", "merge", "shift_a"] {
        let p = fixture(path);
        let plain = cli(&["barcode", &p, "--eta", "0.3", "--eps", "0.25"]);
        let oracle = cli(&["barcode", &p, "--eta", "0.3", "--eps", "0.25", "--oracle"]);
        assert_eq!(plain.stdout, oracle.stdout, "{path}");
    }
}

#[test]
fn unknown_divergence_rejected() {
    assert_eq!(cli(&["strengths", &fixture("merge"), "--divergence", "wasserstein"]).code, 2);
}
