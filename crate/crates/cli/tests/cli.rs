use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn pauli_est(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pauli-est"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn assert_validation_error(args: &[&str], message: &str) {
    let out = pauli_est(args);
    assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains(message), "{args:?}: {}", stderr(&out));
}

/// Data rows of a CSV report, header checked.
fn csv_rows(text: &str, header: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn exact_error_separable_value() {
    let out = pauli_est(&[
        "exact-error",
        "--p",
        "0.1,0.2,0.3",
        "--scheme",
        "separable",
        "--per-state",
        "10",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out), "scheme,resource,closed_form,enumeration,abs_difference");
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "separable");
    assert_eq!(rows[0][2], "0.0525");
    assert_eq!(rows[0][3], "0.0525");
    assert!(rows[0][4].parse::<f64>().unwrap() < 1e-14);
    assert!(stderr(&out).starts_with("manifest: {"));
}

#[test]
fn exact_error_noiseless_and_both() {
    let out = pauli_est(&["exact-error", "--p", "0,0,0", "--scheme", "entangled", "--ebits", "7"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out), "scheme,resource,closed_form,enumeration,abs_difference");
    assert_eq!(rows[0][..4], ["entangled", "7", "0", "0"]);

    let out = pauli_est(&["exact-error", "--p", "0.1,0.2,0.3", "--qubits", "60"]);
    let rows = csv_rows(&stdout(&out), "scheme,resource,closed_form,enumeration,abs_difference");
    assert_eq!(rows[0][..3], ["separable", "20", "0.02625"]);
    assert_eq!(rows[1][..2], ["entangled", "30"]);
    assert!((rows[1][2].parse::<f64>().unwrap() - 0.46 / 30.0).abs() < 1e-12);
}

#[test]
fn exact_error_beyond_cap_skips_enumeration() {
    let out = pauli_est(&[
        "exact-error",
        "--p",
        "0.1,0.2,0.3",
        "--scheme",
        "entangled",
        "--ebits",
        "1000",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out), "scheme,resource,closed_form,enumeration,abs_difference");
    assert_eq!(rows[0][3], "");
    assert_eq!(rows[0][4], "");
}

#[test]
fn exact_error_json() {
    let out = pauli_est(&[
        "exact-error",
        "--p",
        "0.2,0.3,0.4",
        "--scheme",
        "entangled",
        "--ebits",
        "5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["manifest"]["subcommand"], "exact-error");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["method"], "ClosedForm");
    assert_eq!(rows[1]["method"], "Enumeration");
    let closed = rows[0]["expected_error"].as_f64().unwrap();
    assert!((closed - (0.16 + 0.21 + 0.24) / 5.0).abs() < 1e-15);
    assert!(doc["summary"][0]["abs_difference"].as_f64().unwrap() < 1e-15);
}

#[test]
fn validation_errors() {
    assert_validation_error(
        &["exact-error", "--p", "0.5,0.6,0.3", "--qubits", "6"],
        "parameters exceed simplex",
    );
    assert_validation_error(
        &[
            "exact-error",
            "--p",
            "-0.1,0,0",
            "--ebits",
            "2",
            "--scheme",
            "entangled",
        ],
        "p1",
    );
    assert_validation_error(
        &["exact-error", "--p", "0.1,0.1,0.1", "--scheme", "separable"],
        "--per-state",
    );
    assert_validation_error(
        &[
            "exact-error",
            "--p",
            "0.1,0.1,0.1",
            "--scheme",
            "separable",
            "--ebits",
            "3",
        ],
        "--ebits only applies",
    );
    assert_validation_error(
        &["delta", "--p", "0.1,0.1,0.1", "--qubits", "7"],
        "qubit budget must be divisible by 6",
    );
    assert_validation_error(
        &["delta", "--p", "0.1,0.1,0.1", "--uses", "7"],
        "budget must be divisible by 3",
    );
    assert_validation_error(&["sweep", "--grid-steps", "1"], "grid-steps must be ≥ 2");
    assert_validation_error(&["maxima", "--grid-steps", "1"], "grid-steps must be ≥ 2");
    assert_validation_error(
        &[
            "simulate", "--p", "0,0,0", "--qubits", "6", "--trials", "0", "--seed", "1",
        ],
        "trials",
    );
    assert_validation_error(&["sweep", "--quantity", "delta-qubits", "--grid-steps", "4"], "budget");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["delta", "--p", "0.1,0.1"][..],
        &["delta", "--p", "0.1,0.1,0.1"],
        &["simulate", "--p", "0,0,0", "--qubits", "6"],
        &["sweep", "--slice", "p3=0"],
        &["frobnicate"],
    ] {
        let out = pauli_est(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn delta_values() {
    let out = pauli_est(&["delta", "--p", "0.263157894736842,0,0.263157894736842", "--qubits", "6"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out), "quantity,budget,value,scaled_value");
    assert_eq!(rows[0][0], "delta-qubits");
    let scaled: f64 = rows[0][3].parse().unwrap();
    assert!((scaled - 25.0 / 38.0).abs() < 1e-9);
    let value: f64 = rows[0][2].parse().unwrap();
    assert!((6.0 * value - scaled).abs() < 1e-11);

    let out = pauli_est(&["delta", "--p", "0,0,0", "--qubits", "6"]);
    let rows = csv_rows(&stdout(&out), "quantity,budget,value,scaled_value");
    assert_eq!(rows[0][2..], ["0", "0"]);

    let out = pauli_est(&["delta", "--p", "0.1,0.2,0.3", "--uses", "3"]);
    let rows = csv_rows(&stdout(&out), "quantity,budget,value,scaled_value");
    assert_eq!(rows[0][..3], ["delta-uses", "3", "0.371666666667"]);
}

#[test]
fn sweep_to_file_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.csv");
    let out = pauli_est(&[
        "sweep",
        "--quantity",
        "delta-qubits",
        "--scaled",
        "--slice",
        "p2=0",
        "--grid-steps",
        "19",
        "--format",
        "csv",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let text = fs::read_to_string(&path).unwrap();
    let rows = csv_rows(&text, "p1,p2,p3,value");
    assert_eq!(rows.len(), 210);
    let best = rows
        .iter()
        .max_by(|a, b| a[3].parse::<f64>().unwrap().total_cmp(&b[3].parse::<f64>().unwrap()))
        .unwrap();
    let best: Vec<f64> = best.iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(best[..3], [5.0 / 19.0, 0.0, 5.0 / 19.0]);
    assert!((best[3] - 25.0 / 38.0).abs() < 1e-12);

    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("surface.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "sweep");
    assert_eq!(manifest["parameters"]["spec"]["grid_steps"], 19);
    assert_eq!(manifest["parameters"]["spec"]["scale_by_budget"], true);
    assert!(manifest["version"].is_string());
    assert!(manifest["timestamp"].is_string());
}

#[test]
fn sweep_entangled_error_rows() {
    let out = pauli_est(&[
        "sweep",
        "--quantity",
        "entangled-error",
        "--ebits",
        "10",
        "--grid-steps",
        "4",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out), "p1,p2,p3,value");
    assert_eq!(rows.len(), 35);
    assert_eq!(rows[0], ["0", "0", "0", "0"]);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() >= 0.0));
}

#[test]
fn sweep_json_round_trips() {
    let out = pauli_est(&[
        "sweep",
        "--quantity",
        "delta-uses",
        "--scaled",
        "--grid-steps",
        "5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let doc: Value = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&doc).unwrap();
    again.push('\n');
    assert_eq!(again, text);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 56);
    assert!(doc["manifest"]["parameters"]["resource"].is_null());
}

#[test]
fn simulate_is_reproducible() {
    let args = [
        "simulate", "--p", "0,0,0", "--qubits", "6", "--scheme", "both", "--trials", "10", "--seed", "1",
    ];
    let first = pauli_est(&args);
    assert!(first.status.success());
    let rows = csv_rows(
        &stdout(&first),
        "scheme,resource,trials,mean_error,std_error,reference,z_score",
    );
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r[3], "0");
        assert_eq!(r[5], "0");
    }
    let second = pauli_est(&args);
    assert_eq!(first.stdout, second.stdout);

    let args = [
        "simulate",
        "--p",
        "0.1,0.2,0.3",
        "--qubits",
        "60",
        "--trials",
        "2000",
        "--seed",
        "42",
        "--format",
        "json",
    ];
    let a: Value = serde_json::from_str(&stdout(&pauli_est(&args))).unwrap();
    let b: Value = serde_json::from_str(&stdout(&pauli_est(&args))).unwrap();
    assert_eq!(a["summary"], b["summary"]);
    assert_eq!(a["manifest"]["master_seed"], 42);
    assert!(a["manifest"]["generator"].as_str().unwrap().contains("ChaCha8"));
    for s in a["summary"]["schemes"].as_array().unwrap() {
        assert!(s["z_score"].as_f64().unwrap().is_finite());
    }
}

#[test]
fn maxima_reports() {
    let out = pauli_est(&["maxima", "--slice", "p2=0", "--grid-steps", "1900"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out), "mode,grid_steps,p1,p2,p3,value");
    assert_eq!(rows[0][..2], ["qubits", "1900"]);
    assert_eq!(rows[0][2], "0.263157894737");
    assert_eq!(rows[0][3], "0");
    assert_eq!(rows[0][5], "0.657894736842");

    let a = pauli_est(&["maxima", "--grid-steps", "2"]);
    let b = pauli_est(&["maxima", "--grid-steps", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = pauli_est(&["sweep", "--scaled", "--grid-steps", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("out.csv"));
}
