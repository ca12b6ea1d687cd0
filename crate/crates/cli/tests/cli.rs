use std::path::Path;
use std::process::{Command, Output};

use paritynest::codes::CodeSpec;
use paritynest::construct::theorem2;
use paritynest::fock::max_abs;
use paritynest_cli::output::read_hamiltonian;
use serde_json::Value;

fn paritynest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paritynest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(args: &[&str]) -> i32 {
    paritynest(args).status.code().expect("exited normally")
}

fn json_stdout(args: &[&str]) -> Value {
    let out = paritynest(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn path_arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn build_reports_squeezing_orders() {
    let doc = json_stdout(&[
        "build",
        "--code",
        "3,3",
        "--construction",
        "thm2",
        "--l",
        "2",
    ]);
    assert_eq!(doc["data"]["squeezing_orders"], serde_json::json!([1]));
    assert_eq!(doc["data"]["dim"], 10);
    assert_eq!(doc["data"]["parity_nested"], true);
    assert_eq!(doc["data"]["et_report"]["passes"], true);

    let doc = json_stdout(&[
        "build",
        "--code",
        "3,3",
        "--construction",
        "naive",
        "--l",
        "2",
    ]);
    assert_eq!(doc["data"]["squeezing_orders"], serde_json::json!([1, 3]));

    assert_eq!(
        exit_code(&[
            "build",
            "--code",
            "3,3",
            "--construction",
            "thm1",
            "--l",
            "5"
        ]),
        2
    );
}

#[test]
fn build_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("h.json");
    let code = exit_code(&[
        "build",
        "--code",
        "3,3",
        "--construction",
        "thm2",
        "--l",
        "2",
        "--out",
        path_arg(&file),
    ]);
    assert_eq!(code, 0);
    let parsed = read_hamiltonian(&file).unwrap();
    let direct = theorem2(&CodeSpec::binomial(3, 3).unwrap(), 2)
        .unwrap()
        .matrix;
    assert!(max_abs(&(parsed - direct)) <= 1e-15);
}

#[test]
fn check_exit_codes() {
    let base = [
        "check",
        "--code",
        "3,3",
        "--construction",
        "thm2",
        "--l",
        "2",
    ];
    assert_eq!(exit_code(&[&base[..], &["--errors", "jumps"]].concat()), 0);
    assert_eq!(exit_code(&[&base[..], &["--errors", "full"]].concat()), 3);
    assert_eq!(
        exit_code(&[
            "check",
            "--code",
            "3,3",
            "--construction",
            "idle",
            "--l",
            "2"
        ]),
        0
    );
    assert_eq!(
        exit_code(&[
            "check",
            "--code",
            "3,3",
            "--construction",
            "basic",
            "--l",
            "1"
        ]),
        3
    );
    assert_eq!(
        exit_code(&[
            "check",
            "--code",
            "3,3",
            "--construction",
            "basic",
            "--l",
            "1",
            "--general"
        ]),
        3
    );
}

#[test]
fn check_reads_saved_hamiltonian() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("h.json");
    let build = [
        "build",
        "--code",
        "3,3",
        "--construction",
        "thm1",
        "--l",
        "2",
    ];
    assert_eq!(
        exit_code(&[&build[..], &["--out", path_arg(&file)]].concat()),
        0
    );
    let check = [
        "check",
        "--code",
        "3,3",
        "--hamiltonian",
        path_arg(&file),
        "--l",
        "2",
    ];
    let doc = json_stdout(&check);
    assert_eq!(doc["data"]["passes"], true);
    assert_eq!(doc["data"]["residuals"].as_array().unwrap().len(), 8);
    // wrong code dimension for the saved matrix
    assert_eq!(
        exit_code(&["check", "--code", "4,4", "--hamiltonian", path_arg(&file)]),
        1
    );
}

#[test]
fn bench_csv_layout() {
    let out = paritynest(&[
        "bench",
        "--code",
        "3,3",
        "--construction",
        "thm2",
        "--gammas",
        "1e-3:0.1:4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kappa,gamma,infidelity"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.windows(2).all(|w| w[0][1] < w[1][1]));
    assert!((rows[0][1] - 1e-3).abs() < 1e-15);
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .all(|x| x.split('e').next().unwrap().len() >= 14));
}

#[test]
fn bench_is_deterministic() {
    let args = [
        "bench",
        "--code",
        "3,3",
        "--construction",
        "thm1:1",
        "--gammas",
        "1e-3:0.05:3",
    ];
    assert_eq!(paritynest(&args).stdout, paritynest(&args).stdout);
}

#[test]
fn bench_with_empty_grid() {
    let out = paritynest(&[
        "bench",
        "--code",
        "3,3",
        "--construction",
        "idle",
        "--gammas",
        "1e-4:0.5:0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "kappa,gamma,infidelity\n"
    );

    let doc = json_stdout(&[
        "bench",
        "--code",
        "3,3",
        "--construction",
        "idle",
        "--gammas",
        "1e-4:0.5:0",
        "--format",
        "json",
    ]);
    assert!(doc["data"][0]["points"].as_array().unwrap().is_empty());
}

#[test]
fn bench_several_curves() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig.csv");
    let plot = dir.path().join("fig.gp");
    let code = exit_code(&[
        "bench",
        "--code",
        "3,3",
        "--construction",
        "naive:2,thm1:1,thm2:2,basic,idle",
        "--gammas",
        "1e-3:0.05:4",
        "--out",
        path_arg(&csv),
        "--gnuplot",
        path_arg(&plot),
    ]);
    assert_eq!(code, 0);
    for label in ["naive-l2", "thm1-l1", "thm2-l2", "basic", "idle"] {
        let text = std::fs::read_to_string(dir.path().join(format!("fig-{label}.csv"))).unwrap();
        assert_eq!(text.lines().count(), 5, "{label}");
    }
    let script = std::fs::read_to_string(&plot).unwrap();
    assert!(script.contains("set logscale xy") && script.contains("title \"thm2-l2\""));

    // several csv curves cannot share stdout
    assert_eq!(
        exit_code(&["bench", "--code", "3,3", "--construction", "idle,basic"]),
        1
    );
}

#[test]
fn bench_fits_idle_slope() {
    let doc = json_stdout(&[
        "bench",
        "--code",
        "3,3",
        "--construction",
        "idle",
        "--gammas",
        "1e-4:0.05:12",
        "--format",
        "json",
        "--fit-max",
        "0.06",
    ]);
    let slope = doc["data"][0]["fit"]["slope"].as_f64().unwrap();
    assert!((slope - 3.0).abs() < 0.15, "{slope}");
}

#[test]
fn witness_refutations() {
    let doc = json_stdout(&["witness", "--code", "3,3", "--l", "2"]);
    let configs = doc["data"]["configurations"].as_array().unwrap();
    assert_eq!(configs.len(), 3);
    assert!(configs.iter().all(|c| c["consistent"] == false));

    let doc = json_stdout(&["witness", "--code", "5,5", "--l", "4"]);
    assert_eq!(doc["data"]["configurations"].as_array().unwrap().len(), 10);
    assert_eq!(doc["data"]["all_inconsistent"], true);

    assert_eq!(exit_code(&["witness", "--code", "3,3", "--l", "0"]), 0);
    assert_eq!(exit_code(&["witness", "--code", "3,3", "--l", "3"]), 2);
}

#[test]
fn decompose_weights() {
    let doc = json_stdout(&["decompose", "--code", "3,3", "--l", "2"]);
    assert_eq!(doc["data"]["weights"].as_array().unwrap().len(), 1);

    let doc = json_stdout(&["decompose", "--code", "3,4", "--l", "2"]);
    let weights: Vec<f64> = doc["data"]["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w.as_f64().unwrap())
        .collect();
    assert_eq!(weights.len(), 2);
    assert!(weights.iter().all(|w| (w - 0.125).abs() < 1e-12));

    assert_eq!(exit_code(&["decompose", "--code", "2,2", "--l", "2"]), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(
        exit_code(&["build", "--code", "3", "--construction", "thm2"]),
        1
    );
    assert_eq!(
        exit_code(&["build", "--code", "3,3", "--construction", "thm9"]),
        1
    );
    assert_eq!(
        exit_code(&[
            "build",
            "--code",
            "3,3",
            "--construction",
            "thm2",
            "--format",
            "csv"
        ]),
        1
    );
    assert_eq!(
        exit_code(&[
            "build",
            "--code",
            "3,3",
            "--construction",
            "direct",
            "--offdiagonals",
            "2"
        ]),
        1
    );
    assert_eq!(
        exit_code(&[
            "bench",
            "--code",
            "3,3",
            "--construction",
            "idle",
            "--gammas",
            "0:1:3"
        ]),
        1
    );
    assert_eq!(
        exit_code(&[
            "bench",
            "--code",
            "3,3",
            "--construction",
            "idle",
            "--t",
            "-1"
        ]),
        1
    );
    assert_eq!(exit_code(&["frobnicate"]), 1);
    assert_eq!(exit_code(&["--help"]), 0);
}

#[test]
fn direct_and_phase_gates() {
    let doc = json_stdout(&[
        "build",
        "--code",
        "3,3",
        "--construction",
        "direct",
        "--l",
        "2",
        "--offdiagonals",
        "1,3",
    ]);
    assert_eq!(doc["data"]["et_report"]["passes"], true);
    assert_eq!(
        exit_code(&[
            "build",
            "--code",
            "3,3",
            "--construction",
            "direct",
            "--l",
            "2",
            "--offdiagonals",
            "1"
        ]),
        2
    );
    let doc = json_stdout(&[
        "build",
        "--code",
        "3,3",
        "--construction",
        "phase",
        "--l",
        "2",
        "--theta",
        "0.5",
    ]);
    assert_eq!(doc["data"]["squeezing_orders"], serde_json::json!([]));
}
