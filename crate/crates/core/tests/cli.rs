use std::fs;
use std::path::PathBuf;

use intrinsic_gates::cli::{run, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn igates(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("igates").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn check_rejects_ccz() {
    let (code, out, _) = igates(&["check", "--gate", &data("ccz.json")]);
    assert_eq!(code, EXIT_INFEASIBLE);
    assert!(out.contains("infeasible by parity"));
}

#[test]
fn check_accepts_czz() {
    let (code, out, _) = igates(&[
        "check",
        "--gate",
        &data("czz.json"),
        "--array",
        &data("stellar.json"),
    ]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let local: Vec<f64> = serde_json::from_value(v["parity"]["free"]["local"].clone()).unwrap();
    let half = std::f64::consts::FRAC_PI_2;
    assert!((local[1] - half).abs() < 1e-12 && (local[2] - half).abs() < 1e-12);
}

#[test]
fn malformed_input_is_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{ "dots": [{ "id": 0, "zeeman": 1.0 }], "bonds": [{ "j": 0, "J": 1.0 }] }"#,
    )
    .unwrap();
    let (code, _, err) = igates(&[
        "solve",
        "--array",
        bad.to_str().unwrap(),
        "--gate",
        &data("czz.json"),
    ]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line"), "{err}");
    let (code, _, _) = igates(&["check", "--gate", "/nonexistent/gate.json"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = igates(&["apps", "nonsense"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = igates(&[
        "simulate",
        "--array",
        &data("stellar.json"),
        "--sweep",
        "1:0:3",
    ]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn solve_finds_quarter_turn() {
    let (code, out, _) = igates(&[
        "solve",
        "--array",
        &data("stellar.json"),
        "--gate",
        &data("czz.json"),
    ]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let tau = v["tau"].as_f64().unwrap();
    assert!((tau - std::f64::consts::PI / 0.01).abs() < 1e-9);
}

#[test]
fn simulate_writes_report_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let args = [
        "simulate",
        "--array",
        &data("stellar.json"),
        "--gate",
        &data("czz.json"),
        "--sweep",
        "1e-4:1e-2:3",
        "--out",
        out_dir,
        "--jobs",
        "2",
    ];
    let (code, out, err) = igates(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["gate_check"]["equivalent"].as_bool().unwrap());
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let first = fs::read(dir.path().join("simulate.json")).unwrap();
    igates(&args);
    assert_eq!(
        first,
        fs::read(dir.path().join("simulate.json")).unwrap(),
        "outputs are deterministic"
    );

    let (code, _, _) = igates(&[
        "simulate",
        "--array",
        &data("stellar.json"),
        "--tau",
        "0",
        "--out",
        out_dir,
    ]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn calibrate_rectangle_with_decoupling() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let (code, out, err) = igates(&[
        "calibrate",
        "--array",
        &data("rectangle.json"),
        "--gate",
        &data("cz_ring.json"),
        "--dd",
        "--out",
        out_dir,
    ]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    for f in [
        "schedule.json",
        "schedule_plain.json",
        "schedule_dd.json",
        "kspace.csv",
        "verification.json",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let record: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verification.json")).unwrap())
            .unwrap();
    assert!(record["plain"]["target"]["equivalent"].as_bool().unwrap());
    assert!(record["dd"]["target"]["equivalent"].as_bool().unwrap());
    let path = fs::read_to_string(dir.path().join("kspace.csv")).unwrap();
    assert!(path.starts_with("time,bond_id,phase_over_pi,folded_phase_over_pi"));
}

#[test]
fn calibrate_homogeneous_needs_no_pulses() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = igates(&[
        "calibrate",
        "--array",
        &data("stellar.json"),
        "--gate",
        &data("czz.json"),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let s: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("schedule.json")).unwrap())
            .unwrap();
    let stages = s["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 1);
    assert!(stages[0]["pulse"].as_array().unwrap().is_empty());
}

#[test]
fn apps_emit_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    assert_eq!(igates(&["apps", "logicalz", "--out", out_dir]).0, EXIT_OK);
    let v: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("logicalz.json")).unwrap())
            .unwrap();
    assert_eq!(
        v["diagonal"],
        serde_json::json!([1, 1, 1, -1, 1, -1, -1, -1])
    );
    assert!(v["anticommutes_with_xxx"].as_bool().unwrap());

    assert_eq!(
        igates(&["apps", "reversal", "--n", "4", "--out", out_dir]).0,
        EXIT_OK
    );
    let v: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("reversal.json")).unwrap())
            .unwrap();
    assert!(v["rule_matches"].as_bool().unwrap());
    assert_eq!(v["matrix"].as_array().unwrap().len(), 16);

    let args = [
        "apps",
        "paritycheck",
        "--n",
        "2",
        "--basis",
        "x",
        "--trials",
        "5",
        "--seed",
        "7",
        "--out",
        out_dir,
    ];
    assert_eq!(igates(&args).0, EXIT_OK);
    let first = fs::read(dir.path().join("paritycheck.json")).unwrap();
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["report"]["agreed"], 5);
    assert_eq!(v["transcripts"].as_array().unwrap().len(), 5);
    igates(&args);
    assert_eq!(
        first,
        fs::read(dir.path().join("paritycheck.json")).unwrap()
    );

    assert_eq!(igates(&["apps", "surface", "--out", out_dir]).0, EXIT_OK);
}
