mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;
use spacefill::io::write_diagram;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spacefill"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compute_two_balls_gauss() {
    let input = data("two_balls.txt");
    let o = run(&["compute", "--input", path_str(&input), "--measures", "k"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "K = 12.566370614359172\n");
}

#[test]
fn compute_all_measures() {
    let input = data("two_balls.txt");
    let o = run(&[
        "compute",
        "--input",
        path_str(&input),
        "--mc-samples",
        "20000",
        "--seed",
        "3",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    for key in [
        "V = ",
        "A = 18.84955592153876",
        "M = 16.00044654265673",
        "K = 12.566370614359172",
    ] {
        assert!(out.contains(key), "{out}");
    }
}

#[test]
fn gradient_of_single_ball_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("g.json");
    let input = data("single.txt");
    let o = run(&["grad", "--input", path_str(&input), "--json", path_str(&json)]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["schema"], "spacefill.result/1");
    for term in ["g", "d", "e", "f", "h"] {
        assert_eq!(doc["gradient"][term][0], serde_json::json!([0.0, 0.0, 0.0]));
    }
    assert_eq!(doc["provenance"]["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn fdcheck_passes_on_generic_state() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("random8.txt");
    std::fs::write(&input, write_diagram(&random_generic(&mut rng(8), 8, signed_weights))).unwrap();
    let o = run(&[
        "fdcheck",
        "--input",
        path_str(&input),
        "--step",
        "1e-5",
        "--tol",
        "1e-5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn fdcheck_fails_with_impossible_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("random5.txt");
    std::fs::write(&input, write_diagram(&random_generic(&mut rng(5), 5, signed_weights))).unwrap();
    let o = run(&["fdcheck", "--input", path_str(&input), "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 0 0 -1 1\n").unwrap();
    assert_eq!(run(&["compute", "--input", path_str(&bad)]).status.code(), Some(1));

    let malformed = dir.path().join("malformed.txt");
    std::fs::write(&malformed, "0 0 zero 1 1\n").unwrap();
    let o = run(&["compute", "--input", path_str(&malformed)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column 5"));

    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["grad", "--input", path_str(&missing)]).status.code(), Some(3));

    let tangent = dir.path().join("tangent.txt");
    std::fs::write(&tangent, "0 0 0 1 1\n2 0 0 1 1\n").unwrap();
    assert_eq!(
        run(&["compute", "--input", path_str(&tangent), "--measures", "k"])
            .status
            .code(),
        Some(2)
    );
    let o = run(&["degeneracy", "--input", path_str(&tangent)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("MergeSplitComponents"));
}

#[test]
fn degeneracy_report_on_generic_input() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("d.json");
    let input = data("two_balls.txt");
    let o = run(&["degeneracy", "--input", path_str(&input), "--json", path_str(&json)]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["degeneracy"]["violations"], serde_json::json!([]));
}

#[test]
fn probe_reports_tangency() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("p.json");
    let (input, momentum) = (data("tangency_path.txt"), data("tangency_momentum.txt"));
    let o = run(&[
        "probe",
        "--input",
        path_str(&input),
        "--momentum",
        path_str(&momentum),
        "--json",
        path_str(&json),
    ]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["probe"]["samples"][5]["degenerate"], true);
    let jump = doc["probe"]["events"][0]["K_jump"].as_f64().unwrap();
    assert!((jump + 4.0 * std::f64::consts::PI).abs() < 1e-6);
}
