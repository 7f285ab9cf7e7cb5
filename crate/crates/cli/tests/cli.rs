//! End-to-end tests of the `maninlab` binary: exit-code discipline,
//! deterministic catalogs, and report shape.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maninlab"))
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("maninlab-test-{}-{name}", std::process::id()));
    p
}

fn write_spec(name: &str, text: &str) -> PathBuf {
    let path = tmp_path(name);
    std::fs::write(&path, text).expect("write spec");
    path
}

fn report_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_algebra_passes_with_exit_zero() {
    let out = bin().args(["verify-algebra", "--rank", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = report_of(&out);
    assert_eq!(report["summary"]["failed"], 0);
    assert_eq!(report["job"]["command"], "verify-algebra");
}

#[test]
fn missing_algebra_field_is_a_schema_error() {
    let spec = write_spec("noalg.json", r#"{"command":"verify-algebra"}"#);
    let out = bin()
        .args(["verify-algebra", "--spec"])
        .arg(&spec)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"algebra\""), "stderr must name the missing field: {err}");
}

#[test]
fn rank_out_of_range_is_a_schema_error() {
    let spec =
        write_spec("rank0.json", r#"{"command":"verify-algebra","algebra":{"type":"A","rank":0}}"#);
    let out = bin().args(["verify-algebra", "--spec"]).arg(&spec).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

#[test]
fn unsupported_format_is_a_schema_error() {
    let out = bin()
        .args(["verify-algebra", "--rank", "1", "--format", "yaml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_rank_one_has_two_valid_entries_and_reruns_identically() {
    let out1 = tmp_path("catalog-a.json");
    let out2 = tmp_path("catalog-b.json");
    for path in [&out1, &out2] {
        let st = bin()
            .args(["enumerate-gbd", "--rank", "1", "--out"])
            .arg(path)
            .status()
            .unwrap();
        assert_eq!(st.code(), Some(0));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b, "catalog re-run must be byte-identical");
    let catalog: Value = serde_json::from_slice(&a).unwrap();
    let entries = catalog["entries"].as_array().unwrap();
    let valid: Vec<_> = entries.iter().filter(|e| e["valid"] == true).collect();
    assert_eq!(valid.len(), 2, "rank 1: empty triple and the full identity triple");
    assert_eq!(catalog["header"]["algebra"]["rank"], 1);
}

#[test]
fn catalog_rank_two_contains_the_swap_triple() {
    let out = bin().args(["enumerate-gbd", "--rank", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = report_of(&out);
    let found = report["entries"].as_array().unwrap().iter().any(|e| {
        e["s"] == serde_json::json!([0])
            && e["t"] == serde_json::json!([1])
            && e["d"] == serde_json::json!([[0, 1]])
            && e["valid"] == true
    });
    assert!(found, "single-simple-root swap must be a valid entry");
}

#[test]
fn build_splitting_emits_string_rationals() {
    let out = bin().args(["build-splitting", "--rank", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = report_of(&out);
    let basis = report["results"][0]["u"]["basis"].as_array().unwrap();
    assert!(!basis.is_empty());
    assert!(basis[0][0].is_string(), "rationals must be serialized as strings");
    assert_eq!(report["results"][0]["transversal"], true);
}

#[test]
fn rank_at_point_agrees_and_is_seed_deterministic() {
    let run = || {
        bin()
            .args(["rank-at-point", "--rank", "2", "--seed", "5", "--samples", "3"])
            .output()
            .unwrap()
    };
    let out1 = run();
    let out2 = run();
    assert_eq!(out1.status.code(), Some(0), "{}", String::from_utf8_lossy(&out1.stderr));
    let r1 = report_of(&out1);
    let r2 = report_of(&out2);
    assert_eq!(r1["results"], r2["results"], "same seed must reproduce the same payload");
    assert_eq!(r1["summary"]["agreed"], 3);
    assert_eq!(r1["summary"]["failed"], 0);
}

#[test]
fn verify_rank_main_reports_empty_intersections_distinctly() {
    // mismatched Weyl labels on the two orbit indices: no common point
    let spec = write_spec(
        "empty.json",
        r#"{"command":"verify-rank-main","algebra":{"type":"A","rank":1},
            "payload":{"idx1":{"v1":[0],"v2":[]},"idx2":{"w1":[],"w2":[]}}}"#,
    );
    let out = bin().args(["verify-rank-main", "--spec"]).arg(&spec).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = report_of(&out);
    assert_eq!(report["summary"]["empty_intersections"], 1);
    assert_eq!(report["results"][0]["outcome"], "empty-intersection");
}

#[test]
fn verify_rank_main_standard_anchor() {
    let out = bin().args(["verify-rank-main", "--rank", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = report_of(&out);
    assert_eq!(report["results"][0]["corank_main"], 0);
    assert_eq!(report["results"][0]["corank_nn"], 0);
}

#[test]
fn check_prop_cond_passes_at_rank_two() {
    let out = bin()
        .args(["check-prop-cond", "--rank", "2", "--seed", "3", "--samples", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = report_of(&out);
    assert_eq!(report["summary"]["failed"], 0);
    assert!(report["summary"]["total"].as_u64().unwrap() >= 4);
}

#[test]
fn run_suite_quick_passes_and_is_deterministic_modulo_runtime() {
    let spec = write_spec(
        "suite.json",
        r#"{"command":"run-suite","algebra":{"type":"A","rank":2},
            "payload":{"quick":true},"seed":2024,"sample_count":1}"#,
    );
    let run = |jobs: &str| {
        bin()
            .args(["run-suite", "--spec"])
            .arg(&spec)
            .args(["--jobs", jobs])
            .output()
            .unwrap()
    };
    let out1 = run("1");
    let out2 = run("4");
    assert_eq!(out1.status.code(), Some(0), "{}", String::from_utf8_lossy(&out1.stderr));
    let r1 = report_of(&out1);
    let r2 = report_of(&out2);
    assert_eq!(r1["results"], r2["results"], "results must not depend on --jobs");
    assert_eq!(r1["summary"]["failed"], 0);
    assert_eq!(r1["summary"]["total"], 10);
}

#[test]
fn run_suite_negative_control_flips_the_exit_code() {
    let spec = write_spec(
        "corrupt.json",
        r#"{"command":"run-suite","algebra":{"type":"A","rank":1},
            "payload":{"quick":true,"corrupt_structure":true},"seed":7,"sample_count":1}"#,
    );
    let out = bin().args(["run-suite", "--spec"]).arg(&spec).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "corrupted fixture must fail with the theory exit code");
    let report = report_of(&out);
    assert!(report["summary"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn weyl_bound_env_is_honored() {
    let out = bin()
        .args(["enumerate-gbd", "--rank", "3"])
        .env("MANINLAB_MAX_WEYL", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "a too-small bound must be a reported input error");
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound"));
}
