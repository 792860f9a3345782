//! End-to-end checks of the binary: exit codes, report formats, dataset
//! file ingestion, and the regression runner.

use std::process::{Command, Output};

fn avindex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avindex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn dirac_sphere_both_engines_exits_zero() {
    let out = avindex(&[
        "index",
        "--builtin",
        "s2-rotation",
        "--operator",
        "dirac",
        "--engine",
        "both",
    ]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let text = stdout(&out);
    assert!(text.contains("exact index: 0"), "{}", text);
    assert!(text.contains("numeric index: 0.000000000000"), "{}", text);
}

#[test]
fn uncancelled_singularity_exits_two_with_certificate() {
    let out = avindex(&["index", "--builtin", "example9-n11", "--engine", "exact"]);
    assert_eq!(out.status.code(), Some(2), "{:?}", out);
    let text = stdout(&out);
    assert!(text.contains("singularity not cancelled"), "{}", text);
    assert!(text.contains("1 - 2*u^2 + u^4"), "{}", text);
}

#[test]
fn missing_dataset_exits_one() {
    let out = avindex(&["index", "--dataset", "does-not-exist.json"]);
    assert_eq!(out.status.code(), Some(1), "{:?}", out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn malformed_dataset_exits_one() {
    let dir = std::env::temp_dir().join("avindex-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = avindex(&["index", "--dataset", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{:?}", out);
}

#[test]
fn zero_chamber_is_rejected_for_numeric() {
    let out = avindex(&[
        "index",
        "--builtin",
        "example9-n11",
        "--engine",
        "numeric",
        "--chamber",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1), "{:?}", out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("hyperplane"));
}

#[test]
fn json_report_round_trips() {
    let out = avindex(&[
        "index",
        "--builtin",
        "cp2-s1",
        "--engine",
        "both",
        "--report",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let text = stdout(&out);
    let parsed: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    assert_eq!(parsed["exact"]["value"]["index"], "1");
    // Emitting what we parsed reproduces the document.
    let re_emitted = serde_json::to_string_pretty(&parsed).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&re_emitted).unwrap();
    assert_eq!(parsed, reparsed);
}

#[test]
fn dataset_file_matches_builtin() {
    let dir = std::env::temp_dir().join("avindex-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s2.json");
    std::fs::write(
        &path,
        r#"{
          "rank": 1,
          "operator": "dirac",
          "components": [
            { "name": "north", "dim": 0,
              "normal_lines": [ { "weight": [1] } ], "sign": 1 },
            { "name": "south", "dim": 0,
              "normal_lines": [ { "weight": [-1] } ], "sign": 1 }
          ]
        }"#,
    )
    .unwrap();
    let out = avindex(&[
        "index",
        "--dataset",
        path.to_str().unwrap(),
        "--engine",
        "exact",
    ]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    assert!(stdout(&out).contains("exact index: 0"));
}

#[test]
fn nclass_reports_finite_coefficient() {
    let out = avindex(&[
        "nclass",
        "--builtin",
        "example9-n11",
        "--chamber",
        "3/10",
        "--nodes",
        "1024",
        "--report",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let value = parsed["components"][0]["coefficients"][0]["value"]
        .as_f64()
        .unwrap();
    assert!(value.is_finite());
}

#[test]
fn truncation_override_does_not_change_the_index() {
    let base = avindex(&["index", "--builtin", "k3", "--engine", "exact"]);
    let raised = avindex(&["index", "--builtin", "k3", "--engine", "exact", "--trunc", "4"]);
    assert_eq!(base.status.code(), Some(0));
    assert_eq!(raised.status.code(), Some(0));
    assert!(stdout(&base).contains("exact index: 2"));
    assert!(stdout(&raised).contains("exact index: 2"));
}

#[test]
fn selftest_filter_runs_single_check() {
    let out = avindex(&["selftest", "--filter", "euler"]);
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let text = stdout(&out);
    assert!(text.contains("PASS euler-specialization"), "{}", text);
    assert!(text.contains("1 passed, 0 failed"), "{}", text);
}

#[test]
fn list_names_every_builtin() {
    let out = avindex(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["s2-rotation", "cp2-t2", "example9-augmented", "k3"] {
        assert!(text.contains(name), "{}", text);
    }
}
