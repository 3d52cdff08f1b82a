//! The `topos` binary end to end: exit codes, output files and formats.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const GRAPHS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/workspaces/graphs.topos");

fn topos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn coproduct_report_has_sizes_and_an_iso_to_the_disjoint_union() {
    let out = topos(&["--workspace", GRAPHS, "derive-coproduct", "edge", "node"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["status"], "pass");
    assert_eq!(
        report["command"],
        serde_json::json!(["derive-coproduct", "edge", "node"])
    );
    let sizes: Vec<(String, u64)> = report["result"]["carriers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c["object"].as_str().unwrap().to_string(),
                c["size"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(sizes, vec![("V".to_string(), 3), ("E".to_string(), 1)]);
    assert!(report["result"]["native_iso"]["forward"].is_array());
    assert!(report["result"]["native_iso"]["backward"].is_array());
}

#[test]
fn copair_commutes() {
    let out = topos(&[
        "-w",
        GRAPHS,
        "derive-copair",
        "edge",
        "node",
        "squash",
        "point",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["commutes"], true);
}

#[test]
fn initial_object_of_the_terminal_base_is_empty() {
    let out = topos(&["derive-initial", "terminal"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["result"]["carriers"],
        serde_json::json!([{"object": "*", "size": 0}])
    );
}

#[test]
fn input_errors_exit_with_three() {
    assert_eq!(
        topos(&["-w", GRAPHS, "derive-coproduct", "edge", "missing"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(topos(&["explain", "NO_SUCH_CHECK"]).status.code(), Some(3));
    assert_eq!(
        topos(&["-w", "/nonexistent/file.topos", "validate"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(topos(&["verify"]).status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.topos");
    std::fs::write(&bad, "base g\n  objects A\n  arrow f : A -> B\n").unwrap();
    let out = topos(&["-w", bad.to_str().unwrap(), "validate"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3:18: unknown object `B`"));
}

#[test]
fn budget_overruns_exit_with_two() {
    let out = topos(&[
        "-w",
        GRAPHS,
        "--budget",
        "3",
        "derive-coproduct",
        "edge",
        "node",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "budget-exceeded");
}

#[test]
fn failing_checks_exit_with_one() {
    let out = topos(&[
        "--backend",
        "unnatural-pushforward",
        "--instances",
        "40",
        "verify",
        "--suite",
        "MONO_REFL",
        "BC_left",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["config"]["backend"], "unnatural-pushforward");
    let failed = report["result"]["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["verdict"] == "fail")
        .unwrap();
    assert_eq!(failed["check"], "MONO_REFL");
    assert!(failed["witness"].as_str().is_some_and(|w| !w.is_empty()));
}

#[test]
fn flags_override_workspace_config() {
    let dir = tempfile::tempdir().unwrap();
    let ws = dir.path().join("cfg.topos");
    std::fs::write(&ws, "config\n  seed 5\n  instances 3\n  budget 777777\n").unwrap();
    let out = topos(&[
        "-w",
        ws.to_str().unwrap(),
        "--seed",
        "8",
        "verify",
        "--suite",
        "BC_left",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["config"]["seed"], 8);
    assert_eq!(report["config"]["instances"], 3);
    assert_eq!(report["config"]["budget"], 777777);
}

#[test]
fn reports_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = topos(&["--out", path.to_str().unwrap(), "explain", "COPROD_UNIV"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["result"]["check"], "COPROD_UNIV");
}

#[test]
fn text_format_is_line_oriented() {
    let out = topos(&[
        "--format",
        "text",
        "--instances",
        "2",
        "verify",
        "--suite",
        "all",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("DESCENT")));
    assert_eq!(text.lines().last(), Some("status: pass"));
}

#[test]
fn timings_are_off_unless_asked_for() {
    let plain = topos(&["--instances", "1", "verify", "--suite", "BC_left"]);
    assert!(!String::from_utf8_lossy(&plain.stdout).contains("elapsed_us"));
    let timed = topos(&[
        "--timings",
        "--instances",
        "1",
        "verify",
        "--suite",
        "BC_left",
    ]);
    assert!(String::from_utf8_lossy(&timed.stdout).contains("elapsed_us"));
}

#[test]
fn fmt_prints_the_canonical_workspace() {
    let out = topos(&["-w", GRAPHS, "fmt"]);
    assert_eq!(out.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let again = dir.path().join("again.topos");
    std::fs::write(&again, &out.stdout).unwrap();
    let twice = topos(&["-w", again.to_str().unwrap(), "fmt"]);
    assert_eq!(out.stdout, twice.stdout);
    assert!(Path::new(&again).exists());
}
