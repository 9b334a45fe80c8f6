//! The binary end to end: exit codes, files written, report round trips
//! and SVG golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use flutelab_cli::json::to_report_string;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flutelab"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn cfg(name: &str) -> String {
    configs().join(name).display().to_string()
}

#[test]
fn build_twisted_reports_sequence() {
    let out = run(&["build", "--config", &cfg("twisted.ini"), "--set", "surface.N=6"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["p"], serde_json::json!([2, 5, 11, 23, 47, 95]));
    assert_eq!(v["schottky"]["pass"], true);
}

#[test]
fn build_default_untwisted_passes() {
    let out = run(&["build"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["surface"]["N"], 8);
    assert!(v["schottky"]["minMargin"].as_f64().unwrap() > 0.0);
}

#[test]
fn small_delta_is_a_config_error() {
    let out = run(&["build", "--config", &cfg("twisted.ini"), "--set", "surface.delta=0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("delta > 1"), "{err}");
    assert!(err.contains("--set:1:15"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn config_errors_carry_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ini");
    std::fs::write(&path, "[surface]\nkind = twisted-delta\n  delta = 0.5\n").unwrap();
    let out = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.ini:3:11: delta > 1"), "{err}");

    std::fs::write(&path, "[surface]\nshape = round\n").unwrap();
    let out = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.ini:2:1: unknown key"));
}

#[test]
fn usage_errors_are_config_errors() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["build", "--set"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_files_are_io_errors() {
    let out = run(&["build", "--config", "/nonexistent/flutelab.ini"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["build", "--set", "output.jsonPath=/nonexistent/dir/report.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn failing_construction_exits_two() {
    // The plain geometric schedule has overlapping circles at N = 8.
    let out = run(&["build", "--set", "surface.schedule=geometric"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["schottky"]["pass"], false);
    let out = run(&["verify", "--set", "surface.schedule=geometric"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["scan", "--set", "surface.schedule=geometric"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_on_both_families() {
    for args in [
        vec!["verify".to_string()],
        vec!["verify".into(), "--config".into(), cfg("twisted.ini")],
        vec!["verify".into(), "--set".into(), "surface.N=0".into()],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let out = run(&["verify", "--set", "surface.N=0"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: empty surface"));
}

#[test]
fn limits_rows_and_wrong_kind() {
    let out = run(&["limits", "--config", &cfg("twisted.ini")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!(r["error"].as_f64().unwrap() < 1e-2);
    }
    assert_eq!(run(&["limits"]).status.code(), Some(1));
}

#[test]
fn reports_written_to_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, cfg_name) in [
        ("build", "untwisted.ini"),
        ("verify", "twisted.ini"),
        ("limits", "twisted.ini"),
        ("scan", "untwisted.ini"),
        ("profile", "untwisted.ini"),
    ] {
        let path = dir.path().join(format!("{cmd}.json"));
        let set = format!("output.jsonPath={}", path.display());
        let extra: &[&str] = if cmd == "profile" {
            &["--set", "profile.steps=40", "--set", "profile.wordRadius=2"]
        } else {
            &[]
        };
        let config = cfg(cfg_name);
        let mut args = vec![cmd, "--config", &config, "--set", &set];
        args.extend_from_slice(extra);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        let text = std::fs::read_to_string(&path).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(to_report_string(&back), text, "{cmd} report does not round-trip");
    }
}

#[test]
fn profile_has_documented_keys() {
    let out = run(&["profile", "--set", "profile.steps=40", "--set", "profile.wordRadius=2"]);
    let v = stdout_json(&out);
    for key in ["times", "inj", "wordRadius", "genCount", "runningMinTail"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn scan_on_default_surface_has_no_stable_nonzero_candidates() {
    let out = run(&["scan", "--config", &cfg("untwisted.ini")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["stableNonzero"], serde_json::json!([]));
    assert!(v["wordsExamined"].as_u64().unwrap() > 0);
}

#[test]
fn scan_is_independent_of_thread_count() {
    let a = bin()
        .args(["scan", "--config", &cfg("twisted.ini")])
        .env("FLUTELAB_THREADS", "1")
        .output()
        .unwrap();
    let b = bin()
        .args(["scan", "--config", &cfg("twisted.ini")])
        .env("FLUTELAB_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bad = bin().arg("build").env("FLUTELAB_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn render_matches_golden_files() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for name in ["twisted", "untwisted"] {
        let out = run(&["render", "--config", &cfg(&format!("{name}.ini"))]);
        assert_eq!(out.status.code(), Some(0));
        let again = run(&["render", "--config", &cfg(&format!("{name}.ini"))]);
        assert_eq!(out.stdout, again.stdout);
        let expected = std::fs::read(golden.join(format!("{name}.svg"))).unwrap();
        assert!(out.stdout == expected, "{name}.svg differs from the golden file");
    }
}

#[test]
fn render_writes_svg_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.svg");
    let set = format!("output.svgPath={}", path.display());
    let out = run(&["render", "--set", &set]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.contains("class=\"ray\""));
    assert!(text.contains("class=\"horocycle\""));
}
