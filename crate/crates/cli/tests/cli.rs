use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const PRESETS: &[&str] = &[
    "pgl2-split",
    "pgl2-unram",
    "pgl2-ramified",
    "a2-z3",
    "a2-z3-p5",
    "a2-s3",
    "pgsp4-siegel",
    "pgsp4-siegel-mixed",
    "pgsp4-siegel-unram",
    "g2-mix",
];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamesign"))
        .args(args)
        .current_dir(root())
        .env_remove("TAMESIGN_SCENARIO_DIR")
        .output()
        .expect("binary runs")
}

fn text(b: &[u8]) -> String {
    String::from_utf8(b.to_vec()).expect("utf-8")
}

/// Compares with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "golden {name}");
}

#[test]
fn scenario_list() {
    let out = run(&["scenario", "list"]);
    assert!(out.status.success());
    golden("scenario-list.txt", &text(&out.stdout));
}

#[test]
fn gauss_table() {
    let out = run(&["gauss", "--qmax", "121"]);
    assert_eq!(out.status.code(), Some(0));
    let s = text(&out.stdout);
    assert!(s.lines().nth(1).unwrap().starts_with("3,3,1,i,"));
    golden("gauss-121.csv", &s);
}

#[test]
fn eval_every_preset() {
    let dir = tempfile::tempdir().unwrap();
    for name in PRESETS {
        let stem = dir.path().join(name);
        let out = run(&["eval", "--scenario", name, "--out", stem.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", text(&out.stderr));
        let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
        golden(&format!("eval/{name}.csv"), &csv);
        let json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap())
                .unwrap();
        for row in json["rows"].as_array().unwrap() {
            assert_eq!(row["eps_x"], row["closed"], "{name}");
        }
    }
}

#[test]
fn eval_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("one");
    let out = run(&[
        "eval",
        "--scenario",
        "pgl2-ramified",
        "--gamma",
        "g^1",
        "--out",
        stem.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().ends_with(",i,-i"));
    let bad = run(&[
        "eval",
        "--scenario",
        "pgl2-ramified",
        "--gamma",
        "nonsense",
        "--out",
        stem.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn validation_errors_are_golden() {
    for (file, code) in [("bad-parity", 1), ("bad-jump", 1), ("not-json", 2)] {
        let out = run(&["scenario", "validate", &format!("tests/data/{file}.json")]);
        assert_eq!(out.status.code(), Some(code), "{file}");
        golden(&format!("{file}.stderr"), &text(&out.stderr));
    }
    let ok = run(&["scenario", "validate", "../../scenarios/g2-mix.json"]);
    assert!(ok.status.success());
}

#[test]
fn check_reports_are_deterministic() {
    let args = [
        "check", "--suite", "repack", "--trials", "10", "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["records"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["law"].is_string()));
}

#[test]
fn check_every_suite_on_one_scenario() {
    let out = run(&[
        "check",
        "--suite",
        "all",
        "--scenario",
        "pgsp4-siegel-mixed",
        "--trials",
        "10",
        "--points",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["suites"].as_array().unwrap().len(), 5);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["check", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        run(&["eval", "--scenario", "missing", "--out", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn scenario_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let doc = run(&["scenario", "show", "pgl2-unram"]);
    std::fs::write(dir.path().join("mine.json"), &doc.stdout).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tamesign"))
        .args(["check", "--suite", "repack", "--scenario", "mine"])
        .env("TAMESIGN_SCENARIO_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(Path::new(&dir.path().join("mine.json")).exists());
}
