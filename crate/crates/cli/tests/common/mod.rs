#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn command(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_simrepair"));
    cmd.args(args).env_remove("SIMREPAIR_CACHE_DIR");
    cmd
}

pub fn simrepair(args: &[&str]) -> Output {
    command(args).output().expect("binary runs")
}

/// Run and require exit code 0; returns stdout.
pub fn ok(args: &[&str]) -> String {
    let out = simrepair(args);
    assert!(out.status.success(), "simrepair {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

pub fn code(args: &[&str]) -> i32 {
    simrepair(args).status.code().expect("exit code")
}

/// index + train + tasks for a bundled fixture.
pub fn prepare(run: &Path, name: &str, train: bool) {
    let run = run.to_str().unwrap();
    let root = fixture(name);
    ok(&["index", "--corpus", root.to_str().unwrap(), "--run-dir", run]);
    if train {
        ok(&["train", "--run-dir", run]);
    }
    ok(&["tasks", "--diffs", root.join("diffs").to_str().unwrap(), "--project", name, "--run-dir", run]);
}

pub fn report(run: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(run.join("report.json")).unwrap()).unwrap()
}

/// Ingredient-level row of a report by metric label.
pub fn ingredient_row<'a>(report: &'a serde_json::Value, metric: &str) -> &'a serde_json::Value {
    report["ingredient"].as_array().unwrap().iter().find(|r| r["metric"] == metric).unwrap_or_else(|| panic!("no {metric} row"))
}
