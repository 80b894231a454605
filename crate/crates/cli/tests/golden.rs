//! Byte-exact output checks. Set `UPDATE_GOLDEN=1` to rewrite the files.

use std::path::{Path, PathBuf};
use std::process::Command;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> (bool, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_graphpack"));
    cmd.current_dir(crate_dir()).args(args).env_remove("GPL_TIME_BUDGET");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let mut text = String::from_utf8(out.stdout).unwrap();
    text.push_str(&String::from_utf8(out.stderr).unwrap());
    (out.status.success(), text)
}

fn golden(name: &str, args: &[&str]) {
    golden_env(name, args, &[], true);
}

fn golden_env(name: &str, args: &[&str], envs: &[(&str, &str)], expect_success: bool) {
    let (ok, text) = run(args, envs);
    assert_eq!(ok, expect_success, "exit status of {args:?}:\n{text}");
    let path: PathBuf = crate_dir().join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(text, expected, "output of {args:?} differs from {}", Path::new(&path).display());
}

fn failure(name: &str, args: &[&str]) {
    golden_env(name, args, &[], false);
}

#[test]
fn types_text() {
    golden("types", &["types"]);
}

#[test]
fn types_csv() {
    golden("types_csv", &["types", "--format", "csv"]);
}

#[test]
fn genus_of_sl23_action() {
    golden("genus_24_334", &["genus", "24", "h=0;3,3,4"]);
}

#[test]
fn genus_unramified() {
    golden("genus_1_h2", &["genus", "1", "h=2;"]);
}

#[test]
fn genus_non_integral() {
    failure("genus_10_237", &["genus", "10", "h=0;2,3,7"]);
}

#[test]
fn vectors_of_s4() {
    golden("vectors_s4_234", &["vectors", "symmetric(4)", "(2,3,4)"]);
}

#[test]
fn pack_sl23() {
    golden("pack_sl23", &["pack", "sl2(3)", "h=0;3,3,4"]);
}

#[test]
fn pack_genus_one_rejected() {
    failure("pack_cyclic6", &["pack", "cyclic(6)", "h=0;2,3,6"]);
}

#[test]
fn pack_trivial_group() {
    golden("pack_trivial", &["pack", "trivial", "h=0;3,3,4"]);
}

#[test]
fn pack_catalog_group() {
    golden("pack_gl23", &["--catalog", "data/extra.cat", "pack", "GL23", "(2,3,8)"]);
}

#[test]
fn slope_example() {
    golden("slope_example", &["slope", "data/example-sl23.cfg"]);
}

#[test]
fn slope_etale() {
    golden("slope_etale", &["slope", "data/etale.cfg"]);
}

#[test]
fn slope_malformed() {
    failure("slope_malformed", &["slope", "tests/fixtures/malformed.cfg"]);
}

#[test]
fn slope_inconsistent() {
    failure("slope_inconsistent", &["slope", "tests/fixtures/inconsistent.cfg"]);
}

#[test]
fn verify_paper() {
    golden("verify_paper", &["verify-paper"]);
}

#[test]
fn search_records_csv() {
    golden("search_sl23_csv", &["search", "--group", "sl2(3)", "--type", "(3,3,4)", "--format", "csv"]);
}

#[test]
fn search_records_text() {
    golden(
        "search_order24_text",
        &["search", "--group", "sl2(3)", "--group", "symmetric(4)", "--group", "product(cyclic(2),alternating(4))"],
    );
}

#[test]
fn search_summary_with_catalog() {
    golden("search_summary", &["--catalog", "data/extra.cat", "search", "--max-genus", "3", "--summary"]);
}

#[test]
fn search_budget_from_environment() {
    golden_env(
        "search_env_budget",
        &["search", "--group", "sl2(3)", "--type", "(3,3,4)", "--summary", "--format", "csv"],
        &[("GPL_TIME_BUDGET", "7")],
        true,
    );
}

#[test]
fn reserved_catalog_name() {
    failure("reserved_name", &["--catalog", "tests/fixtures/reserved.cat", "types"]);
}

#[test]
fn duplicate_catalog_files() {
    failure("duplicate_catalog", &["--catalog", "data/extra.cat", "--catalog", "data/extra.cat", "types"]);
}

#[test]
fn unknown_group() {
    failure("unknown_group", &["pack", "sl2(4)", "(3,3,4)"]);
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["--catalog", "data/extra.cat", "search", "--max-genus", "3", "--format", "csv"];
    let first = run(&args, &[]);
    for _ in 0..3 {
        assert_eq!(run(&args, &[]), first);
    }
}
