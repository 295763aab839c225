//! End-to-end tests against the compiled binary: output shapes, exit codes,
//! and determinism guarantees.

use std::process::{Command, Output};

fn tamelink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamelink"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn classify_reports_the_known_triple_in_json() {
    let out = tamelink(&["classify", "-p", "3", "-S", "7,31,229", "--format", "json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["p"], 3);
    assert_eq!(report["s_min"], serde_json::json!([7, 31, 229]));
    let triple = report["findings"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["rule"] == "powerful-triple")
        .expect("triple rule present");
    assert_eq!(triple["conclusion"]["type"], "Sl21OnlyInfiniteOption");
    assert!(triple["preconditions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["holds"] == true));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["classify", "-p", "3", "-S", "7,31,229", "--format", "json"];
    let first = tamelink(&args);
    let second = tamelink(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn root_choice_does_not_change_the_classification() {
    let smallest = tamelink(&[
        "classify",
        "-p",
        "5",
        "-S",
        "11,31,1021",
        "--format",
        "json",
    ]);
    let second = tamelink(&[
        "classify",
        "-p",
        "5",
        "-S",
        "11,31,1021",
        "--format",
        "json",
        "--second-roots",
    ]);
    assert!(smallest.status.success());
    assert_eq!(smallest.stdout, second.stdout);
}

#[test]
fn witness_verifies_and_reports_the_precision() {
    let out = tamelink(&["verify-witness", "-p", "3", "-q", "7", "-K", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("relator = I at precision 3^8"), "got: {text}");
}

#[test]
fn tame_bound_json_and_exit_codes() {
    let bounded = tamelink(&["tame-bound", "-S", "2,3,5", "--format", "json"]);
    assert!(bounded.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&bounded)).unwrap();
    assert_eq!(report["product"], "30");
    assert_eq!(report["bound"], 360);

    // A product above the threshold is a negative answer, not an error.
    let unbounded = tamelink(&["tame-bound", "-S", "2,31"]);
    assert_eq!(unbounded.status.code(), Some(1));
    assert!(stdout(&unbounded).contains("bounded = false"));
}

#[test]
fn search_finds_the_triple_and_parallel_output_is_identical() {
    let seq = tamelink(&["search-triples", "-p", "3", "--qmax", "250"]);
    assert!(seq.status.success());
    assert!(stdout(&seq).lines().any(|l| l == "7 31 229"));
    let par = tamelink(&["search-triples", "-p", "3", "--qmax", "250", "--parallel"]);
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn hensel_sqrt_matches_the_frozen_small_case() {
    // 4^2 = 16 = 7 mod 9.
    let out = tamelink(&["hensel-sqrt", "-p", "3", "-q", "7", "-K", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("sqrt(7) = 4 mod 3^2"));
}

#[test]
fn linearize_matches_on_seeded_assignments() {
    for seed in ["0", "42", "1234567"] {
        let out = tamelink(&["linearize", "-p", "3", "-S", "7,13", "--seed", seed]);
        assert!(out.status.success(), "seed {seed}");
        assert!(stdout(&out).contains("all relators match: true"));
    }
}

#[test]
fn validation_errors_exit_with_two() {
    let composite_p = tamelink(&["classify", "-p", "4", "-S", "7"]);
    assert_eq!(composite_p.status.code(), Some(2));
    let duplicate = tamelink(&["classify", "-p", "3", "-S", "7,7"]);
    assert_eq!(duplicate.status.code(), Some(2));
    let out_of_range = tamelink(&["verify-witness", "-p", "3", "-q", "7", "-K", "65"]);
    assert_eq!(out_of_range.status.code(), Some(2));
    let not_one_mod_p = tamelink(&["verify-witness", "-p", "3", "-q", "5"]);
    assert_eq!(not_one_mod_p.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_file_and_keeps_stdout_empty() {
    let path = std::env::temp_dir().join(format!("tamelink-out-{}.json", std::process::id()));
    let out = tamelink(&[
        "tame-bound",
        "-S",
        "2,3,5",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(report["bound"], 360);
    std::fs::remove_file(&path).unwrap();
}
