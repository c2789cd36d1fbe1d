//! Golden-file tests: each case runs the binary twice, requires byte-identical
//! stdout across runs, and compares against `tests/golden/<name>.txt`.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the golden files.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unidissect"))
        .current_dir(root().join("tests/fixtures"))
        .args(args)
        .output()
        .expect("failed to spawn binary")
}

fn assert_golden(name: &str, args: &[&str], expected_code: i32) -> String {
    let first = run(args);
    let second = run(args);
    assert_eq!(
        first.status.code(),
        Some(expected_code),
        "{name}: unexpected exit status; stderr:\n{}",
        String::from_utf8_lossy(&first.stderr)
    );
    assert_eq!(
        first.stdout, second.stdout,
        "{name}: output differs between runs"
    );

    let path = root().join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &first.stdout).unwrap();
    }
    let expected =
        fs::read(&path).unwrap_or_else(|_| panic!("failed to read golden file {}", path.display()));
    assert_eq!(
        String::from_utf8_lossy(&first.stdout),
        String::from_utf8_lossy(&expected),
        "{name}: stdout does not match golden file"
    );
    String::from_utf8(first.stdout).unwrap()
}

#[test]
fn gen_three() {
    let out = assert_golden(
        "gen_three",
        &["gen", "--alpha", "1", "--beta", "2", "--count", "3"],
        0,
    );
    let lengths: Vec<_> = out
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["length"].clone())
        .collect();
    assert_eq!(lengths, ["1", "2", "4"]);
}

#[test]
fn gen_csv_by_depth() {
    assert_golden(
        "gen_csv_by_depth",
        &[
            "gen", "--alpha", "2", "--beta", "3", "--n-max", "13", "--format", "csv",
        ],
        0,
    );
}

#[test]
fn gen_plain_pi_bar() {
    let out = assert_golden(
        "gen_plain_pi_bar",
        &[
            "gen", "--alpha", "1", "--beta", "2", "--c", "3", "--count", "4", "--format", "plain",
        ],
        0,
    );
    assert_eq!(out, "24\n48\n96\n120\n");
}

#[test]
fn gen_empty() {
    let out = assert_golden(
        "gen_empty",
        &["gen", "--alpha", "1", "--beta", "2", "--count", "0"],
        0,
    );
    assert!(out.is_empty());
}

#[test]
fn gen_rejects_bad_params() {
    let out = run(&["gen", "--alpha", "2", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
}

#[test]
fn check_growth_violation() {
    let out = assert_golden(
        "check_growth_violation",
        &[
            "check", "growth", "--alpha", "1", "--beta", "2", "--c", "3/2", "--count", "8",
        ],
        1,
    );
    assert!(out.contains(r#""witness":{"index":0,"length":"1","successor_length":"2"}"#));
}

#[test]
fn check_growth_pi_bar_ok() {
    assert_golden(
        "check_growth_pi_bar_ok",
        &[
            "check", "growth", "--alpha", "2", "--beta", "3", "--c", "2", "--bar", "--count", "300",
        ],
        0,
    );
}

#[test]
fn check_divisibility() {
    let out = assert_golden(
        "check_divisibility",
        &[
            "check",
            "divisibility",
            "--alpha",
            "1",
            "--beta",
            "2",
            "--n-max",
            "10",
        ],
        0,
    );
    assert!(out.contains(r#""ok":true"#));
}

#[test]
fn check_ratio() {
    let out = assert_golden(
        "check_ratio",
        &[
            "check", "ratio", "--alpha", "2", "--beta", "3", "--count", "50",
        ],
        0,
    );
    assert!(out.contains(r#""ok":true"#));
    let stderr = String::from_utf8(
        run(&[
            "check", "ratio", "--alpha", "2", "--beta", "3", "--count", "50",
        ])
        .stderr,
    )
    .unwrap();
    assert_eq!(stderr.lines().count(), 2, "gaps are surfaced on stderr");
}

#[test]
fn dissect_progression() {
    let out = assert_golden(
        "dissect_progression",
        &[
            "dissect", "--alpha", "1", "--beta", "2", "--q", "0", "--r", "2",
        ],
        0,
    );
    assert!(out.contains(r#""finite_side":"difference","exceptional_lengths":["1"]"#));
}

#[test]
fn dissect_parity_file_with_cross_check() {
    let out = assert_golden(
        "dissect_parity_cross_check",
        &[
            "dissect",
            "--alpha",
            "1",
            "--beta",
            "2",
            "--dfa",
            "parity.json",
            "--cross-check",
            "200",
        ],
        0,
    );
    let cert: unidissect::DissectionVerdict = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(cert.cross_check, Some(true));
    unidissect::verify_certificate(&cert).unwrap();
}

#[test]
fn dissect_input_errors() {
    for args in [
        &["dissect", "--alpha", "1", "--beta", "2", "--r", "0"][..],
        &[
            "dissect",
            "--alpha",
            "1",
            "--beta",
            "2",
            "--dfa",
            "broken.json",
        ],
        &[
            "dissect",
            "--alpha",
            "1",
            "--beta",
            "2",
            "--dfa",
            "missing.json",
        ],
        &["dissect", "--alpha", "1", "--beta", "2"],
        &[
            "dissect",
            "--alpha",
            "1",
            "--beta",
            "2",
            "--r",
            "2",
            "--cross-check",
            "1",
        ],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn suggest() {
    assert_eq!(
        assert_golden("suggest_3_2", &["suggest", "--c", "3/2"], 0),
        "{\"alpha\":3,\"beta\":4}\n"
    );
    assert_eq!(
        assert_golden("suggest_2_1", &["suggest", "--c", "2/1"], 0),
        "{\"alpha\":2,\"beta\":3}\n"
    );
    assert_eq!(run(&["suggest", "--c", "1/1"]).status.code(), Some(2));
    assert_eq!(run(&["suggest", "--c", "banana"]).status.code(), Some(2));
}

#[test]
fn dfa_subcommands() {
    assert_eq!(
        assert_golden(
            "dfa_normalize",
            &["dfa", "normalize", "--dfa", "table.json"],
            0
        ),
        "{\"tail\":[false],\"cycle\":[false,true]}\n"
    );
    assert_eq!(
        assert_golden(
            "dfa_decompose",
            &["dfa", "decompose", "--dfa", "parity.json"],
            0
        ),
        "{\"components\":[{\"q\":0,\"r\":2}],\"exceptional\":[0]}\n"
    );
}
