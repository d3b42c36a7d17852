//! End-to-end runs of the binary against the shipped fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bordcalc"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn su_run_resolves_the_full_table() {
    let out = run(&[
        "ss",
        &fixture("su.space"),
        "--coeff",
        "spin",
        "--hints",
        &fixture("su.hints"),
        "--upto",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("E2:"), "{text}");
    assert!(text.contains("n=3: Z\n"), "{text}");
    assert!(text.contains("piece (5,0) Z  2b3"), "{text}");
    assert!(text.contains("n=7: Z^2\n"), "{text}");
    assert!(text.contains("n=8: Z\n"), "{text}");
}

#[test]
fn kz3_run_resolves_the_full_table() {
    let out = run(&[
        "ss",
        &fixture("kz3.space"),
        "--hints",
        &fixture("kz3.hints"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("n=7: Z\n"), "{text}");
    assert!(text.contains("n=8: Z/2\n"), "{text}");
}

#[test]
fn missing_space_file_is_an_input_error() {
    let out = run(&["ss", "missing.space"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parametric_table_exits_with_code_two() {
    let out = run(&[
        "ss",
        &fixture("bsu.space"),
        "--coeff",
        &fixture("omega_su.coeff"),
        "--hints",
        &fixture("lbsu.hints"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("n=7: Z^3\n"), "{text}");
    assert!(text.contains("n=8: Z/k\n"), "{text}");
}

#[test]
fn machine_mode_emits_key_value_lines() {
    let out = run(&[
        "ss",
        &fixture("su.space"),
        "--hints",
        &fixture("su.hints"),
        "--machine",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("n.7=Z^2\n"), "{text}");
    assert!(text.contains("labels.5.5=2b3\n"), "{text}");
}

#[test]
fn page_mode_prints_one_page() {
    let out = run(&[
        "ss",
        &fixture("su.space"),
        "--hints",
        &fixture("su.hints"),
        "--page",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("(3,0) Z  b2"), "{text}");
    assert!(!text.contains("n="), "{text}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "ss".to_string(),
        fixture("su.space"),
        "--hints".to_string(),
        fixture("su.hints"),
    ];
    let args: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn floer_moduli() {
    for (r, want) in [("2", "8"), ("3", "6"), ("9", "2")] {
        let out = run(&["floer", r]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out).trim(), want);
    }
    let out = run(&["floer", "3", "--stabilize", "6"]);
    assert_eq!(stdout(&out).trim(), "24");
    let out = run(&["floer", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn xi_on_the_instanton_sum() {
    let out = run(&[
        "xi",
        "--blocks",
        "S4,S3,S1",
        "--c2",
        "s4 + s3 s1",
        "--c4",
        "s4 s3 s1",
        "--r",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "(0,0,1)  Xi=2");
}

#[test]
fn xi_on_the_trivial_bundle() {
    let out = run(&["xi", "--blocks", "S4,S3,S1", "--r", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "(0,0,0)  Xi=0");
}

#[test]
fn abc_on_the_k3_product() {
    let out = run(&["abc", "--blocks", "K3,S3,S1", "--c2", "s3 s1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "(0,1,0)");
}

#[test]
fn non_integral_invariant_exits_with_code_three() {
    let out = run(&["xi", "--blocks", "S7,S1", "--c4", "s7 s1", "--r", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn orientability_verdict_lines() {
    let out = run(&["orientable", "Sp(2)", "--n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        "COUNTEREXAMPLE: Sp(2) x_{Sp(1)xSp(1)} Sp(1)"
    );
    let out = run(&["orientable", "SU(5) x E8", "--n", "8"]);
    assert_eq!(stdout(&out).trim(), "ORIENTABLE-ALL");
    let out = run(&["orientable", "SO(10)/K", "--n", "7"]);
    assert_eq!(stdout(&out).trim(), "ORIENTABLE-ALL [simply-connected]");
    let out = run(&["orientable", "SU()", "--n", "7"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn picard_query_lines() {
    let out = run(&["picard", "ses-check", "Z/2", "Z/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "|Alt|=1 |Skew|=2 exact=true");
    let out = run(&["picard", "forgetful"]);
    assert_eq!(stdout(&out).trim(), "NOT SYMMETRIC-MONOIDAL");
    let out = run(&["picard", "identity"]);
    assert_eq!(stdout(&out).trim(), "OK");
    let out = run(&["picard", "torsor"]);
    assert_eq!(stdout(&out).trim(), "OK");
    let out = run(&["picard", "ses-check", "Z", "Z/2"]);
    assert_eq!(out.status.code(), Some(1));
}
