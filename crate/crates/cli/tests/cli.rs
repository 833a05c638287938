//! End-to-end tests of the binary: exit-code classes, byte-stable
//! structured output, and the file formats.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_approxforms"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) {
    std::fs::write(dir.join(name), content).expect("fixture written");
}

fn fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().expect("tempdir");
    write(
        dir.path(),
        "chain.json",
        r#"{"elements": ["a", "b", "c"], "le": [["a", "b"], ["b", "c"]]}"#,
    );
    write(
        dir.path(),
        "bool.json",
        r#"{"elements": ["0", "1"], "le": [["0", "1"]]}"#,
    );
    write(
        dir.path(),
        "psi.json",
        r#"{"domain": "chain.json", "codomain": "bool.json", "map": {"a": "1", "b": "0", "c": "1"}}"#,
    );
    write(
        dir.path(),
        "primal.json",
        r#"{"codomain": "bool.json", "polarity": "primal",
            "dissociate": ["0", "0", "1", "0"],
            "combine_binary": ["0", "1", "1", "1"],
            "combine_join": true, "null_op": ["0", "0"]}"#,
    );
    write(
        dir.path(),
        "dual.json",
        r#"{"codomain": "bool.json", "polarity": "dual",
            "dissociate": ["1", "0", "1", "1"],
            "combine_binary": ["0", "0", "0", "1"],
            "combine_join": true, "null_op": ["1", "1"]}"#,
    );
    write(
        dir.path(),
        "uniformish.json",
        r#"{"p": [0.3, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]}"#,
    );
    dir
}

#[test]
fn choice_table_text_layout() {
    let out = run(&["choice", "table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for row in [
        "0   0   0       x2  0        x2  0",
        "0   1   1       x3  1        x1  0",
        "1   1   1       x3  1        x1  1",
    ] {
        assert!(text.contains(row), "missing row in:\n{text}");
    }
    assert!(text.ends_with("verdict: pass\n"));
}

#[test]
fn structured_output_is_byte_stable() {
    for args in [
        vec!["ensemble", "golden", "--output", "structured"],
        vec!["choice", "table", "--output", "structured"],
        vec![
            "ensemble",
            "pure",
            "--x1",
            "0.4",
            "--x2",
            "0.4",
            "--x3",
            "0.4",
            "--output",
            "structured",
        ],
        vec![
            "verify-suite",
            "--seed",
            "7",
            "--instances",
            "20",
            "--max-arity",
            "2",
            "--output",
            "structured",
        ],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert!(
            first.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&first.stderr)
        );
        assert_eq!(first.stdout, second.stdout, "{args:?} not reproducible");
        assert!(first.stdout.ends_with(b"\n"));
    }
}

#[test]
fn sampling_is_seed_stable() {
    let dir = fixtures();
    let args = [
        "ensemble",
        "sample",
        "--p",
        "uniformish.json",
        "--n",
        "200000",
        "--seed",
        "9",
        "--output",
        "structured",
    ];
    let first = run_in(dir.path(), &args);
    let second = run_in(dir.path(), &args);
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn decompose_primal_from_files() {
    let dir = fixtures();
    let out = run_in(
        dir.path(),
        &[
            "decompose",
            "--poset",
            "chain.json",
            "--codomain",
            "bool.json",
            "--function",
            "psi.json",
            "--algebra",
            "primal.json",
            "--theorem",
            "1",
            "--pad",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("3 components, 2 dissociations (bound 2)"));
    assert!(text.contains("verified: true"));
}

#[test]
fn decompose_dual_from_files() {
    let dir = fixtures();
    let out = run_in(
        dir.path(),
        &[
            "decompose",
            "--poset",
            "chain.json",
            "--codomain",
            "bool.json",
            "--function",
            "psi.json",
            "--algebra",
            "dual.json",
            "--theorem",
            "3",
            "--dual",
            "--output",
            "structured",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(r#""verified": true"#), "{text}");
}

#[test]
fn decompose_layered_from_files() {
    let dir = fixtures();
    let out = run_in(
        dir.path(),
        &[
            "decompose",
            "--poset",
            "chain.json",
            "--codomain",
            "bool.json",
            "--function",
            "psi.json",
            "--algebra",
            "primal.json",
            "--theorem",
            "2",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("3 components"), "{text}");
    assert!(text.contains("verified: true"));
}

#[test]
fn subset_limit_flag_reaches_the_checker() {
    let dir = fixtures();
    let out = run_in(
        dir.path(),
        &[
            "--limit-subsets",
            "1",
            "check-axioms",
            "--algebra",
            "primal.json",
            "--system",
            "A",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("subset-enumeration limit"));
    let out = run_in(
        dir.path(),
        &[
            "--limit-subsets",
            "4",
            "check-axioms",
            "--algebra",
            "primal.json",
            "--system",
            "A",
        ],
    );
    assert!(out.status.success());
}

#[test]
fn polarity_flag_must_match_the_algebra_file() {
    let dir = fixtures();
    let out = run_in(
        dir.path(),
        &[
            "decompose",
            "--poset",
            "chain.json",
            "--codomain",
            "bool.json",
            "--function",
            "psi.json",
            "--algebra",
            "primal.json",
            "--theorem",
            "1",
            "--dual",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn axiom_violations_exit_with_one() {
    let dir = fixtures();
    write(
        dir.path(),
        "broken.json",
        r#"{"codomain": "bool.json", "polarity": "primal",
            "dissociate": ["0", "0", "1", "0"],
            "combine_binary": ["0", "1", "1", "1"],
            "combine_join": true, "null_op": ["1", "1"]}"#,
    );
    let out = run_in(
        dir.path(),
        &["check-axioms", "--algebra", "broken.json", "--system", "B"],
    );
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("B3"), "{text}");
    assert!(text.contains("verdict: fail"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = fixtures();
    // A cycle in the order.
    write(
        dir.path(),
        "cyclic.json",
        r#"{"elements": ["a", "b"], "le": [["a", "b"], ["b", "a"]]}"#,
    );
    let out = run_in(
        dir.path(),
        &["check-axioms", "--algebra", "cyclic.json", "--system", "B"],
    );
    assert_eq!(out.status.code(), Some(2));

    // Map referencing an element the poset does not declare.
    write(
        dir.path(),
        "dangling.json",
        r#"{"domain": "chain.json", "codomain": "bool.json", "map": {"a": "1", "b": "0", "z": "1"}}"#,
    );
    let out = run_in(
        dir.path(),
        &[
            "decompose",
            "--poset",
            "chain.json",
            "--codomain",
            "bool.json",
            "--function",
            "dangling.json",
            "--algebra",
            "primal.json",
            "--theorem",
            "1",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown element"));

    // Probabilities that do not sum to one.
    write(
        dir.path(),
        "short.json",
        r#"{"p": [0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]}"#,
    );
    let out = run_in(dir.path(), &["ensemble", "marginals", "--p", "short.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum to 1"));

    // Missing file.
    let out = run(&["ensemble", "marginals", "--p", "/nonexistent/p.json"]);
    assert_eq!(out.status.code(), Some(2));

    // Malformed table string.
    let out = run(&["inf", "--arity", "2", "--table", "01x1"]);
    assert_eq!(out.status.code(), Some(2));

    // Wrong table length.
    let out = run(&["inf", "--arity", "3", "--table", "0101"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inf_synthesis_and_verify() {
    let out = run(&["inf", "--arity", "3", "--table", "01001111"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("k = 2"), "{text}");

    let out = run(&["inf", "verify", "--arity", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("16 functions checked, 0 failures"));
}

#[test]
fn marginals_golden_bytes() {
    let dir = fixtures();
    let out = run_in(
        dir.path(),
        &[
            "ensemble",
            "marginals",
            "--p",
            "uniformish.json",
            "--output",
            "structured",
        ],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // Pinned byte-for-byte; any drift in key order or float formatting is a
    // compatibility break.
    assert_eq!(
        text,
        concat!(
            r#"{"command": "ensemble-marginals", "diagnostics": [], "payload": "#,
            r#"{"exact": {"x1": 4.0000000000000002e-1, "x2": 4.0000000000000002e-1, "#,
            r#""x3": 4.0000000000000002e-1, "z": 5.0000000000000000e-1}, "#,
            r#""p": [2.9999999999999999e-1, 1.0000000000000001e-1, 1.0000000000000001e-1, "#,
            r#"1.0000000000000001e-1, 1.0000000000000001e-1, 1.0000000000000001e-1, "#,
            r#"1.0000000000000001e-1, 1.0000000000000001e-1]}, "verdict": "info"}"#,
            "\n"
        )
    );
}

#[test]
fn choice_trace_output() {
    let out = run(&[
        "choice",
        "--x1",
        "0",
        "--x2",
        "1",
        "--x3",
        "1",
        "--algorithm",
        "approx",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("stages: x2 -> x1 -> x1"), "{text}");
    assert!(text.contains("chosen x1 with value 0"));

    let out = run(&[
        "choice",
        "--x1",
        "0",
        "--x2",
        "1",
        "--x3",
        "1",
        "--algorithm",
        "exact",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("stages: x2 -> x1 -> x3"), "{text}");
    assert!(text.contains("chosen x3 with value 1"));

    let out = run(&[
        "choice",
        "--x1",
        "2",
        "--x2",
        "0",
        "--x3",
        "0",
        "--algorithm",
        "exact",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn region_scan_reports_the_counterexample() {
    let out = run(&[
        "ensemble",
        "region",
        "--x1",
        "0.5",
        "--x2",
        "0",
        "--x3",
        "0.5",
        "--seed",
        "3",
        "--output",
        "structured",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(r#""holds_for_all": false"#), "{text}");
    assert!(text.contains(r#""worst_deviation": 2.5"#), "{text}");
}
