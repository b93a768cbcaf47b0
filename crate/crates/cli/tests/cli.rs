//! End-to-end checks of the command-line interface: exit codes, output
//! formats, and determinism across worker counts.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_minzero"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_horn_and_analyze_pipe() {
    let horn = run(&["gen", "horn"]);
    assert!(horn.status.success());
    let text = stdout(&horn);
    assert!(text.starts_with("5\n"));

    let analyzed = run_stdin(&["analyze", "-"], &text);
    assert!(analyzed.status.success());
    let out = stdout(&analyzed);
    assert!(out.contains("minimal zeros (5):"));
    assert!(out.contains("{1,2}: (1, 1, 0, 0, 0)"));
    assert!(out.contains("irreducible wrt nonnegative cone: yes"));
    assert!(out.contains("irreducible wrt PSD cone: yes (zero span rank 5)"));
}

#[test]
fn tmat_float_backend_via_files() {
    let tenth_pi = (std::f64::consts::PI / 10.0).to_string();
    let gen = run(&["gen", "tmat", &tenth_pi, &tenth_pi, &tenth_pi, &tenth_pi, &tenth_pi]);
    assert!(gen.status.success());
    let dir = std::env::temp_dir().join("minzero-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tmat.txt");
    std::fs::write(&path, stdout(&gen)).unwrap();

    let mz = run(&["minimal-zeros", path.to_str().unwrap(), "--backend", "float"]);
    assert!(mz.status.success());
    let out = stdout(&mz);
    for support in ["{1,2,3}", "{2,3,4}", "{3,4,5}", "{1,4,5}", "{1,2,5}"] {
        assert!(out.contains(support), "missing {support} in:\n{out}");
    }
}

#[test]
fn decompose_horn_zero() {
    let horn = stdout(&run(&["gen", "horn"]));
    let out = run_stdin(&["decompose", "-", "1,2,1,0,0"], &horn);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1 * {1,2}"));
    assert!(text.contains("1 * {2,3}"));

    // Not a zero: verification failure, exit 1.
    let bad = run_stdin(&["decompose", "-", "1,1,1,1,1"], &horn);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn check_family_exit_codes() {
    let ok = run(&["check-family", "--n", "5", "{1,2},{2,3},{3,4},{4,5},{1,5}"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("condition (v)  : pass"));

    let fail = run(&["check-family", "--n", "5", "{1,2},{3,4}"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).contains("FAIL"));

    let parse_err = run(&["check-family", "--n", "5", "{1,2"]);
    assert_eq!(parse_err.status.code(), Some(2));
}

#[test]
fn enumerate_json_schema_and_refusals() {
    let out = run(&[
        "enumerate",
        "--n",
        "5",
        "--conditions",
        "i,ii,iii,iv,v",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 5);
    assert_eq!(v["count"], 2);
    assert_eq!(v["conditions"], serde_json::json!(["i", "ii", "iii", "iv", "v"]));
    assert!(v["classes"].as_array().unwrap().len() == 2);
    assert!(v["elapsed_ms"].is_number());
    // Classes are arrays of arrays of integers.
    assert_eq!(v["classes"][0][0][0], 1);

    let refused = run(&["enumerate", "--n", "7", "--conditions", "i,ii"]);
    assert_eq!(refused.status.code(), Some(2));
    let needs_long = run(&["enumerate", "--n", "7", "--conditions", "i,ii,iii,iv,v"]);
    assert_eq!(needs_long.status.code(), Some(2));
}

#[test]
fn enumerate_output_is_identical_across_jobs() {
    let one = run(&[
        "--jobs",
        "1",
        "enumerate",
        "--n",
        "5",
        "--conditions",
        "i,ii",
        "--format",
        "json",
    ]);
    let two = run(&[
        "--jobs",
        "2",
        "enumerate",
        "--n",
        "5",
        "--conditions",
        "i,ii",
        "--format",
        "json",
    ]);
    assert!(one.status.success() && two.status.success());
    // elapsed_ms differs; compare everything else.
    let mut a: serde_json::Value = serde_json::from_str(&stdout(&one)).unwrap();
    let mut b: serde_json::Value = serde_json::from_str(&stdout(&two)).unwrap();
    a["elapsed_ms"] = 0.into();
    b["elapsed_ms"] = 0.into();
    assert_eq!(a, b);
}

#[test]
fn tables_n4_and_n5_match() {
    let out = run(&["tables", "--which", "2", "--n", "4"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("verdict: MATCH"));
    assert!(text.contains("n=4: 10 MATCH"));
    assert!(text.contains("n=4: 6 MATCH"));

    let out5 = run(&["tables", "--which", "2", "--n", "5"]);
    assert!(out5.status.success());
    let text5 = stdout(&out5);
    assert!(text5.contains("n=5: 150 MATCH"));
    assert!(text5.contains("n=5: 33 MATCH"));
    assert!(text5.contains("n=5: 11 MATCH"));
    assert!(text5.contains("n=5: 2 MATCH"));
}

#[test]
fn analyze_reports_non_copositive_evidence() {
    let input = "2\n1 -2\n-2 1\n";
    let out = run_stdin(&["analyze", "-"], input);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not copositive"));
}

#[test]
fn bad_matrix_is_an_input_error() {
    let out = run_stdin(&["analyze", "-"], "2\n1 0.5\n0.4 1\n");
    assert_eq!(out.status.code(), Some(2));
}
