//! The `arrc` binary: output formats and exit codes.

mod common;

use std::process::{Command, Output};

fn arrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrc")).args(args).output().expect("binary runs")
}

fn corpus(name: &str) -> String {
    common::program_path(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_prints_the_result_type() {
    let o = arrc(&["check", &corpus("dense.arr"), "--size", "n=2", "--size", "m=3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "dense : 2 => flt\n");
}

#[test]
fn missing_size_is_a_diagnostic() {
    let dir = std::env::temp_dir().join(format!("arrc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("nodefault.arr");
    std::fs::write(&file, "size n\nf(x: n => flt): flt := sum i:n. x[i]\n").unwrap();
    let o = arrc(&["check", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unbound size variable n"), "{}", stderr(&o));
    let o = arrc(&["check", file.to_str().unwrap(), "--size", "n=3"]);
    assert_eq!(stdout(&o), "f : flt\n");
}

#[test]
fn ill_typed_program_reports_a_span() {
    let dir = std::env::temp_dir().join(format!("arrc-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.arr");
    std::fs::write(&file, "f(a: 3 => flt): flt :=\n  a[3]\n").unwrap();
    let o = arrc(&["check", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.starts_with(&format!("{}:2:5: error:", file.display())), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(arrc(&[]).status.code(), Some(2));
    assert_eq!(arrc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(arrc(&["check", &corpus("dense.arr"), "--size", "n"]).status.code(), Some(2));
    assert_eq!(arrc(&["compile", &corpus("dense.arr"), "--dump-stage", "nope"]).status.code(), Some(2));
    assert_eq!(arrc(&["run", &corpus("tabulate.arr"), "--level", "fast"]).status.code(), Some(2));
}

#[test]
fn missing_file_exits_1() {
    let o = arrc(&["check", "/nonexistent/x.arr"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("/nonexistent/x.arr: error:"));
}

#[test]
fn compile_prints_listing_and_stats() {
    let o = arrc(&["compile", &corpus("dense.arr"), "--no-licm", "--no-cse", "--no-dce"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("dense(b: 2 => flt, W: 2 => 3 => flt, x: 3 => flt): 2 => flt :=\n"));
    assert!(out.contains("let for i1:2, for i2:3, (x4 : flt := x2 * x3)\n"));
    assert!(out.contains("\nx10\n"));
    assert!(out.ends_with(
        "stage=lower bindings=11 arity0=1 arity1=6 arity2+=4\nstage=canon bindings=11 arity0=1 arity1=6 arity2+=4\n"
    ));
}

#[test]
fn black_scholes_stats() {
    let full = stdout(&arrc(&["compile", &corpus("blackscholes.arr"), "--size", "n=1"]));
    let no_cse = stdout(&arrc(&["compile", &corpus("blackscholes.arr"), "--size", "n=1", "--no-cse"]));
    let last_count = |s: &str| -> usize {
        let line = s.lines().rfind(|l| l.starts_with("stage=")).unwrap();
        line.split_whitespace().find_map(|f| f.strip_prefix("bindings=")).unwrap().parse().unwrap()
    };
    let (a, b) = (last_count(&full), last_count(&no_cse));
    assert!(a <= 24 && b as f64 >= 1.7 * a as f64, "{a} vs {b}");
    assert!(full.contains("stage=cse ") && !no_cse.contains("stage=cse "));
}

#[test]
fn dump_stages() {
    let out = stdout(&arrc(&["compile", &corpus("tabulate.arr"), "--dump-stage", "all"]));
    for name in ["norm", "lower", "canon", "licm", "cse", "dce"] {
        assert!(out.contains(&format!("== {name} ==\n")), "{name}");
    }
    let out = stdout(&arrc(&["compile", &corpus("tabulate.arr"), "--dump-stage", "licm"]));
    assert!(out.contains("== licm ==") && !out.contains("== lower =="));
}

#[test]
fn tsv_output() {
    let out = stdout(&arrc(&["compile", &corpus("tabulate.arr"), "--tsv"]));
    assert!(out.starts_with("# name\ttabulate\n# params\t\n# result\t"), "{out}");
    let records: Vec<&str> = out.lines().filter(|l| !l.starts_with('#') && !l.starts_with("stage=")).collect();
    assert!(records.iter().all(|l| l.split('\t').count() == 4));
}

#[test]
fn run_at_every_level() {
    for level in ["surface", "norm", "ainf", "opt"] {
        let o = arrc(&["run", &corpus("tabulate.arr"), "--arg", "none", "--level", level]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "[0, 10, 20]\n");
    }
}

#[test]
fn run_matmul() {
    let base = [
        "run",
        &corpus("linalg.arr"),
        "--entry",
        "matmul",
        "--arg",
        "A=[[1.0, 2.0], [3.0, 4.0]]",
        "--arg",
        "B=[[5.0, 6.0], [7.0, 8.0]]",
    ]
    .map(String::from);
    let mut outs = Vec::new();
    for level in ["surface", "opt"] {
        let mut args: Vec<&str> = base.iter().map(String::as_str).collect();
        args.extend(["--level", level]);
        let o = arrc(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outs.push(stdout(&o));
    }
    assert_eq!(outs[0], "[[19, 22], [43, 50]]\n");
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn argument_shape_mismatch() {
    let o = arrc(&["run", &corpus("linalg.arr"), "--entry", "vadd", "--arg", "v=[1.0]", "--arg", "w=[1.0, 2.0]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("argument `v`"), "{}", stderr(&o));
    let o = arrc(&["run", &corpus("linalg.arr"), "--entry", "vadd", "--arg", "none"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing argument `v`"));
}

#[test]
fn output_is_deterministic() {
    let args = ["compile", &corpus("blackscholes.arr"), "--dump-stage", "all"];
    assert_eq!(arrc(&args).stdout, arrc(&args).stdout);
}
