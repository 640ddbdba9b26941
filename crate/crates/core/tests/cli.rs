use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data/example")
        .join(name)
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lyndon-index"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn job(cmd: &str) -> Vec<String> {
    vec![
        cmd.into(),
        "--tower".into(),
        example("tower.txt").display().to_string(),
        "--group".into(),
        example("group.txt").display().to_string(),
    ]
}

fn with(mut args: Vec<String>, more: &[&str]) -> Vec<String> {
    args.extend(more.iter().map(|s| s.to_string()));
    args
}

fn call(args: &[String]) -> (String, String, i32) {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = bin(&refs);
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

#[test]
fn index_of_worked_example() {
    let sub = example("subgroup.txt").display().to_string();
    let (out, err, code) = call(&with(job("index"), &["--subgroup", &sub]));
    assert_eq!((code, err.as_str()), (0, ""));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[..2], ["FINITE 2", "1"]);
    assert_eq!(lines.len(), 3);
}

#[test]
fn enumerate_strategy_reports_budget_and_witness() {
    let sub = example("subgroup.txt").display().to_string();
    let (out, _, code) = call(&with(
        job("index"),
        &[
            "--subgroup",
            &sub,
            "--strategy",
            "enumerate",
            "--budget",
            "20",
        ],
    ));
    assert_eq!(code, 3);
    assert!(out.starts_with("BUDGET-EXCEEDED "));
    let square = example("square.txt").display().to_string();
    for strategy in ["product", "enumerate"] {
        let (out, _, code) = call(&with(
            job("index"),
            &["--subgroup", &square, "--strategy", strategy],
        ));
        assert_eq!(code, 1);
        assert_eq!(out.lines().next(), Some("INFINITE"));
        assert!(out.lines().nth(1).unwrap().contains('|'));
    }
}

#[test]
fn member_exit_codes() {
    let sub = example("subgroup.txt").display().to_string();
    let (out, _, code) = call(&with(job("member"), &["--subgroup", &sub, "--word", "@a"]));
    assert_eq!((out.as_str(), code), ("NO\n", 1));
    let (out, _, code) = call(&with(
        job("member"),
        &["--subgroup", &sub, "--word", "@a @b^-1"],
    ));
    assert_eq!((out.as_str(), code), ("YES\n", 0));
    let (out, _, code) = call(&with(job("member"), &["--word", "@b"]));
    assert_eq!((out.as_str(), code), ("YES\n", 0));
}

#[test]
fn fold_dumps_and_writes_dot() {
    let dot = std::env::temp_dir().join(format!("lyndon-index-cli-{}.dot", std::process::id()));
    let (out, _, code) = call(&with(job("fold"), &["--dot", &dot.display().to_string()]));
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("base ")));
    let text = std::fs::read_to_string(&dot).unwrap();
    std::fs::remove_file(&dot).unwrap();
    assert!(text.starts_with("digraph"));
}

#[test]
fn bad_input_exits_two_with_empty_stdout() {
    let (out, err, code) = call(&with(
        job("index"),
        &["--subgroup", "/nonexistent/subgroup.txt"],
    ));
    assert_eq!((out.as_str(), code), ("", 2));
    assert!(!err.is_empty());
    let (out, _, code) = call(&with(job("member"), &["--word", "u1^{"]));
    assert_eq!((out.as_str(), code), ("", 2));
    let sub = example("subgroup.txt").display().to_string();
    let (_, _, code) = call(&with(job("index"), &["--subgroup", &sub, "--budget", "0"]));
    assert_eq!(code, 2);
}

#[test]
fn help_exits_zero() {
    let out = bin(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("index"));
}
