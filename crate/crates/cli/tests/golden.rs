use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn fullgroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fullgroup"))
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = fullgroup(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn assert_golden(args: &[&str], file: &str) {
    let expected = fs::read_to_string(golden_dir().join(file)).unwrap();
    assert_eq!(stdout_ok(args), expected, "{args:?} differs from {file}");
    assert_eq!(stdout_ok(args), expected, "{args:?} is not byte-stable");
}

#[test]
fn analyze_conjugate_of_g() {
    assert_golden(
        &["analyze", "g_[1]^2 g^-1", "--bases", "per=[2]"],
        "analyze_conjugate_of_g.json",
    );
    let report = stdout_ok(&["analyze", "g_[1]^2 g^-1"]);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["index"], 1);
    assert_eq!((v["o_plus"].as_u64(), v["o_minus"].as_u64()), (Some(1), Some(0)));
    assert_eq!(v["m"], 1);
    assert_eq!(v["sign_partition"]["periodic"], "empty");
    assert_eq!(v["sign_partition"]["positive"], "[]");
    assert_eq!(v["sign_partition"]["negative"], "empty");
}

#[test]
fn analyze_mixed_element() {
    assert_golden(&["analyze", "D2@2{0:2,1:2,2:-2,3:2}"], "analyze_mixed.json");
}

#[test]
fn scalar_commands() {
    assert_eq!(stdout_ok(&["reduce-word", "g^-1 g_[1]"]), "g_[0] g^-1\n");
    assert_eq!(stdout_ok(&["index", "g"]), "1\n");
    assert_eq!(stdout_ok(&["index", "g g^-1"]), "0\n");
    assert_eq!(stdout_ok(&["normal-form", "g_[1]^2 g^-1"]), "g_[1]^2 g^-1\n");
    assert_eq!(stdout_ok(&["positive-form", "g_[1]^2 g^-1"]), "D2@0{0:1}\n");
    assert_eq!(stdout_ok(&["conjugator", "g_[1]^2 g^-1"]), "D2@1{0:0,1:2}\n");
    assert_eq!(stdout_ok(&["induce", "g", "[1]+[00]"]), "D2@2{0:1,1:2,2:0,3:1}\n");
}

#[test]
fn pure_cycles_and_simulation() {
    assert_golden(&["pure-cycles", "D2@2{0:2,1:0,2:-2,3:0}"], "pure_cycles.json");
    assert_golden(&["simulate", "g_[1]^2 g^-1", "--window", "20"], "simulate.json");
}

#[test]
fn welds() {
    assert_golden(&["weld", "two_dyadic.weld"], "weld_two_dyadic.json");
    assert_golden(&["weld", "single.weld"], "weld_single.json");
}

#[test]
fn arguments_from_files_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("h.txt");
    fs::write(&input, "g_[1]^2 g^-1\n").unwrap();
    let arg = format!("@{}", input.display());
    assert_eq!(stdout_ok(&["index", &arg]), "1\n");

    let out = dir.path().join("report.json");
    let out_arg = out.display().to_string();
    assert_eq!(stdout_ok(&["analyze", &arg, "--out", &out_arg]), "");
    let expected = fs::read_to_string(golden_dir().join("analyze_conjugate_of_g.json")).unwrap();
    assert_eq!(fs::read_to_string(out).unwrap(), expected);
}

#[test]
fn input_errors_exit_with_2() {
    let out = fullgroup(&["index", "g_["]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("column 3"), "{err}");

    for args in [
        &["conjugator", "g^-1"][..],
        &["analyze", "g_(empty)"],
        &["analyze", "g", "--bases", "per=[1]"],
        &["pure-cycles", "g"],
        &["index", "@does-not-exist.txt"],
        &["weld", "missing.weld"],
    ] {
        assert_eq!(fullgroup(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn weld_file_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.weld");
    let text = fs::read_to_string(golden_dir().join("two_dyadic.weld")).unwrap();
    fs::write(&path, text.replace("spec 2 g^-1", "spec 2 g_[")).unwrap();
    let out = fullgroup(&["weld", &path.display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 6: parse error at column 10"), "{err}");
}
