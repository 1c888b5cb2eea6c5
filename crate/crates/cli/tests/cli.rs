use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn spec_file(json: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

fn mckay(args: &[&str], file: &NamedTempFile) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mckay"))
        .args(args)
        .arg(file.path())
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const A1: &str = r#"{"type": "builtin", "name": "cyclic_A1"}"#;

#[test]
fn list_builtins() {
    let o = Command::new(env!("CARGO_BIN_EXE_mckay")).arg("list-builtins").output().unwrap();
    assert!(o.status.success());
    let s = stdout(&o);
    for name in ["cyclic_A{k}", "binary_dihedral_D{k}", "binary_icosahedral", "c3z3", "c4_pm1"] {
        assert!(s.contains(name), "{name} missing");
    }
}

#[test]
fn analyze_json() {
    let f = spec_file(r#"{"type": "lens", "m": 7, "weights": [1, 2, 4]}"#);
    let o = mckay(&["analyze"], &f);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["betti"], serde_json::json!([1, 3, 3]));
    assert_eq!(v["euler"], 7);
}

#[test]
fn analyze_text() {
    let f = spec_file(A1);
    let o = mckay(&["analyze", "--format", "text", "--slope", "5/2"], &f);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("betti"));
}

#[test]
fn parse_errors_exit_2() {
    let f = spec_file(r#"{"type": "lens", "m": 3"#);
    let o = mckay(&["analyze"], &f);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let bad_entry = spec_file(r#"{"type": "explicit", "n": 1, "cyclotomic_order": 2, "generators": [[["q"]]]}"#);
    assert_eq!(mckay(&["analyze"], &bad_entry).status.code(), Some(2));
    assert_eq!(mckay(&["analyze", "--slope", "-1"], &spec_file(A1)).status.code(), Some(2));
}

#[test]
fn non_sl_group_exits_1() {
    let f = spec_file(
        r#"{"type": "explicit", "n": 2, "cyclotomic_order": 2, "generators": [[["-1", "0"], ["0", "1"]]]}"#,
    );
    assert_eq!(mckay(&["analyze"], &f).status.code(), Some(1));
}

#[test]
fn resource_cap_exits_4() {
    let f = spec_file(r#"{"type": "builtin", "name": "binary_icosahedral"}"#);
    let o = Command::new(env!("CARGO_BIN_EXE_mckay"))
        .env("MCKAY_CAP", "50")
        .arg("analyze")
        .arg(f.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn diagrams() {
    let f = spec_file(A1);
    let ascii = mckay(&["diagram", "--page", "esc+", "--ascii", "--slope", "5/2"], &f);
    assert_eq!(ascii.status.code(), Some(0));
    let s = stdout(&ascii);
    assert!(s.contains("-9") && s.contains("+1"));

    let svg = mckay(&["diagram", "--page", "sc", "--svg"], &f);
    assert_eq!(svg.status.code(), Some(0));
    assert!(stdout(&svg).starts_with("<svg"));

    assert_eq!(mckay(&["diagram", "--page", "sideways"], &f).status.code(), Some(2));
}

#[test]
fn check_passes() {
    let f = spec_file(r#"{"type": "builtin", "name": "binary_octahedral"}"#);
    let o = mckay(&["check"], &f);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().skip(1).filter(|l| !l.starts_with("warning")).all(|l| l.starts_with("PASS")));
    assert!(s.contains("oracle_trace_dft_spectrum"));
}

#[test]
fn profile_passes() {
    let o = mckay(&["profile", "--format", "text"], &spec_file(A1));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));

    let json = mckay(&["profile"], &spec_file(r#"{"type": "builtin", "name": "cyclic_A1", "profile": {"final_slope": "13/4"}}"#));
    assert_eq!(json.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["final_slope"], "13/4");
}
