use std::path::{Path, PathBuf};
use std::process::Command;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name)
}

fn gtt(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gtt")).args(args).output().expect("gtt runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_retract() {
    let f = corpus("retract.gtt");
    for interp in ["natural", "scheme"] {
        assert_eq!(gtt(&["run", path(&f), "--interp", interp]), (0, "RESULT: true\n".into()));
    }
}

#[test]
fn run_reports_timeout_with_fuel() {
    let f = corpus("omega.gtt");
    assert_eq!(gtt(&["run", path(&f), "--fuel", "500"]), (0, "RESULT: timeout(500)\n".into()));
}

#[test]
fn run_reports_error() {
    let (code, out) = gtt(&["run", path(&corpus("broken-contract.gtt"))]);
    assert_eq!((code, out.as_str()), (0, "RESULT: error\n"));
}

#[test]
fn dyn_prints_three_node_tree() {
    let (code, out) = gtt(&["dyn", "(U (F 1))", "(U (F ?))"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    assert!(out.starts_with("UMon"));
    assert!(out.contains("FMon") && out.contains("ToDyn: 1 ⊑ ?"));
}

#[test]
fn dyn_not_derivable() {
    assert_eq!(gtt(&["dyn", "?", "1"]), (1, "NOT DERIVABLE\n".into()));
}

#[test]
fn check_reports_position_and_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.gtt");
    std::fs::write(&bad, "(app (lam (x 1) (ret x))\n   (inl (+ 1 1) unit))").unwrap();
    let (code, out) = gtt(&["check", path(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(out, "ERR 2:4 MISMATCH expected 1, found (+ 1 1)\n");

    std::fs::write(&bad, "(ret (").unwrap();
    let (code, out) = gtt(&["check", path(&bad)]);
    assert_eq!(code, 1);
    assert!(out.starts_with("ERR 1:") && out.contains("PARSE"), "{out}");
}

#[test]
fn check_ok() {
    assert_eq!(gtt(&["check", path(&corpus("retract.gtt"))]), (0, "OK (F (+ 1 1))\n".into()));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(gtt(&["run"]).0, 2);
    assert_eq!(gtt(&["frobnicate"]).0, 2);
    assert_eq!(gtt(&["run", "/nonexistent/x.gtt"]).0, 2);
    assert_eq!(gtt(&["run", path(&corpus("retract.gtt")), "--interp", "python"]).0, 2);
}

#[test]
fn elab_matches_golden() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for interp in ["natural", "scheme"] {
        let want = std::fs::read_to_string(golden.join(format!("retract.{interp}.elab"))).unwrap();
        assert_eq!(gtt(&["elab", path(&corpus("retract.gtt")), "--interp", interp]), (0, want));
    }
}

#[test]
fn simplify_has_no_complex_forms() {
    let (code, out) = gtt(&["simplify", path(&corpus("dynamic-pair.gtt"))]);
    assert_eq!(code, 0);
    let (code2, out2) = gtt(&["elab", path(&corpus("dynamic-pair.gtt")), "--emit", "cbpv"]);
    assert_eq!((code2, &out2), (0, &out));
    assert!(!out.contains("(up ") && !out.contains("(dn "));
}

#[test]
fn output_is_deterministic() {
    let f = corpus("negate-dynamic.gtt");
    let a = gtt(&["simplify", path(&f), "--interp", "scheme"]);
    let b = gtt(&["simplify", path(&f), "--interp", "scheme"]);
    assert_eq!(a, b);
}

#[test]
fn law_suite_json() {
    let (code, out) = gtt(&["test", "laws", "--law", "identity", "--depth", "1", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v["results"].as_array().unwrap();
    assert!(!rows.is_empty());
    for r in rows {
        assert_eq!(r["law"], "identity");
        assert!(r["type"].is_string() && r["instances"].is_u64());
        assert_eq!(r["failures"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn law_suite_text_and_unknown_law() {
    let (code, out) = gtt(&["test", "laws", "--interp", "scheme", "--law", "beta-sum", "--depth", "1"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.starts_with("PASS beta-sum") || l.contains("0 failing")));
    assert_eq!(gtt(&["test", "laws", "--law", "no-such-law"]).0, 2);
}
