use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qcvx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcvx"))
        .args(args)
        .env("QCVX_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const SQUARE: &str = r#"{"type":"polytope","vertices":[[0,0],[1,0],[1,1],[0,1]]}"#;
const EXP: &str = r#"{"type":"radial","base":{"type":"ball","dim":2,"radius":1},"profile":{"kind":"exp","c":1.0}}"#;
const STACK: &str = r#"{"type":"stack","levels":[
    {"t":0.5,"body":{"type":"polytope","vertices":[[-1,-1],[1,-1],[1,1],[-1,1]]}},
    {"t":1.0,"body":{"type":"polytope","vertices":[[-0.5,-0.5],[0.5,-0.5],[0.5,0.5],[-0.5,0.5]]}}]}"#;

#[test]
fn mixed_volume_of_two_unit_squares() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "bodies.json", &format!("[{SQUARE},{SQUARE}]"));
    let v = stdout_json(&qcvx(&["mixed-volume", p.to_str().unwrap()]));
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["rel_err"].as_f64().unwrap() < 1e-8);
}

#[test]
fn quermass_of_planar_exponential_is_pi() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "radial-exp.json", EXP);
    let v = stdout_json(&qcvx(&["quermass", "--k", "1", p.to_str().unwrap()]));
    assert!((v["value"].as_f64().unwrap() - PI).abs() < 1e-9);
    let v = stdout_json(&qcvx(&["integral", p.to_str().unwrap()]));
    assert!((v["value"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-9);
}

#[test]
fn stack_integral_and_levels() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "stack.json", STACK);
    let p = p.to_str().unwrap();
    let v = stdout_json(&qcvx(&["integral", p]));
    assert!((v["value"].as_f64().unwrap() - 2.5).abs() < 1e-12);
    let out = qcvx(&["oplus", p, p, "--emit-levels", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "t,volume\n1,4\n0.5,16\n");
    let out = qcvx(&["oracle-compare", p, p]);
    let report = stdout_json(&out);
    assert_ne!(report["verdict"], "violated");
}

#[test]
fn rearrange_preserves_perimeter() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "stack.json", STACK);
    let v = stdout_json(&qcvx(&["rearrange", "--functional", "W1", p.to_str().unwrap()]));
    let top = v["levels"][0]["body"]["radius"].as_f64().unwrap();
    // perimeter 4 = 2π r
    assert!((top - 2.0 / PI).abs() < 1e-12);
}

#[test]
fn rescale_and_dilate_emit_reports() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", EXP);
    let g = write(
        dir.path(),
        "g.json",
        r#"{"type":"radial","base":{"type":"ball","dim":2,"radius":1},"profile":{"kind":"gaussian","c":1.0}}"#,
    );
    let (f, g) = (f.to_str().unwrap(), g.to_str().unwrap());
    let v = stdout_json(&qcvx(&["rescale", "--phi", "vol", "--match", g, f]));
    assert!(v["rescaled"]["profile_mismatch"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["rescaled"]["function"]["profile"]["kind"], "gaussian");
    assert_ne!(v["report"]["verdict"], "violated");
    let v = stdout_json(&qcvx(&["dilate", "--phi", "vol", "--with", g, f]));
    assert_eq!(v["function"]["profile"]["kind"], "exp");
}

#[test]
fn duality_check_reports_each_height() {
    let dir = TempDir::new().unwrap();
    let p = write(
        dir.path(),
        "fns.json",
        r#"[{"dim":2,"pieces":[{"a":[1,0],"b":0},{"a":[-1,0],"b":0},{"a":[0,1],"b":0},{"a":[0,-1],"b":0}]}]"#,
    );
    let out = qcvx(&["duality-check", p.to_str().unwrap(), "--t-values", "0.5,2"]);
    assert!(out.status.success());
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|r| r["name"] == "polarity-sandwich"));
}

#[test]
fn check_writes_jsonl_and_summary_deterministically() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = qcvx(&["check", "all", "--seed", "7", "--trials", "3", "--out", out.to_str().unwrap()]);
        assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
        (std::fs::read(&out).unwrap(), std::fs::read_to_string(out.with_extension("csv")).unwrap())
    };
    let (a, summary) = run("a.jsonl");
    let (b, _) = run("b.jsonl");
    assert_eq!(a, b);
    assert!(summary.starts_with("name,trials,min_margin,equality_hits,violations\n"));
    assert_eq!(summary.lines().count(), 1 + 19);
}

#[test]
fn report_bundle_has_plot_tables() {
    let dir = TempDir::new().unwrap();
    let out = qcvx(&["report", "--trials", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for f in ["reports.jsonl", "summary.csv", "size_profiles.csv", "extensions.csv", "band_section.csv"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let ext = std::fs::read_to_string(dir.path().join("extensions.csv")).unwrap();
    assert!(ext.starts_with("function,eps,integral\nexp,0,"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(qcvx(&["integral", missing.to_str().unwrap()]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", r#"{"type":"radial"}"#);
    assert_eq!(qcvx(&["integral", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qcvx(&["check", "no-such-check"]).status.code(), Some(2));
    assert_eq!(qcvx(&["check", "sandwich", "--tol-exact", "-1"]).status.code(), Some(2));
    // a power law is not log-concave: input error, not a violation
    let pl = write(
        dir.path(),
        "pl.json",
        r#"{"type":"radial","base":{"type":"ball","dim":2,"radius":1},"profile":{"kind":"power_law","a":4,"s":1}}"#,
    );
    assert_eq!(qcvx(&["dilate", pl.to_str().unwrap()]).status.code(), Some(2));
}
