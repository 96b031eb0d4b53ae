use std::path::Path;
use std::process::{Command, Output};

fn pxharm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pxharm"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn pxharm")
}

fn full_config() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/full.json").display().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn run_is_byte_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = full_config();
    for d in [a.path(), b.path()] {
        let out = pxharm(d, &["run", &cfg]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let ra = std::fs::read(a.path().join("pxharm-out/full/report.json")).unwrap();
    let rb = std::fs::read(b.path().join("pxharm-out/full/report.json")).unwrap();
    assert_eq!(ra, rb);
    let report: serde_json::Value = serde_json::from_slice(&ra).unwrap();
    for rec in report["records"].as_array().unwrap() {
        for key in ["ref_tag", "hypothesis_status", "h", "window", "status"] {
            assert!(rec.get(key).is_some(), "record lacks {key}: {rec}");
        }
    }
    for f in ["measure_half-plane_0.csv", "profile_disk-affine_1.svg", "barrier_0.csv"] {
        assert!(a.path().join("pxharm-out/full").join(f).exists(), "{f} missing");
    }
}

#[test]
fn invalid_config_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let bad_window = r#"{"problems": [{"id": "a", "domain": "disk:1", "exponent": "const:2",
        "data": "linear:x1", "h": 0.05,
        "checks": [{"kind": "boundary_decay", "w": [0.5, 0], "r": 0.5, "c_tilde": 6}]}]}"#;
    let p = write(d.path(), "bad.json", bad_window);
    let out = pxharm(d.path(), &["run", &p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not on the boundary"));
    assert!(!d.path().join("pxharm-out").exists(), "nothing may be solved or written");
    let p = write(d.path(), "broken.json", "{ not json");
    assert_eq!(pxharm(d.path(), &["run", &p]).status.code(), Some(2));
    let p = write(d.path(), "unknown.json", r#"{"problem": []}"#);
    assert_eq!(pxharm(d.path(), &["run", &p]).status.code(), Some(2));
}

#[test]
fn failed_assertion_exits_1() {
    let d = tempfile::tempdir().unwrap();
    let cfg = r#"{"problems": [{"id": "a", "domain": "square:1", "exponent": "const:2",
        "data": "linear:x1", "exact": "linear:x2", "max_error": 1e-6, "h": 0.1}]}"#;
    let p = write(d.path(), "c.json", cfg);
    let out = pxharm(d.path(), &["run", &p]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max error above bound"));
    let report = std::fs::read_to_string(d.path().join("pxharm-out/report.json")).unwrap();
    assert!(report.contains("\"status\": \"fail\""));
}

#[test]
fn barrier_check_prints_certification() {
    let d = tempfile::tempdir().unwrap();
    let out = pxharm(
        d.path(),
        &["barrier-check", "--family", "wolanski-super", "--p", "affine:2:0.5,0", "--M", "1", "--r", "0.1"],
    );
    assert_eq!(out.status.code(), Some(0));
    let rec: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rec["ref_tag"], "barrier-wolanski");
    assert_eq!(rec["status"], "pass");
    assert!(rec["values"]["worst_sign"].as_f64().unwrap() <= 1e-8);
    // μ below μ* without --force is refused.
    let out = pxharm(d.path(), &["barrier-check", "--family", "bauman-super", "--p", "const:2.5", "--mu", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = pxharm(d.path(), &["barrier-check", "--family", "nope", "--p", "const:2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_then_plot() {
    let d = tempfile::tempdir().unwrap();
    let out = pxharm(
        d.path(),
        &["solve", "--domain", "disk:1", "--p", "const:2", "--data", "harmonic:x1x2", "--h", "0.05", "--out", "o"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rec: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rec["check"], "solve");
    let csv = "o/field_solve_harmonic_x1x2.csv";
    assert!(d.path().join(csv).exists());
    let a = pxharm(d.path(), &["plot", csv]);
    let b = pxharm(d.path(), &["plot", csv, "-o", "f.svg"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert!(a.stdout.starts_with(b"<svg"));
    assert_eq!(a.stdout, std::fs::read(d.path().join("f.svg")).unwrap());
    write(d.path(), "bad.csv", "a,b\n1,x\n");
    assert_eq!(pxharm(d.path(), &["plot", "bad.csv"]).status.code(), Some(2));
}

#[test]
fn verify_runs_selected_criteria() {
    let d = tempfile::tempdir().unwrap();
    let out = pxharm(d.path(), &["verify", "--suite", "acceptance", "--only", "5,13"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("criterion  5: PASS") && text.contains("criterion 13: PASS"), "{text}");
    assert_eq!(pxharm(d.path(), &["verify", "--suite", "other"]).status.code(), Some(2));
}

#[test]
fn thread_variable_is_validated() {
    let d = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pxharm"))
        .args(["verify", "--only", "5"])
        .env("PXHARM_THREADS", "zero")
        .current_dir(d.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
