use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn smoke() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/smoke.toml")
}

fn warpcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_warpcurv")).args(args).output().expect("spawn warpcurv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_report_and_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let o = warpcurv(&["run", smoke().to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    let suites = report["suites"].as_array().unwrap();
    assert_eq!(suites.len(), stdout(&o).lines().filter(|l| l.starts_with("pass")).count());
    for s in suites {
        let csv = std::fs::read_to_string(dir.path().join(format!("{}.csv", s["name"].as_str().unwrap()))).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("check,kind,lhs,rhs,residual,tolerance,pass,metadata"));
        assert_eq!(lines.count(), s["checks"].as_array().unwrap().len());
    }
}

#[test]
fn workers_do_not_change_the_report() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = smoke();
    for (dir, w) in [(&a, "1"), (&b, "3")] {
        let o = warpcurv(&["run", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--workers", w]);
        assert_eq!(o.status.code(), Some(0));
    }
    let strip = |d: &Path| {
        let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("report.json")).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(strip(a.path()), strip(b.path()));
}

const TIGHT: &str = r#"
[models.ads4]
kind = "schwarzschild"
n = 4
mass = 2.0
kappa = 1.0

[surfaces.bump]
model = "ads4"
curve = { kind = "graph", r0 = 1.5, modes = [{ mode = 3, eps = 0.05 }] }

[[suite]]
kind = "integral"
name = "tight"
surfaces = ["bump"]
checks = ["minkowski-weighted"]
ks = [1]
tolerance = 1e-30
"#;

#[test]
fn unattainable_tolerance_exits_one_with_a_residual_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tight.toml");
    std::fs::write(&cfg, TIGHT).unwrap();
    let o = warpcurv(&["run", cfg.to_str().unwrap(), "--out", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL"), "{out}");
    assert!(out.contains("failing check(s)") && out.contains("minkowski-weighted"), "{out}");
    assert!(dir.path().join("out/report.json").exists());
}

#[test]
fn config_errors_exit_two_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, TIGHT.replace("model = \"ads4\"", "model = \"missing\"")).unwrap();
    let o = warpcurv(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("missing") && err.contains("line 9"), "{err}");

    let o = warpcurv(&["run", smoke().to_str().unwrap(), "--workers", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = warpcurv(&["run", dir.path().join("absent.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn list_checks_is_stable() {
    let a = warpcurv(&["list-checks"]);
    let b = warpcurv(&["list-checks"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert!(rows.len() >= 15);
    assert!(rows.iter().all(|r| r.split_whitespace().count() >= 3));
    assert!(rows[0].starts_with("newton-tensor-oracle"));
}

#[test]
fn model_inspect_prints_csv_and_margins() {
    let o = warpcurv(&["model-inspect", "hyperbolic", "--n", "5", "--points", "7"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rows.headers().unwrap().len(), 7);
    let records: Vec<_> = rows.records().map(|r| r.unwrap()).collect();
    assert_eq!(records.len(), 7);
    // λ = sinh r and V = cosh r.
    for r in &records {
        let x: f64 = r[0].parse().unwrap();
        assert!((r[1].parse::<f64>().unwrap() - x.sinh()).abs() < 1e-12 * x.cosh());
        assert!((r[4].parse::<f64>().unwrap() - x.cosh()).abs() < 1e-12 * x.cosh());
    }
    let err = stderr(&o);
    for c in ["C1", "C2", "C3", "C4"] {
        assert!(err.contains(c), "{err}");
    }

    let o = warpcurv(&["model-inspect", "ads4", "--config", smoke().to_str().unwrap(), "--points", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 4);
    assert_eq!(warpcurv(&["model-inspect", "nope"]).status.code(), Some(2));
}
