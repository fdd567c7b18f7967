use std::fs;
use std::process::{Command, Output};

fn opfunc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opfunc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn lists_presets_and_experiments() {
    let o = opfunc(&["list-presets"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["sin-xj", "random", "lipschitz", "hoelder", "omega", "schatten", "kontr"] {
        assert!(text.contains(name), "missing {name} in\n{text}");
    }
}

#[test]
fn modulus_star_of_powers_and_log_lipschitz() {
    let o = opfunc(&["modulus-star", "--delta", "0.25", "--alpha", "0.5"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-12);
    let o = opfunc(&["modulus-star", "--delta", "4"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-9);
    assert_eq!(opfunc(&["modulus-star", "--delta", "0.5", "--alpha", "1"]).status.code(), Some(2));
}

#[test]
fn cubes_accepts_negative_coordinates() {
    let o = opfunc(&["cubes", "--x", "-0.5,3", "--y", "0.25,-7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["separation"].as_f64().unwrap() >= v["sidelength"].as_f64().unwrap());
    let bad = opfunc(&["cubes", "--x", "1,2", "--y", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn gamma2_of_the_identity_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.json");
    fs::write(&path, r#"{"dim": 2, "entries": [[1,0],[0,0],[0,0],[1,0]]}"#).unwrap();
    let o = opfunc(&["gamma2", path.to_str().unwrap(), "--tol", "1e-8"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    let missing = opfunc(&["gamma2", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn psi_check_passes_on_a_small_sweep() {
    let o = opfunc(&["psi-check", "--n", "2", "--pairs", "500", "--seed", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("pairs 500"));
}

#[test]
fn run_writes_the_three_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"trials": 2, "dims": [4], "alphas": [0.3], "deltas": {"min": 0.001, "max": 1.0, "count": 5}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = opfunc(&[
        "run",
        "hoelder",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = stdout(&o);
    assert!(o.status.code() == Some(0) || o.status.code() == Some(1), "{text}");
    for f in ["report.json", "rows.csv", "curve.dat"] {
        assert!(out.join("hoelder").join(f).is_file(), "{f} missing");
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("hoelder/report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 9);
    assert_eq!(report["experiment"], "hoelder");
    assert_eq!(o.status.code() == Some(0), report["passed"].as_bool().unwrap());
}

#[test]
fn unknown_config_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"trails": 2}"#).unwrap();
    let o = opfunc(&["run", "lipschitz", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
