use std::process::Command;

use frobkp_cli::{run_suite, RunError, Status, SuiteConfig};

fn cfg(suite: &str, m: u32, n: u32) -> SuiteConfig {
    SuiteConfig {
        suite: suite.into(),
        m,
        n,
        ..SuiteConfig::default()
    }
}

fn results(r: &frobkp_cli::Report) -> Vec<(String, String, Status, String)> {
    r.records
        .iter()
        .map(|x| {
            (
                x.check.clone(),
                x.params.to_string(),
                x.status,
                x.witness
                    .as_ref()
                    .map(|w| w.to_string())
                    .unwrap_or_default(),
            )
        })
        .collect()
}

#[test]
fn gram_suite_passes() {
    let r = run_suite(&cfg("gram", 1, 1)).unwrap();
    assert!(!r.records.is_empty());
    assert!(r.records.iter().all(|x| x.status == Status::Pass), "{r:?}");
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn potential_suite_emits_f11() {
    let r = run_suite(&cfg("potential", 1, 1)).unwrap();
    assert_eq!(r.records.len(), 1);
    let rec = &r.records[0];
    assert_eq!(rec.status, Status::Pass);
    let f = rec.witness.as_ref().unwrap()["F"].as_str().unwrap();
    assert_eq!(f, "(1/4)*w1*w2^2 + (1/12)*w1^3");
}

#[test]
fn reports_are_deterministic() {
    let mut c = cfg("all", 2, 1);
    c.samples = 2;
    let a = run_suite(&c).unwrap();
    std::env::set_var("FROBKP_THREADS", "1");
    let b = run_suite(&c).unwrap();
    std::env::remove_var("FROBKP_THREADS");
    assert_eq!(results(&a), results(&b));
}

#[test]
fn suites_are_independent() {
    let all = results(&run_suite(&cfg("all", 1, 2)).unwrap());
    let mut parts = Vec::new();
    for s in frobkp_cli::SUITES {
        parts.extend(results(&run_suite(&cfg(s, 1, 2)).unwrap()));
    }
    assert_eq!(all, parts);
}

#[test]
fn shallow_windows_skip_instead_of_failing() {
    let mut c = cfg("gram", 2, 1);
    c.depth = 4;
    c.t_range = 12;
    let r = run_suite(&c).unwrap();
    assert!(r.count(Status::Skip) > 0);
    assert_eq!(r.count(Status::Fail), 0);
    assert_eq!(r.exit_code(), 0);
    let w = r.records.iter().find(|x| x.status == Status::Skip).unwrap();
    assert!(w
        .witness
        .as_ref()
        .unwrap()
        .to_string()
        .contains("trusted window"));
}

#[test]
fn bad_configs_are_rejected() {
    assert!(matches!(
        run_suite(&cfg("nope", 1, 1)),
        Err(RunError::Config(_))
    ));
    assert!(matches!(
        run_suite(&cfg("gram", 0, 1)),
        Err(RunError::Config(_))
    ));
    let mut c = cfg("canonical", 1, 1);
    c.tol = 0.0;
    assert!(matches!(run_suite(&c), Err(RunError::Config(_))));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"m": 1, "n": 1, "mode": "poly", "w": {"coeffs": {"1": "x"}}}"#,
    )
    .unwrap();
    let mut c = cfg("gram", 1, 1);
    c.point = Some(p);
    assert!(matches!(run_suite(&c), Err(RunError::Point(_))));
}

#[test]
fn binary_exit_codes_and_output() {
    let bin = env!("CARGO_BIN_EXE_frobkp");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let st = Command::new(bin)
        .args(["--suite", "wdvv", "--m", "2", "--n", "1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["status"], "pass");
    }
    let st = Command::new(bin)
        .args(["--suite", "nope"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));

    let pt = dir.path().join("pt.json");
    std::fs::write(
        &pt,
        r#"{"m": 1, "n": 1, "mode": "poly",
            "w": {"parity": "odd", "side": "finite", "coeffs": {"1": "1"}},
            "l": {"parity": "even", "side": "finite", "coeffs": {"2": "1", "-2": "1"}},
            "rho": "1"}"#,
    )
    .unwrap();
    let o = Command::new(bin)
        .args([
            "submanifold",
            "canonical",
            "--m",
            "1",
            "--n",
            "1",
            "--tol",
            "1e-9",
            "--point",
        ])
        .arg(&pt)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let first: serde_json::Value =
        serde_json::from_str(String::from_utf8(o.stdout).unwrap().lines().next().unwrap()).unwrap();
    assert_eq!(first["check"], "canonical");
    let u = first["witness"]["u"].as_array().unwrap();
    assert!((u[0][0].as_f64().unwrap() + 2.0).abs() < 1e-12);
    assert!((u[1][0].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn chart_points_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("chart.json");
    std::fs::write(
        &p,
        r#"{"chart": {"m": 1, "n": 1, "t": {"1": "2"}, "h": ["1/3"], "hhat": ["1"]}, "depth": 16}"#,
    )
    .unwrap();
    let mut c = cfg("gram", 1, 1);
    c.point = Some(p);
    let r = run_suite(&c).unwrap();
    assert_eq!(r.count(Status::Fail), 0);
    let adm = r.records.iter().find(|x| x.check == "admissible").unwrap();
    assert_eq!(adm.status, Status::Skip);
    assert!(r
        .records
        .iter()
        .any(|x| x.check == "gram" && x.status == Status::Pass));
}
