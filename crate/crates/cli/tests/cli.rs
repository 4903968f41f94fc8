use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use tempfile::TempDir;

fn ntcp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ntcp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn config(dir: &TempDir, name: &str, json: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

fn out(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

const CHARGE: &str = r#"{"realization": "charge", "n": 2, "g_hz": 22e6, "omega_ratio": 15, "k": 0}"#;

#[test]
fn solve_reference_point() {
    let d = TempDir::new().unwrap();
    let c = config(&d, "c.json", CHARGE);
    let o = ntcp(&["solve", "--config", &c, "--out", &out(&d, "o")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for row in ["Omega'           330.0000", "Omega1           352.0000", "Omega_r           11.0000", "68.1818"] {
        assert!(s.contains(row), "missing {row} in\n{s}");
    }
    let params: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.path().join("o/params.json")).unwrap()).unwrap();
    assert_eq!(params["n"], 2);
    assert!(d.path().join("o/schedule.json").exists());
}

#[test]
fn solve_weak_drive_exits_with_condition_code() {
    let d = TempDir::new().unwrap();
    let c = config(&d, "c.json", r#"{"n": 1, "g_hz": 22e6, "omega_ratio": 3}"#);
    let o = ntcp(&["solve", "--config", &c, "--out", &out(&d, "o")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("violated: regime"));
}

#[test]
fn malformed_config_is_a_usage_error() {
    let d = TempDir::new().unwrap();
    let c = config(&d, "c.json", "{\"n\": 1,\n \"g_hz\": }");
    let o = ntcp(&["solve", "--config", &c]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let c = config(&d, "u.json", r#"{"n": 1, "g_hzz": 1e6}"#);
    assert_eq!(ntcp(&["solve", "--config", &c]).status.code(), Some(1));
    assert_eq!(ntcp(&["solve", "--config", &out(&d, "missing.json")]).status.code(), Some(1));
    assert_eq!(ntcp(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ntcp(&["--help"]).status.code(), Some(0));
}

#[test]
fn simulate_quick_run_creates_output_directory() {
    let d = TempDir::new().unwrap();
    let c = config(&d, "c.json", r#"{"n": 1, "g_hz": 22e6, "omega_ratio": 15, "fock_cutoff": 5, "tol": 1e-6}"#);
    let dir = out(&d, "nested/deeper");
    let start = Instant::now();
    let o = ntcp(&["simulate", "--config", &c, "--out", &dir]);
    assert!(start.elapsed().as_secs_f64() < 10.0);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(&dir).join("report.json")).unwrap()).unwrap();
    assert!((report["effective_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    let f = report["full_fidelity"]["vacuum"].as_f64().unwrap();
    assert!(f > 0.9 && f <= 1.0);
    assert_eq!(report["leakage"]["kind"], "ESTIMATE");

    let r = ntcp(&["report", &Path::new(&dir).join("report.json").to_string_lossy()]);
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).contains("effective fidelity"));
}

#[test]
fn reports_flag_reference_discrepancies() {
    let d = TempDir::new().unwrap();
    let atom = config(
        &d,
        "a.json",
        r#"{"realization": "atomic", "n": 1, "g_hz": 50e3, "full_dynamics": false, "tau_a_s": 1e-6, "tau_m_s": 1e-6}"#,
    );
    let o = ntcp(&["simulate", "--config", &atom, "--out", &out(&d, "a")]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("a/report.json")).unwrap()).unwrap();
    let flag = &report["timing"]["reference_flags"][0];
    assert_eq!(flag["quoted"].as_f64(), Some(65e-6));
    assert!((flag["computed"].as_f64().unwrap() - 35e-6).abs() < 1e-12);
    assert!(stdout(&o).contains("~65 us"));

    let charge = config(&d, "c.json", &CHARGE.replace("}", r#", "full_dynamics": false}"#));
    let o = ntcp(&["simulate", "--config", &charge, "--out", &out(&d, "c")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("~794 ns"));
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn sweep_rabi_ratio_is_deterministic_and_spread_shrinks() {
    let d = TempDir::new().unwrap();
    let c = config(
        &d,
        "c.json",
        r#"{"n": 1, "g_hz": 22e6, "fock_cutoff": 6,
            "cavity_states": [{"kind": "vacuum"}, {"kind": "fock", "n": 1}],
            "sweep": [{"parameter": "omega_ratio", "values": [10, 15, 25, 50]}]}"#,
    );
    let o1 = ntcp(&["sweep", "--config", &c, "--out", &out(&d, "s1"), "--jobs", "1"]);
    assert_eq!(o1.status.code(), Some(0), "{}", String::from_utf8_lossy(&o1.stderr));
    let o2 = ntcp(&["sweep", "--config", &c, "--out", &out(&d, "s2"), "--jobs", "4"]);
    assert_eq!(o2.status.code(), Some(0));
    let a = fs::read(d.path().join("s1/sweep.csv")).unwrap();
    let b = fs::read(d.path().join("s2/sweep.csv")).unwrap();
    assert_eq!(a, b);

    let table = rows(&String::from_utf8(a).unwrap());
    assert_eq!(
        table[0],
        ["omega_ratio", "effective_fidelity", "full_fidelity_vacuum", "full_fidelity_fock1", "spread", "p2", "p3", "t_op_s"]
    );
    assert_eq!(table.len(), 5);
    let spread: Vec<f64> = table[1..].iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(spread.windows(2).all(|w| w[1] <= w[0]), "{spread:?}");
}

#[test]
fn sweep_parity_index_keeps_effective_gate_exact() {
    let d = TempDir::new().unwrap();
    let c = config(
        &d,
        "c.json",
        r#"{"n": 2, "g_hz": 22e6, "full_dynamics": false,
            "sweep": [{"parameter": "k", "values": [0, 1, 2]}]}"#,
    );
    let o = ntcp(&["sweep", "--config", &c, "--out", &out(&d, "s")]);
    assert_eq!(o.status.code(), Some(0));
    let table = rows(&fs::read_to_string(d.path().join("s/sweep.csv")).unwrap());
    assert_eq!(table[0], ["k", "effective_fidelity", "spread", "p2", "p3", "t_op_s"]);
    assert_eq!(table.len(), 4);
    for r in &table[1..] {
        assert!((r[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn sweep_rejects_bad_axes() {
    let d = TempDir::new().unwrap();
    for (name, axis) in [
        ("empty.json", r#"{"parameter": "k", "values": []}"#),
        ("linspace.json", r#"{"parameter": "omega_ratio", "start": 10, "stop": 20, "count": 0}"#),
        ("unknown.json", r#"{"parameter": "warp_factor", "values": [1]}"#),
    ] {
        let c = config(&d, name, &format!(r#"{{"n": 1, "sweep": [{axis}]}}"#));
        let o = ntcp(&["sweep", "--config", &c, "--out", &out(&d, "s")]);
        assert_eq!(o.status.code(), Some(1), "{name}");
    }
    let c = config(&d, "none.json", r#"{"n": 1}"#);
    assert_eq!(ntcp(&["sweep", "--config", &c, "--out", &out(&d, "s")]).status.code(), Some(1));
}

#[test]
fn budget_exhaustion_exit_code() {
    let d = TempDir::new().unwrap();
    // A tolerance this tight cannot be certified within the step budget.
    let c = config(&d, "c.json", r#"{"n": 1, "g_hz": 22e6, "omega_ratio": 50, "fock_cutoff": 2}"#);
    let o = ntcp(&["simulate", "--config", &c, "--out", &out(&d, "o"), "--tol", "1e-15"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn inconsistent_hardware_exits_with_condition_code() {
    let d = TempDir::new().unwrap();
    let c = config(
        &d,
        "c.json",
        r#"{"realization": "charge", "n": 1, "g_hz": 22e6, "full_dynamics": false, "circuit": {"v0_qu": 1e-9}}"#,
    );
    let o = ntcp(&["simulate", "--config", &c, "--out", &out(&d, "o")]);
    assert_eq!(o.status.code(), Some(2));
}
