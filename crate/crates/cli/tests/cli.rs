use std::path::Path;
use std::process::{Command, Output};

fn tdnls(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdnls")).args(args).current_dir(cwd).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let o = tdnls(&["list-scenarios"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().any(|l| l.starts_with("blowup_critical ")));
    let o = tdnls(&["list-scenarios", "--json"], dir.path());
    let all: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(all.as_array().unwrap().len(), 10);
}

#[test]
fn run_harmonic_linear_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = tdnls(&["run", "--scenario", "harmonic_linear"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = dir.path().join("runs/harmonic");
    for f in ["trace.csv", "diagnostics.json", "snapshots/snap_0000.wfld", "snapshots/snap_0010.wfld"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("diagnostics.json")).unwrap()).unwrap();
    assert_eq!(doc["passed"], true);
    assert!(stdout(&o).contains("ab_laws"));
}

#[test]
fn config_file_with_flags() {
    let dir = tempfile::tempdir().unwrap();
    let o = tdnls(&["validate", "--scenario", "harmonic", "--emit-config"], dir.path());
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    std::fs::write(dir.path().join("h.json"), doc["config"].to_string()).unwrap();
    let o = tdnls(
        &["run", "--config", "h.json", "--dt", "2e-3", "--grid", "128x12", "--override", "time.t_end=0.5", "--out", "x"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stdout(&o));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("x/diagnostics.json")).unwrap()).unwrap();
    assert_eq!(doc["config"]["time"]["dt"], 2e-3);
    assert_eq!(doc["config"]["grid"][0]["n"], 128);
    assert_eq!(doc["steps"], 250);
}

#[test]
fn invalid_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = tdnls(
        &["validate", "--scenario", "harmonic", "--override", "d=3", "--grid", "16x8", "--override", "potential.omega=[1,1,1]", "--override", "nonlinearity.sigma=2", "--override", "nonlinearity.lambda=1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("energy-supercritical"));
    assert_eq!(tdnls(&["run", "--scenario", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(tdnls(&["run"], dir.path()).status.code(), Some(2));
    assert_eq!(tdnls(&["run", "--scenario", "free", "--grid", "12"], dir.path()).status.code(), Some(2));
}

#[test]
fn failing_checks_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = tdnls(&["run", "--scenario", "harmonic", "--override", "time.t_end=0.5", "--override", "diagnostics.0.tol=0"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let o = tdnls(&["sweep", "--scenario", "harmonic", "--out", "empty"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("0 points"));
    assert_eq!(std::fs::read_to_string(dir.path().join("empty/sweep.csv")).unwrap().lines().count(), 1);

    let o = tdnls(
        &[
            "sweep", "--scenario", "harmonic", "--override", "time.t_end=0.3", "--override", r#"diagnostics=[{"check":"mass"}]"#,
            "--param", "time.dt=1e-3,2e-3", "--param", "initial.width=1,2", "--zip", "--jobs", "2",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stdout(&o));
    let csv = std::fs::read_to_string(dir.path().join("runs/harmonic-sweep/sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("index,time.dt,initial.width,status,passed,mass.value,mass.passed"));
    assert!(lines[2].starts_with("1,0.002,2,completed,true,"));
}
