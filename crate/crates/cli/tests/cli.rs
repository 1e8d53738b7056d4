use std::path::Path;
use std::process::{Command, Output};

fn fracwave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracwave"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const RANDOM_SOLVE: &str = r#"
group = "torus2"
truncation = 3.0
alpha = 0.5
p = 2.0
epsilon = 0.5
t_end = 0.2
sample_every = 5
[u0]
kind = "range"
lo = 0.0
hi = 1.0
[u1]
kind = "random"
amplitude = 0.3
[stepper]
h = 0.01
"#;

#[test]
fn solve_writes_trajectory_with_expected_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), RANDOM_SOLVE);
    let out = fracwave(dir.path(), &["solve", "--config", &cfg, "--seed", "7"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,L2_norm,Hs_norm,dt_norm,Linf_norm,U0"));
    assert_eq!(lines.count(), 5);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["blew_up"], false);
}

#[test]
fn same_seed_reproduces_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = write_config(a.path(), RANDOM_SOLVE);
    for d in [a.path(), b.path()] {
        assert!(fracwave(d, &["solve", "--config", &cfg, "--seed", "11"])
            .status
            .success());
    }
    let read = |d: &Path| std::fs::read(d.join("trajectory.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));

    let c = tempfile::tempdir().unwrap();
    assert!(
        fracwave(c.path(), &["solve", "--config", &cfg, "--seed", "12"])
            .status
            .success()
    );
    assert_ne!(read(a.path()), read(c.path()));
}

#[test]
fn random_data_without_seed_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), RANDOM_SOLVE);
    assert_eq!(
        fracwave(dir.path(), &["solve", "--config", &cfg])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn unknown_suite_and_bad_config_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        fracwave(dir.path(), &["verify", "nonsense"]).status.code(),
        Some(2)
    );
    let cfg = write_config(dir.path(), "colour = 3\n");
    assert_eq!(
        fracwave(dir.path(), &["solve", "--config", &cfg])
            .status
            .code(),
        Some(2)
    );
    let cfg = write_config(dir.path(), "alpha = 1.5\n");
    assert_eq!(
        fracwave(dir.path(), &["solve", "--config", &cfg])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn short_sweep_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[sweep]\neps_min = 0.01\neps_max = 0.1\ncount = 2\n",
    );
    let out = fracwave(dir.path(), &["lifespan-sweep", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("sweep.csv").exists());
}

#[test]
fn lifespan_sweep_recovers_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
group = "su2"
truncation = 1.0
p = 3.0
[u0]
kind = "constant"
value = 1.0
[stepper]
h = 0.001
h_max = 1000.0
max_growth = 0.01
max_time = 1e6
[sweep]
eps_min = 0.0009765625
eps_max = 0.125
count = 8
"#,
    );
    let out = fracwave(dir.path(), &["lifespan-sweep", "--config", &cfg]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let sweep = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(sweep.starts_with("epsilon,T_num,terminal_reason\n"));
    assert_eq!(sweep.matches("THRESHOLD").count(), 8);
    let fit: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fit.json")).unwrap())
            .unwrap();
    let slope = fit["slope"].as_f64().unwrap();
    assert_eq!(fit["theoretical_slope"].as_f64().unwrap(), -1.0);
    assert!((slope + 1.0).abs() < 0.05, "slope {slope}");
}

#[test]
fn verify_transforms_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracwave(dir.path(), &["verify", "transforms", "--seed", "3"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let rep: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("verify_transforms.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(rep["pass"], true);
    assert_eq!(rep["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn kg_solve_writes_energy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
group = "torus1"
truncation = 6.0
t_end = 0.5
[u0]
kind = "random"
[mass]
kind = "range"
lo = 0.0
hi = 5.0
[stepper]
h = 0.001
"#,
    );
    let out = fracwave(dir.path(), &["kg-solve", "--config", &cfg, "--seed", "2"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    assert!(csv.starts_with("t,E,kinetic,potential_frac,potential_mass,drift_rel\n"));
    let s: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert!(s["max_drift"].as_f64().unwrap() < 1e-6);
    assert_eq!(s["flagged"], false);
}

#[test]
fn kato_check_default_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracwave(dir.path(), &["kato-check"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let k: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("kato.json")).unwrap())
            .unwrap();
    assert_eq!(k["branch"], "velocity");
    assert_eq!(k["m"].as_f64().unwrap(), 1.5);
    assert!(k["blowup_time"].as_f64().unwrap() < k["bound"].as_f64().unwrap());
}
