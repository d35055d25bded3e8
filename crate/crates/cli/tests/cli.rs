use std::path::Path;
use std::process::{Command, Output};

use stripe_register::{commands, RunConfig};

fn run(args: &[&str], config: Option<&str>, out: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nanostripe"));
    cmd.args(args).arg("--out").arg(out);
    if let Some(text) = config {
        let path = out.with_extension("json");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn unknown_keys_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(
        &["fieldmap"],
        Some(r#"{"qubit": {"g": 2.0}}"#),
        &tmp.path().join("a"),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown field"), "{}", stderr(&o));
    assert!(!tmp.path().join("a").exists());
}

#[test]
fn empty_grid_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"fieldmap": {"x_nm": {"start": 100, "stop": 50, "step": 10}}}"#;
    let o = run(&["fieldmap"], Some(cfg), &tmp.path().join("a"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("fieldmap.x_nm"), "{}", stderr(&o));
    // validation precedes any output
    assert!(!tmp.path().join("a").exists());
}

#[test]
fn zero_linewidth_fails_before_computing() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(
        &["spectrum"],
        Some(r#"{"qubit": {"linewidth_G": 0}}"#),
        &tmp.path().join("a"),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(!tmp.path().join("a").exists());
}

#[test]
fn neumann_changes_modes() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("d"), tmp.path().join("n"));
    assert!(run(&["modes"], None, &a).status.success());
    assert!(run(&["modes", "--bc", "neumann"], None, &b)
        .status
        .success());
    let da = std::fs::read(a.join("modes.csv")).unwrap();
    let db = std::fs::read(b.join("modes.csv")).unwrap();
    assert_ne!(da, db);
    // potential does not depend on the boundary condition
    assert_eq!(
        std::fs::read(a.join("potential.csv")).unwrap(),
        std::fs::read(b.join("potential.csv")).unwrap()
    );
}

#[test]
fn modes_table_cross_check() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = RunConfig::default();
    commands::modes(&cfg, tmp.path()).unwrap();
    let text = std::fs::read_to_string(tmp.path().join("modes.csv")).unwrap();
    let mut rows = text.lines();
    let header: Vec<_> = rows.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (edge, diff, nz) = (col("edge_localized"), col("tm_fd_rel_diff"), col("n_z"));
    let mut n = 0;
    for r in rows {
        let f: Vec<_> = r.split(',').collect();
        assert!(f[diff].parse::<f64>().unwrap() < 1e-6, "{r}");
        let n_z: usize = f[nz].parse().unwrap();
        if n_z < 2 {
            assert_eq!(f[edge], "1");
        }
        n += 1;
    }
    assert!(n >= 4);
    let profiles = std::fs::read_to_string(tmp.path().join("profiles.csv")).unwrap();
    let first = profiles.lines().nth(1).unwrap();
    let z: Vec<f64> = first
        .split(',')
        .take(2)
        .map(|s| s.parse().unwrap())
        .collect();
    assert!((z[1] - z[0] - 450.0).abs() < 1e-6);
}

#[test]
fn design_check_failure_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("a");
    let o = run(
        &["design-check"],
        Some(r#"{"register": {"margin_G": 1000}}"#),
        &out,
    );
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    assert_eq!(report["overlap_pass"], false);
    assert_eq!(report["qubits"].as_array().unwrap().len(), 16);
}

#[test]
fn default_design_passes_and_reports_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = RunConfig::default();
    assert!(commands::design_check(&cfg, tmp.path()).unwrap().pass);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["addressable_bandwidth"], 178);
    let q = &report["qubits"][0];
    assert!(q["ising_ratio"].as_f64().unwrap() > 40.0);
    assert_eq!(q["ising_ratio"], q["ising_ratio_scaled"]);
}

#[test]
fn preset_override_scales_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"fieldmap": {"x_nm": {"start": 100, "stop": 100, "step": 1},
                              "z_nm": {"start": 0, "stop": 0, "step": 1},
                              "profile_x_nm": {"start": 230, "stop": 230, "step": 1},
                              "c_x_nm": {"start": 230, "stop": 230, "step": 1}}}"#;
    let bz = |args: &[&str], dir: &str| {
        let out = tmp.path().join(dir);
        assert!(run(args, Some(cfg), &out).status.success());
        let text = std::fs::read_to_string(out.join("profile_bz_x.csv")).unwrap();
        let row = text.lines().nth(1).unwrap().to_string();
        row.split(',').nth(1).unwrap().parse::<f64>().unwrap()
    };
    let py = bz(&["fieldmap"], "py");
    let dy = bz(&["fieldmap", "--preset", "dysprosium"], "dy");
    // CSV carries 9 significant digits
    assert!((dy / py - 3.0).abs() < 1e-8);
}

#[test]
fn spectrum_lines_and_window() {
    let tmp = tempfile::tempdir().unwrap();
    commands::spectrum(&RunConfig::default(), tmp.path()).unwrap();
    let lines: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("lines.json")).unwrap())
            .unwrap();
    let refs = lines["reference_qubits"].as_array().unwrap();
    assert!(refs[0]["x_nm"].is_null());
    assert!((refs[0]["b_res_T"].as_f64().unwrap() - 1.215).abs() < 1e-3);
    assert!((refs[1]["b_res_T"].as_f64().unwrap() - 1.250).abs() < 2e-3);
    for q in lines["qubits"].as_array().unwrap() {
        assert!((q["b_res_T"].as_f64().unwrap() - 1.28).abs() < 0.01);
    }
    let w = lines["spin_wave_free_window"]["width_G"].as_f64().unwrap();
    assert!((w - 1350.0).abs() < 150.0, "{w}");
}
