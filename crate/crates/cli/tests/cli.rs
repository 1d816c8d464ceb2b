//! End-to-end exercises of the command-line surface against the bundled
//! configurations.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ring-spdc")
}

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary should run")
}

fn read_json(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).expect("valid JSON")
}

#[test]
fn config_errors_exit_one_with_schema_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"physics": {"omega_d_rad_per_s": 2.5e15, "kappa_per_s": 1e9, "kappa_1_per_s": 1e9,
            "kappa_2_per_s": 1e9, "g_per_s": 1e8, "bogus_key": 1.0},
           "grid": {"length_m": 1.0, "group_velocity_m_per_s": 7.5e7},
           "pulse": {"bandwidth_rad_per_s": 1e9}}"#,
    )
    .unwrap();
    let out = run(&["simulate", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("config error at"), "stderr: {stderr}");
    assert!(stderr.contains("physics"), "stderr: {stderr}");
}

#[test]
fn missing_config_file_exits_one() {
    let out = run(&["simulate", "--config", "/nonexistent/nope.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lossless_demo_summary_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_path("demo_lossless.json");
    let out = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = read_json(&dir.path().join("demo_lossless_summary.json"));
    assert!(summary["vacuum_pop_final"].as_f64().unwrap() < 1e-8);
    // g = 0 never populates the pair state.
    assert_eq!(summary["peak_c12_sq"].as_f64().unwrap(), 0.0);
    assert!(!summary["config_sha256"].as_str().unwrap().is_empty());

    let traj1 = std::fs::read(dir.path().join("demo_lossless_trajectory.csv")).unwrap();
    assert!(traj1.starts_with(b"# config_sha256: "));
    // Identical config and version: byte-identical output.
    let dir2 = tempfile::tempdir().unwrap();
    let out2 = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir2.path().to_str().unwrap(),
    ]);
    assert!(out2.status.success());
    let traj2 = std::fs::read(dir2.path().join("demo_lossless_trajectory.csv")).unwrap();
    assert_eq!(traj1, traj2);
}

#[test]
fn narrowband_simulate_reaches_unity_conversion() {
    // Lossless symmetric configuration at the nonlinear coupling optimum,
    // driven by a narrowband pulse: the quasi-steady ratio must sit at 1.
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--config",
        config_path("fig2a_red_sim.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = read_json(&dir.path().join("fig2a_red_sim_summary.json"));
    let qs = summary["quasi_steady_ratio_1"].as_f64().unwrap();
    assert!((qs - 1.0).abs() <= 0.05, "quasi-steady ratio {qs}");
    assert_eq!(summary["closed_form_ratio_1"].as_f64().unwrap(), 1.0);
}

#[test]
fn zero_coupling_verify_trivially_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("static.json");
    std::fs::write(
        &cfg,
        r#"{"physics": {"omega_d_rad_per_s": 2.5e15, "kappa_per_s": 0.0, "kappa_1_per_s": 0.0,
            "kappa_2_per_s": 0.0, "g_per_s": 0.0},
           "grid": {"length_m": 1.0, "group_velocity_m_per_s": 7.5e7},
           "pulse": {"bandwidth_rad_per_s": 1.94e9},
           "verify": {"t_final_s": 4.0e-9, "dt_s": 2.5e-12},
           "output": {"prefix": "static"}}"#,
    )
    .unwrap();
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn sweep_fig2a_red_locates_unity_peak() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep",
        "--config",
        config_path("fig2a_red.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let meta = read_json(&dir.path().join("fig2a_red_optimum.json"));
    let value = meta["optimum_value"].as_f64().unwrap();
    let coord = meta["optimum_coords"][0].as_f64().unwrap();
    assert!((value - 1.0).abs() <= 1e-6, "peak value {value}");
    assert!((coord - 1.0).abs() <= 1e-4, "peak position {coord}");
    let csv = std::fs::read_to_string(dir.path().join("fig2a_red_sweep.csv")).unwrap();
    assert!(csv.contains("# mode: closed-form"));
    assert!(csv.contains("g_over_g_max,ratio_1"));

    // Grid points evaluate concurrently; the serialized output must still
    // be byte-identical run to run.
    let dir2 = tempfile::tempdir().unwrap();
    let out2 = run(&[
        "sweep",
        "--config",
        config_path("fig2a_red.json").to_str().unwrap(),
        "--out",
        dir2.path().to_str().unwrap(),
    ]);
    assert!(out2.status.success());
    let csv2 = std::fs::read_to_string(dir2.path().join("fig2a_red_sweep.csv")).unwrap();
    assert_eq!(csv, csv2);
}

#[test]
fn sweep_fig2a_blue_peaks_at_quarter() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep",
        "--config",
        config_path("fig2a_blue.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let meta = read_json(&dir.path().join("fig2a_blue_optimum.json"));
    assert!((meta["optimum_value"].as_f64().unwrap() - 0.25).abs() <= 1e-6);
}

#[test]
fn sweep_fig3_finds_matched_joint_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep",
        "--config",
        config_path("fig3.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let meta = read_json(&dir.path().join("fig3_optimum.json"));
    let g = 4.1e8;
    let expected = 3.0f64.sqrt() / 2.0 * g;
    let c0 = meta["optimum_coords"][0].as_f64().unwrap();
    let c1 = meta["optimum_coords"][1].as_f64().unwrap();
    assert!((c0 - expected).abs() / expected <= 5e-3);
    assert!((c1 - expected).abs() / expected <= 5e-3);
    assert!((meta["optimum_value"].as_f64().unwrap() - 1.0 / (2.0 + 3.0f64.sqrt())).abs() <= 1e-6);
}

#[test]
fn verify_passes_and_corruption_fails_with_named_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_path("verify32.json");
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "verify failed: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    let summary = read_json(&dir.path().join("verify32_verify.json"));
    assert_eq!(summary["passed"].as_bool(), Some(true));
    assert_eq!(summary["cases"].as_array().unwrap().len(), 4);
    for case in summary["cases"].as_array().unwrap() {
        assert!(case["max_abs_diff"].as_f64().unwrap() <= 1e-6);
    }
    assert!(dir.path().join("verify32_verify_overdamped.csv").exists());

    // Negative control: a corrupted rate mapping must fail and name a state.
    let dir2 = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir2.path().to_str().unwrap(),
        "--corrupt-mu-1",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("state"),
        "expected the worst state in: {stderr}"
    );
}

#[test]
fn ode_mode_sweep_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep",
        "--config",
        config_path("sweep_ode_demo.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("sweep_ode_demo_sweep.csv")).unwrap();
    assert!(csv.contains("# mode: ode-quasi-steady"));
    assert!(csv.contains("g,ratio_1,quality"));
    // The swept values straddle the optimum g² = 2κκ₁; every closed-form
    // ratio must be reproduced within 5% by the integration.
    for line in csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("g,"))
    {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let (g, ratio) = (cols[0], cols[1]);
        let closed = {
            let kappa = 1.0e9;
            let u = 2.0 * kappa * kappa;
            8.0 * kappa * kappa * g * g / ((u + g * g) * (u + g * g))
        };
        assert!(
            (ratio - closed).abs() / closed <= 0.05,
            "g = {g:e}: ode {ratio} vs closed {closed}"
        );
    }
}

#[test]
fn env_var_supplies_the_config_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(bin())
        .args(["estimate", "--out", dir.path().to_str().unwrap()])
        .env("RING_SPDC_CONFIG", config_path("estimate_ingap.json"))
        .output()
        .expect("binary should run");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("estimate_ingap_estimate.json").exists());
}

#[test]
fn mode_cap_exits_with_resource_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("capped.json");
    std::fs::write(
        &cfg,
        r#"{"physics": {"omega_d_rad_per_s": 2.5e15, "kappa_per_s": 1e9, "kappa_1_per_s": 1e9,
            "kappa_2_per_s": 1e9, "g_per_s": 1e8},
           "grid": {"length_m": 1.0, "group_velocity_m_per_s": 7.5e7, "n_modes_cap": 8},
           "pulse": {"bandwidth_rad_per_s": 2e9}}"#,
    )
    .unwrap();
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("resource"), "stderr: {stderr}");
}

#[test]
fn estimate_reports_device_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "estimate",
        "--config",
        config_path("estimate_ingap.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("nonlinear coupling g ="),
        "stdout: {stdout}"
    );
    assert!(stdout.contains("1/s"));
    let summary = read_json(&dir.path().join("estimate_ingap_estimate.json"));
    let g = summary["g_per_s"].as_f64().unwrap();
    assert!(g >= 4.1e8 / 2.0 && g <= 4.1e8 * 2.0, "g = {g:e}");
    // Ω↔κ round trip surfaces in the report.
    let back = summary["kappa_round_trip_per_s"].as_f64().unwrap();
    assert!((back - 1.0e9).abs() <= 1e-3 * 1.0e9);
}
