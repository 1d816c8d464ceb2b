//! The four workflows behind the subcommands: amplitude simulation, flux
//! sweeps, oracle verification, device estimates.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use ring_spdc::csvio;
use ring_spdc::dynamics::{self, AnalyticSolutionParams, IntegrateOpts};
use ring_spdc::error::{Error, Result};
use ring_spdc::estimate;
use ring_spdc::flux;
use ring_spdc::lindblad::{self, CompareOpts};
use ring_spdc::model::{omega_kd_from_kappa, ModeGrid, PhysicalParams};
use ring_spdc::sweep::{self, EvalMode, OdeEvalConfig, SweepSpec};

use crate::config::LoadedConfig;

pub struct Context {
    pub out_dir: PathBuf,
    pub tolerance: Option<f64>,
}

fn ensure_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| {
        Error::Resource(format!(
            "cannot create output directory {}: {e}",
            dir.display()
        ))
    })
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    let f = fs::File::create(path)
        .map_err(|e| Error::Resource(format!("cannot create {}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Resource(format!("JSON serialization failed: {e}")))?;
    fs::write(path, text + "\n")
        .map_err(|e| Error::Resource(format!("cannot write {}: {e}", path.display())))
}

/// Fastest dynamical timescale the integrator must resolve, and a default
/// output cadence that resolves it with margin.
fn default_dt_hint(params: &PhysicalParams, grid: &ModeGrid) -> f64 {
    let mut fastest = params.delta_12.abs().max(grid.max_detuning());
    for r in [params.g, params.kappa_sigma(), params.pair_decay()] {
        fastest = fastest.max(r);
    }
    if fastest <= 0.0 {
        1.0
    } else {
        1.0 / (25.0 * fastest)
    }
}

fn slowest_decay(params: &PhysicalParams) -> Option<f64> {
    let asp = AnalyticSolutionParams::from_params(params);
    let (ra, rb) = asp.pole_decay_rates();
    let mut slow = f64::INFINITY;
    for r in [ra, rb, params.mu_1(), params.mu_2()] {
        if r > 0.0 {
            slow = slow.min(r);
        }
    }
    slow.is_finite().then_some(slow)
}

#[derive(Serialize)]
struct SimulateSummary {
    config_sha256: String,
    n_modes: usize,
    t_final_s: f64,
    peak_c12_sq: f64,
    peak_pi_1_per_s: f64,
    peak_pi_2_per_s: f64,
    peak_pi_wg_per_s: f64,
    vacuum_pop_final: f64,
    closed_form_ratio_1: f64,
    closed_form_ratio_2: f64,
    quasi_steady_ratio_1: Option<f64>,
    quasi_steady_quality: Option<f64>,
    warnings: Vec<String>,
}

pub fn cmd_simulate(loaded: &LoadedConfig, ctx: &Context) -> Result<()> {
    let cfg = &loaded.config;
    let params = cfg.params()?;
    let grid = cfg.mode_grid()?;
    let packet = cfg.wavepacket(&grid)?;
    ensure_out_dir(&ctx.out_dir)?;

    let sim = cfg.simulate.clone().unwrap_or_default();
    let t_final = sim.t_final_s.unwrap_or(2.0 / cfg.pulse.bandwidth_rad_per_s);
    let dt_hint = sim
        .dt_hint_s
        .unwrap_or_else(|| default_dt_hint(&params, &grid));
    let mut opts = IntegrateOpts {
        rel_tol: ctx.tolerance.unwrap_or(1e-9),
        ..IntegrateOpts::default()
    };
    if let Some(rows) = sim.max_rows {
        opts.max_rows = rows.max(2);
    }
    let traj = dynamics::integrate_initial(
        &params,
        &grid,
        dynamics::SseInitial::Packet(&packet),
        t_final,
        dt_hint,
        &opts,
    )?;

    let mut peak_c12_sq = 0.0f64;
    let mut peak_pi_1 = 0.0f64;
    let mut peak_pi_2 = 0.0f64;
    let mut peak_pi_wg = 0.0f64;
    for (i, &t) in traj.times.iter().enumerate() {
        let c12 = traj.c_12[i].norm_sqr();
        peak_c12_sq = peak_c12_sq.max(c12);
        let (p1, p2) = flux::emitted_flux(
            c12,
            traj.p_signal_only[i],
            traj.p_idler_only[i],
            params.kappa_1,
            params.kappa_2,
        );
        peak_pi_1 = peak_pi_1.max(p1);
        peak_pi_2 = peak_pi_2.max(p2);
        peak_pi_wg = peak_pi_wg.max(flux::waveguide_flux(&grid, &packet, t));
    }

    let mut warnings = Vec::new();
    let qs = sweep::quasi_steady_ratio(
        &params,
        &OdeEvalConfig {
            grid: grid.clone(),
            packet: packet.clone(),
            rel_tol: opts.rel_tol,
        },
    );
    let (qs_ratio, qs_quality) = match qs {
        Ok(qs) => {
            if let Some(w) = qs.warning {
                warnings.push(w);
            }
            (Some(qs.ratio_1), Some(qs.quality))
        }
        Err(e) => {
            warnings.push(format!("quasi-steady extraction unavailable: {e}"));
            (None, None)
        }
    };

    let (r1, r2) = flux::steady_flux_ratio(&params);
    let traj_path = ctx
        .out_dir
        .join(format!("{}_trajectory.csv", cfg.output.prefix));
    let mut w = create(&traj_path)?;
    csvio::write_trajectory_csv(&mut w, &traj, cfg.output.precision, Some(&loaded.sha256))?;

    let summary = SimulateSummary {
        config_sha256: loaded.sha256.clone(),
        n_modes: grid.n_modes(),
        t_final_s: t_final,
        peak_c12_sq,
        peak_pi_1_per_s: peak_pi_1,
        peak_pi_2_per_s: peak_pi_2,
        peak_pi_wg_per_s: peak_pi_wg,
        vacuum_pop_final: *traj.vacuum_pop.last().unwrap_or(&0.0),
        closed_form_ratio_1: r1,
        closed_form_ratio_2: r2,
        quasi_steady_ratio_1: qs_ratio,
        quasi_steady_quality: qs_quality,
        warnings,
    };
    write_json(
        &ctx.out_dir
            .join(format!("{}_summary.json", cfg.output.prefix)),
        &summary,
    )?;
    println!(
        "simulate: {} modes, t_final {:.3e} s, peak |C12|^2 {:.6e}, vacuum_pop_final {:.3e}",
        grid.n_modes(),
        t_final,
        peak_c12_sq,
        summary.vacuum_pop_final
    );
    println!("wrote {}", traj_path.display());
    Ok(())
}

#[derive(Serialize)]
struct OptimumMetadata {
    config_sha256: String,
    mode: String,
    axis1: String,
    axis2: Option<String>,
    optimum_coords: Vec<f64>,
    optimum_value: f64,
    refinement: String,
    warnings: Vec<String>,
}

pub fn cmd_sweep(loaded: &LoadedConfig, ctx: &Context) -> Result<()> {
    let cfg = &loaded.config;
    let section = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Validation("config has no 'sweep' section".into()))?;
    let mut base = cfg.params()?;
    if let Some(ov) = &section.overrides {
        base = ov.apply(&base)?;
    }
    let axis1 = section.axis1.to_axis()?;
    let axis2 = section.axis2.as_ref().map(|a| a.to_axis()).transpose()?;
    let mode = match section.mode.as_str() {
        "closed-form" => EvalMode::ClosedForm,
        "ode-quasi-steady" => {
            let grid = cfg.mode_grid()?;
            let packet = cfg.wavepacket(&grid)?;
            EvalMode::OdeQuasiSteady(OdeEvalConfig {
                grid,
                packet,
                rel_tol: ctx.tolerance.unwrap_or(1e-9),
            })
        }
        other => {
            return Err(Error::Validation(format!(
                "unknown sweep mode '{other}' (expected 'closed-form' or 'ode-quasi-steady')"
            )))
        }
    };
    ensure_out_dir(&ctx.out_dir)?;

    let spec = SweepSpec {
        base: base.clone(),
        axis1: axis1.clone(),
        axis2: axis2.clone(),
        mode,
    };
    let result = sweep::run_sweep(&spec)?;

    let csv_path = ctx.out_dir.join(format!("{}_sweep.csv", cfg.output.prefix));
    let mut w = create(&csv_path)?;
    csvio::write_sweep_csv(
        &mut w,
        &result,
        &base,
        spec.mode.name(),
        axis1.param.name(),
        axis2.as_ref().map(|a| a.param.name()),
        cfg.output.precision,
        Some(&loaded.sha256),
    )?;

    let meta = OptimumMetadata {
        config_sha256: loaded.sha256.clone(),
        mode: spec.mode.name().to_string(),
        axis1: axis1.param.name().to_string(),
        axis2: axis2.as_ref().map(|a| a.param.name().to_string()),
        optimum_coords: result.optimum_coords.clone(),
        optimum_value: result.optimum_value,
        refinement: result.refinement.to_string(),
        warnings: result.warnings.clone(),
    };
    write_json(
        &ctx.out_dir
            .join(format!("{}_optimum.json", cfg.output.prefix)),
        &meta,
    )?;
    println!(
        "sweep: optimum ratio {:.9} at {:?} ({})",
        result.optimum_value, result.optimum_coords, result.refinement
    );
    println!("wrote {}", csv_path.display());
    Ok(())
}

#[derive(Serialize)]
struct VerifyCaseSummary {
    name: String,
    max_abs_diff: f64,
    worst_state: String,
    worst_time_s: f64,
    passed: bool,
}

#[derive(Serialize)]
struct VerifySummary {
    config_sha256: String,
    threshold: f64,
    cases: Vec<VerifyCaseSummary>,
    passed: bool,
}

pub fn cmd_verify(loaded: &LoadedConfig, ctx: &Context, mu_1_scale: f64) -> Result<()> {
    const THRESHOLD: f64 = 1e-6;
    let cfg = &loaded.config;
    let base = cfg.params()?;
    let grid = cfg.mode_grid()?;
    let packet = cfg.wavepacket(&grid)?;
    ensure_out_dir(&ctx.out_dir)?;

    let section = cfg.verify.clone().unwrap_or_default();
    let mut cases: Vec<(String, PhysicalParams)> = Vec::new();
    if section.cases.is_empty() {
        cases.push(("base".to_string(), base.clone()));
    } else {
        for c in &section.cases {
            cases.push((c.name.clone(), c.overrides.apply(&base)?));
        }
    }

    let mut summaries = Vec::new();
    let mut all_passed = true;
    for (name, params) in &cases {
        let t_final = section.t_final_s.unwrap_or_else(|| {
            slowest_decay(params).map_or(2.0 / cfg.pulse.bandwidth_rad_per_s, |s| 8.0 / s)
        });
        let dt = section
            .dt_s
            .unwrap_or_else(|| default_dt_hint(params, &grid));
        let report = lindblad::compare_with_sse(
            params,
            &grid,
            &packet,
            t_final,
            dt,
            &CompareOpts {
                rel_tol: ctx.tolerance.unwrap_or(1e-10),
                mu_1_scale,
                ..CompareOpts::default()
            },
        )?;
        let path = ctx
            .out_dir
            .join(format!("{}_verify_{}.csv", cfg.output.prefix, name));
        let mut w = create(&path)?;
        csvio::write_comparison_csv(&mut w, &report, cfg.output.precision, Some(&loaded.sha256))?;
        let passed = report.max_abs_diff <= THRESHOLD;
        all_passed &= passed;
        println!(
            "verify[{name}]: max |SSE - Lindblad| = {:.3e} at state {} (t = {:.3e} s) -> {}",
            report.max_abs_diff,
            report.worst_label,
            report.worst_time,
            if passed { "PASS" } else { "FAIL" }
        );
        summaries.push(VerifyCaseSummary {
            name: name.clone(),
            max_abs_diff: report.max_abs_diff,
            worst_state: report.worst_label.clone(),
            worst_time_s: report.worst_time,
            passed,
        });
    }
    let summary = VerifySummary {
        config_sha256: loaded.sha256.clone(),
        threshold: THRESHOLD,
        cases: summaries,
        passed: all_passed,
    };
    write_json(
        &ctx.out_dir
            .join(format!("{}_verify.json", cfg.output.prefix)),
        &summary,
    )?;
    if !all_passed {
        let worst = summary
            .cases
            .iter()
            .max_by(|a, b| a.max_abs_diff.total_cmp(&b.max_abs_diff))
            .expect("at least one case");
        return Err(Error::Accuracy(format!(
            "oracle discrepancy {:.3e} exceeds {THRESHOLD:.0e} (case {}, state {}, t = {:.3e} s)",
            worst.max_abs_diff, worst.name, worst.worst_state, worst.worst_time_s
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct EstimateSummary {
    config_sha256: String,
    g_per_s: f64,
    omega_kd_per_s: f64,
    kappa_round_trip_per_s: f64,
    mode_volume_m3: f64,
}

pub fn cmd_estimate(loaded: &LoadedConfig, ctx: &Context) -> Result<()> {
    let cfg = &loaded.config;
    let device = cfg
        .device
        .as_ref()
        .ok_or_else(|| Error::Validation("config has no 'device' section".into()))?;
    let geom = device.to_geometry()?;
    let params = cfg.params()?;
    let grid = cfg.mode_grid()?;
    ensure_out_dir(&ctx.out_dir)?;

    let g = estimate::estimate_g(&geom)?;
    let omega = omega_kd_from_kappa(&grid, params.kappa)?;
    let kappa_back = estimate::kappa_from_omega(omega, &grid)?;

    println!("estimate: nonlinear coupling g = {g:.4e} 1/s");
    println!(
        "estimate: mode volume V = {:.4e} m^3 (ring radius {:.3e} m)",
        geom.mode_volume(),
        geom.ring_radius
    );
    println!(
        "estimate: kappa = {:.4e} 1/s  <->  |Omega_kd| = {omega:.4e} rad/s (round trip {kappa_back:.4e} 1/s)",
        params.kappa
    );

    let summary = EstimateSummary {
        config_sha256: loaded.sha256.clone(),
        g_per_s: g,
        omega_kd_per_s: omega,
        kappa_round_trip_per_s: kappa_back,
        mode_volume_m3: geom.mode_volume(),
    };
    write_json(
        &ctx.out_dir
            .join(format!("{}_estimate.json", cfg.output.prefix)),
        &summary,
    )?;
    Ok(())
}
