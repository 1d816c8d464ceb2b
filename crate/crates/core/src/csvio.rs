//! Deterministic CSV serialization for trajectories, sweeps, and oracle
//! comparisons.
//!
//! Floats are rendered in scientific notation with a fixed significand
//! width (17 significant digits by default), so identical inputs produce
//! byte-identical files. Each writer embeds the configuration hash when one
//! is supplied.

use std::io::Write;

use crate::dynamics::AmplitudeTrajectory;
use crate::error::{Error, Result};
use crate::lindblad::ComparisonReport;
use crate::model::PhysicalParams;
use crate::sweep::SweepResult;

/// Fixed-width scientific formatting with `sig` significant digits.
pub fn fmt_float(x: f64, sig: usize) -> String {
    format!("{:.*e}", sig.saturating_sub(1), x)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Resource(format!("write failed: {e}"))
}

fn write_provenance<W: Write>(w: &mut W, config_hash: Option<&str>) -> Result<()> {
    if let Some(hash) = config_hash {
        writeln!(w, "# config_sha256: {hash}").map_err(io_err)?;
    }
    Ok(())
}

/// Trajectory CSV: time, re/im of each mode amplitude, re/im of the drive
/// and pair amplitudes, vacuum population, remainder-state populations.
pub fn write_trajectory_csv<W: Write>(
    w: &mut W,
    traj: &AmplitudeTrajectory,
    sig: usize,
    config_hash: Option<&str>,
) -> Result<()> {
    write_provenance(w, config_hash)?;
    let n = traj.n_modes();
    let mut header = String::from("time_s");
    for k in 0..n {
        header.push_str(&format!(",re_c_k_{k:04},im_c_k_{k:04}"));
    }
    header.push_str(",re_c_d,im_c_d,re_c_12,im_c_12,vacuum_pop,p_signal_only,p_idler_only");
    writeln!(w, "{header}").map_err(io_err)?;
    for i in 0..traj.times.len() {
        let mut line = fmt_float(traj.times[i], sig);
        for k in 0..n {
            line.push(',');
            line.push_str(&fmt_float(traj.c_k[i][k].re, sig));
            line.push(',');
            line.push_str(&fmt_float(traj.c_k[i][k].im, sig));
        }
        for v in [
            traj.c_d[i].re,
            traj.c_d[i].im,
            traj.c_12[i].re,
            traj.c_12[i].im,
            traj.vacuum_pop[i],
            traj.p_signal_only[i],
            traj.p_idler_only[i],
        ] {
            line.push(',');
            line.push_str(&fmt_float(v, sig));
        }
        writeln!(w, "{line}").map_err(io_err)?;
    }
    Ok(())
}

/// Sweep CSV: header lines carrying the full base parameter set and mode,
/// then one row per grid point.
pub fn write_sweep_csv<W: Write>(
    w: &mut W,
    result: &SweepResult,
    base: &PhysicalParams,
    mode: &str,
    axis1_name: &str,
    axis2_name: Option<&str>,
    sig: usize,
    config_hash: Option<&str>,
) -> Result<()> {
    write_provenance(w, config_hash)?;
    writeln!(w, "# mode: {mode}").map_err(io_err)?;
    for (name, v) in [
        ("omega_d_rad_per_s", base.omega_d),
        ("delta_12_rad_per_s", base.delta_12),
        ("kappa_per_s", base.kappa),
        ("kappa_1_per_s", base.kappa_1),
        ("kappa_2_per_s", base.kappa_2),
        ("gamma_1_per_s", base.gamma_1),
        ("gamma_2_per_s", base.gamma_2),
        ("mu_d_per_s", base.mu_d),
        ("g_per_s", base.g),
        ("g_phase_rad", base.g_phase),
    ] {
        writeln!(w, "# base.{name} = {}", fmt_float(v, sig)).map_err(io_err)?;
    }
    for warning in &result.warnings {
        writeln!(w, "# warning: {warning}").map_err(io_err)?;
    }
    let with_quality = result.qualities.is_some();
    match (axis2_name, &result.axis2_values) {
        (Some(a2), Some(v2)) => {
            let quality_col = if with_quality { ",quality" } else { "" };
            writeln!(w, "{axis1_name},{a2},ratio_1{quality_col}").map_err(io_err)?;
            let n2 = v2.len();
            for (idx, r) in result.ratios.iter().enumerate() {
                let (i1, i2) = (idx / n2, idx % n2);
                let mut line = format!(
                    "{},{},{}",
                    fmt_float(result.axis1_values[i1], sig),
                    fmt_float(v2[i2], sig),
                    fmt_float(*r, sig)
                );
                if let Some(q) = &result.qualities {
                    line.push(',');
                    line.push_str(&fmt_float(q[idx], sig));
                }
                writeln!(w, "{line}").map_err(io_err)?;
            }
        }
        _ => {
            let quality_col = if with_quality { ",quality" } else { "" };
            writeln!(w, "{axis1_name},ratio_1{quality_col}").map_err(io_err)?;
            for (idx, r) in result.ratios.iter().enumerate() {
                let mut line = format!(
                    "{},{}",
                    fmt_float(result.axis1_values[idx], sig),
                    fmt_float(*r, sig)
                );
                if let Some(q) = &result.qualities {
                    line.push(',');
                    line.push_str(&fmt_float(q[idx], sig));
                }
                writeln!(w, "{line}").map_err(io_err)?;
            }
        }
    }
    Ok(())
}

/// Oracle comparison CSV: one row per (time, state) pair.
pub fn write_comparison_csv<W: Write>(
    w: &mut W,
    report: &ComparisonReport,
    sig: usize,
    config_hash: Option<&str>,
) -> Result<()> {
    write_provenance(w, config_hash)?;
    writeln!(
        w,
        "time_s,state,population_sse,population_lindblad,abs_diff"
    )
    .map_err(io_err)?;
    for row in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_float(row.time, sig),
            row.label,
            fmt_float(row.population_sse, sig),
            fmt_float(row.population_lindblad, sig),
            fmt_float(row.abs_diff, sig)
        )
        .map_err(io_err)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_mode_grid, gaussian_wavepacket};
    use crate::sweep::{run_sweep, Axis, AxisScale, EvalMode, SweepParam, SweepSpec};

    #[test]
    fn float_formatting_is_fixed_width() {
        assert_eq!(fmt_float(1.0, 17), "1.0000000000000000e0");
        assert_eq!(fmt_float(4.712388980384690e8, 17), "4.7123889803846902e8");
        assert_eq!(fmt_float(-2.5e-10, 5), "-2.5000e-10");
    }

    #[test]
    fn trajectory_csv_is_deterministic() {
        let grid = build_mode_grid(1.0, 7.5e7, 1e9, 8.0).unwrap();
        let packet = gaussian_wavepacket(&grid, 5e8).unwrap();
        let params = PhysicalParams {
            omega_d: 2.5e15,
            delta_12: 0.0,
            kappa: 5e8,
            kappa_1: 3e8,
            kappa_2: 3e8,
            gamma_1: 0.0,
            gamma_2: 0.0,
            mu_d: 2e8,
            g: 6e8,
            g_phase: 0.0,
        };
        let traj =
            crate::dynamics::integrate_amplitudes(&params, &grid, &packet, 2e-9, 5e-12).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_trajectory_csv(&mut a, &traj, 17, Some("deadbeef")).unwrap();
        write_trajectory_csv(&mut b, &traj, 17, Some("deadbeef")).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("# config_sha256: deadbeef\n"));
        assert!(text.contains("time_s,re_c_k_0000"));
    }

    #[test]
    fn sweep_csv_layout() {
        let base = PhysicalParams {
            omega_d: 2.5e15,
            delta_12: 0.0,
            kappa: 1e9,
            kappa_1: 1e9,
            kappa_2: 1e9,
            gamma_1: 0.0,
            gamma_2: 0.0,
            mu_d: 0.0,
            g: 1.0,
            g_phase: 0.0,
        };
        let spec = SweepSpec {
            base: base.clone(),
            axis1: Axis {
                param: SweepParam::GOverGMax,
                min: 0.5,
                max: 2.0,
                points: 4,
                scale: AxisScale::Linear,
            },
            axis2: None,
            mode: EvalMode::ClosedForm,
        };
        let result = run_sweep(&spec).unwrap();
        let mut out = Vec::new();
        write_sweep_csv(
            &mut out,
            &result,
            &base,
            "closed-form",
            "g_over_g_max",
            None,
            17,
            None,
        )
        .unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("# mode: closed-form"));
        assert!(text.contains("# base.kappa_per_s ="));
        assert!(text.contains("g_over_g_max,ratio_1"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5);
    }
}
