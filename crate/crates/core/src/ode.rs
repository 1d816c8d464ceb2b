//! Adaptive embedded Runge–Kutta integration (Dormand–Prince 5(4)) for
//! complex-valued state vectors.
//!
//! The amplitude and density-matrix equations in this crate are linear and
//! non-stiff for physical parameters, so a tolerance-controlled explicit
//! pair covers them without implicit machinery. Output samples are obtained
//! by clamping steps onto the requested times, which keeps every sample at
//! the integrator's own order instead of an interpolant's.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Integration controls. `rel_tol`/`abs_tol` enter the per-component error
/// weight `abs_tol + rel_tol·|y|`; `max_step` bounds the step so oscillatory
/// right-hand sides are never aliased.
#[derive(Debug, Clone)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: Option<f64>,
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            initial_step: None,
            max_step: None,
            max_steps: 50_000_000,
        }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `dy/dt = rhs(t, y)` from `t0`, sampling the solution at the
/// strictly increasing `sample_times` (each ≥ `t0`). Steps are clamped to
/// land exactly on pending sample times, so samples carry the full
/// integration accuracy rather than an interpolant's.
///
/// `post_step`, when given, is applied to the state after each accepted step
/// (used to re-symmetrize density matrices); it disables the FSAL reuse of
/// the last stage.
pub fn integrate<F>(
    mut rhs: F,
    y0: &[C64],
    t0: f64,
    sample_times: &[f64],
    opts: &OdeOptions,
    mut post_step: Option<&mut dyn FnMut(&mut [C64])>,
    mut on_sample: impl FnMut(usize, f64, &[C64]),
) -> Result<()>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    let dim = y0.len();
    let t_end = match sample_times.last() {
        Some(&t) => t,
        None => return Ok(()),
    };
    if sample_times.iter().any(|&t| t < t0) {
        return Err(Error::Validation(
            "sample time before start of integration".into(),
        ));
    }

    let mut y = y0.to_vec();
    let mut t = t0;
    let mut sample_idx = 0;

    // Emit samples that coincide with the start time.
    while sample_idx < sample_times.len() && sample_times[sample_idx] <= t0 {
        on_sample(sample_idx, sample_times[sample_idx], &y);
        sample_idx += 1;
    }
    if sample_idx >= sample_times.len() {
        return Ok(());
    }

    let span = t_end - t0;
    if !(span > 0.0) {
        return Err(Error::Validation(
            "integration span must be positive".into(),
        ));
    }
    let max_step = opts.max_step.unwrap_or(span).min(span);
    // h_nat is the error-controlled step; each attempt is clamped to the
    // next sample time and the span end.
    let mut h_nat = opts
        .initial_step
        .unwrap_or(span / 1000.0)
        .min(max_step)
        .max(span * 1e-12);

    let mut k: Vec<Vec<C64>> = (0..7).map(|_| vec![C64::new(0.0, 0.0); dim]).collect();
    let mut y_stage = vec![C64::new(0.0, 0.0); dim];
    let mut y_new = vec![C64::new(0.0, 0.0); dim];

    let mut k1_fresh = false;
    let mut n_steps = 0usize;

    while t < t_end {
        n_steps += 1;
        if n_steps > opts.max_steps {
            return Err(Error::Accuracy(format!(
                "step budget {} exhausted at t = {:.6e} s",
                opts.max_steps, t
            )));
        }
        if h_nat < span * 1e-14 {
            return Err(Error::Accuracy(format!(
                "step size underflow at t = {:.6e} s: the system is too stiff at scale {:.3e} s for the explicit integrator",
                t, h_nat
            )));
        }
        h_nat = h_nat.min(max_step);
        let h_planned = h_nat.min(t_end - t);
        let mut h = h_planned;
        if sample_idx < sample_times.len() {
            let to_sample = sample_times[sample_idx] - t;
            if to_sample > 0.0 && to_sample < h {
                h = to_sample;
            }
        }
        let clamped = h < h_planned;

        if !k1_fresh {
            let (k1, rest) = k.split_at_mut(1);
            let _ = rest;
            rhs(t, &y, &mut k1[0]);
            k1_fresh = true;
        }

        // Stages 2..7 of the Dormand–Prince tableau.
        for (stage, coeffs) in [
            [A21, 0.0, 0.0, 0.0, 0.0, 0.0],
            [A31, A32, 0.0, 0.0, 0.0, 0.0],
            [A41, A42, A43, 0.0, 0.0, 0.0],
            [A51, A52, A53, A54, 0.0, 0.0],
            [A61, A62, A63, A64, A65, 0.0],
            [B5[0], B5[1], B5[2], B5[3], B5[4], B5[5]],
        ]
        .iter()
        .enumerate()
        {
            for i in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for (j, &a) in coeffs.iter().enumerate() {
                    if a != 0.0 {
                        acc += a * k[j][i];
                    }
                }
                y_stage[i] = y[i] + h * acc;
            }
            let (done, remaining) = k.split_at_mut(stage + 1);
            let _ = done;
            rhs(t + C[stage + 1] * h, &y_stage, &mut remaining[0]);
        }
        // Stage 6 above evaluated at y + h·Σ b5_j k_j, which is the 5th-order
        // solution itself (FSAL): reuse it.
        y_new.copy_from_slice(&y_stage);

        let mut err_sq = 0.0;
        let mut finite = true;
        for i in 0..dim {
            let mut e = C64::new(0.0, 0.0);
            for j in 0..7 {
                let d = B5[j] - B4[j];
                if d != 0.0 {
                    e += d * k[j][i];
                }
            }
            let e = h * e;
            let scale = opts.abs_tol + opts.rel_tol * y[i].norm().max(y_new[i].norm());
            err_sq += (e.norm() / scale).powi(2);
            if !y_new[i].re.is_finite() || !y_new[i].im.is_finite() {
                finite = false;
            }
        }
        let err = (err_sq / dim as f64).sqrt();
        if !finite || !err.is_finite() {
            return Err(Error::Accuracy(format!(
                "NaN/Inf produced at t = {:.6e} s with step {:.3e} s",
                t, h
            )));
        }

        if err <= 1.0 {
            let t_new = t + h;
            y.copy_from_slice(&y_new);
            t = t_new;
            if let Some(hook) = post_step.as_deref_mut() {
                hook(&mut y);
                k1_fresh = false;
            } else {
                k.swap(0, 6);
                k1_fresh = true;
            }
            // Steps land exactly on sample times by construction.
            while sample_idx < sample_times.len() && sample_times[sample_idx] <= t + 1e-12 * span {
                on_sample(sample_idx, sample_times[sample_idx], &y);
                sample_idx += 1;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            // A step clamped onto a sample time says nothing about the
            // error-controlled step; keep h_nat in that case.
            if !clamped {
                h_nat = h * factor;
            }
        } else {
            let factor = (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            h_nat = h * factor;
        }
    }

    // Any trailing samples numerically equal to t_end.
    while sample_idx < sample_times.len() {
        on_sample(sample_idx, sample_times[sample_idx], &y);
        sample_idx += 1;
    }
    Ok(())
}

/// Uniformly spaced sample times `t0, t0+dt, …` covering `[t0, t_final]`,
/// thinned so at most `max_rows` samples are produced (the final time is
/// always included).
pub fn sample_grid(t0: f64, t_final: f64, dt: f64, max_rows: usize) -> Vec<f64> {
    let span = t_final - t0;
    let n_raw = (span / dt).ceil().max(1.0) as usize;
    let stride = n_raw.div_ceil(max_rows.max(2) - 1).max(1);
    let n = n_raw.div_ceil(stride);
    let step = dt * stride as f64;
    let mut times: Vec<f64> = (0..n).map(|i| t0 + i as f64 * step).collect();
    times.push(t_final);
    times.retain(|&t| t <= t_final);
    times.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * span.max(1e-300));
    times
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let rate = 3.0;
        let times: Vec<f64> = (0..=100).map(|i| i as f64 * 0.02).collect();
        let mut got = Vec::new();
        integrate(
            |_t, y, dy| {
                dy[0] = -rate * y[0];
            },
            &[C64::new(1.0, 0.0)],
            0.0,
            &times,
            &OdeOptions::default(),
            None,
            |_i, _t, y| got.push(y[0].re),
        )
        .unwrap();
        for (i, &t) in times.iter().enumerate() {
            assert_relative_eq!(got[i], (-rate * t).exp(), max_relative = 1e-8);
        }
    }

    #[test]
    fn oscillator_phase_is_accurate_over_many_periods() {
        let omega = 5.0;
        let t_final = 40.0; // ~32 periods
        let times = vec![t_final];
        let mut last = C64::new(0.0, 0.0);
        integrate(
            |_t, y, dy| {
                dy[0] = C64::new(0.0, omega) * y[0];
            },
            &[C64::new(1.0, 0.0)],
            0.0,
            &times,
            &OdeOptions {
                rel_tol: 1e-10,
                abs_tol: 1e-13,
                ..OdeOptions::default()
            },
            None,
            |_i, _t, y| last = y[0],
        )
        .unwrap();
        let exact = C64::from_polar(1.0, omega * t_final);
        assert!(
            (last - exact).norm() < 1e-7,
            "phase error {}",
            (last - exact).norm()
        );
    }

    #[test]
    fn dense_output_interpolates_between_steps() {
        // Force big steps by loose tolerance, then sample densely.
        let times: Vec<f64> = (0..=64).map(|i| i as f64 * (1.0 / 64.0)).collect();
        let mut max_err = 0.0_f64;
        integrate(
            |t, _y, dy| {
                dy[0] = C64::new((2.0 * t).cos(), 0.0);
            },
            &[C64::new(0.0, 0.0)],
            0.0,
            &times,
            &OdeOptions {
                rel_tol: 1e-6,
                abs_tol: 1e-9,
                ..OdeOptions::default()
            },
            None,
            |_i, t, y| {
                let exact = (2.0 * t).sin() / 2.0;
                max_err = max_err.max((y[0].re - exact).abs());
            },
        )
        .unwrap();
        assert!(max_err < 1e-5, "dense output error {max_err}");
    }

    #[test]
    fn blowup_is_reported_not_silent() {
        let res = integrate(
            |t, y, dy| {
                dy[0] = y[0] / (1.0 - t); // pole at t = 1
            },
            &[C64::new(1.0, 0.0)],
            0.0,
            &[2.0],
            &OdeOptions::default(),
            None,
            |_i, _t, _y| {},
        );
        match res {
            Err(Error::Accuracy(_)) => {}
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn post_step_hook_runs_each_accepted_step() {
        let mut calls = 0usize;
        let mut hook = |_y: &mut [C64]| {
            calls += 1;
        };
        integrate(
            |_t, y, dy| {
                dy[0] = -y[0];
            },
            &[C64::new(1.0, 0.0)],
            0.0,
            &[1.0],
            &OdeOptions::default(),
            Some(&mut hook),
            |_i, _t, _y| {},
        )
        .unwrap();
        assert!(calls > 0);
    }

    #[test]
    fn sample_grid_thins_to_row_budget() {
        let g = sample_grid(0.0, 1.0, 1e-4, 100);
        assert!(g.len() <= 101);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert_eq!(g[0], 0.0);
        let g2 = sample_grid(0.0, 1.0, 0.25, 1000);
        assert_eq!(g2.len(), 5);
    }
}
