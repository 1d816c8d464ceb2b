//! Parameter sweeps over the coupling landscape and numeric optimum
//! location, with golden-section refinement of the best grid point.
//!
//! Two evaluation modes: the closed-form quasi-steady ratio (pure algebra,
//! cheap enough for dense grids) and a full amplitude integration from
//! which the quasi-steady ratio is extracted by averaging Π₁(t)/Π_wg(t)
//! over a window after the Rabi transients have decayed and before the
//! pulse has passed.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::dynamics::{self, AnalyticSolutionParams, IntegrateOpts};
use crate::error::{Error, Result};
use crate::flux;
use crate::model::{gaussian_wavepacket, ModeGrid, PhysicalParams, Wavepacket};

/// Parameter selected by a sweep axis. The `_12` variants drive signal and
/// idler together (degenerate configuration); the normalized variants place
/// the axis in units of the closed-form optimum computed from the other
/// parameters at each point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepParam {
    Kappa,
    Kappa1,
    Kappa2,
    Kappa12,
    Gamma1,
    Gamma2,
    Gamma12,
    MuD,
    G,
    Delta12,
    GOverGMax,
    KappaOverKappaMax,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Kappa => "kappa",
            SweepParam::Kappa1 => "kappa_1",
            SweepParam::Kappa2 => "kappa_2",
            SweepParam::Kappa12 => "kappa_12",
            SweepParam::Gamma1 => "gamma_1",
            SweepParam::Gamma2 => "gamma_2",
            SweepParam::Gamma12 => "gamma_12",
            SweepParam::MuD => "mu_d",
            SweepParam::G => "g",
            SweepParam::Delta12 => "delta_12",
            SweepParam::GOverGMax => "g_over_g_max",
            SweepParam::KappaOverKappaMax => "kappa_over_kappa_max",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "kappa" => SweepParam::Kappa,
            "kappa_1" => SweepParam::Kappa1,
            "kappa_2" => SweepParam::Kappa2,
            "kappa_12" => SweepParam::Kappa12,
            "gamma_1" => SweepParam::Gamma1,
            "gamma_2" => SweepParam::Gamma2,
            "gamma_12" => SweepParam::Gamma12,
            "mu_d" => SweepParam::MuD,
            "g" => SweepParam::G,
            "delta_12" => SweepParam::Delta12,
            "g_over_g_max" => SweepParam::GOverGMax,
            "kappa_over_kappa_max" => SweepParam::KappaOverKappaMax,
            other => {
                return Err(Error::Validation(format!(
                    "unknown sweep parameter '{other}'"
                )))
            }
        })
    }

    fn is_normalized(&self) -> bool {
        matches!(self, SweepParam::GOverGMax | SweepParam::KappaOverKappaMax)
    }

    fn allows_negative(&self) -> bool {
        matches!(self, SweepParam::Delta12)
    }
}

/// Apply a parameter value to a copy of the base parameters. Normalized
/// parameters are resolved against the optimum computed from the parameters
/// as they stand when applied.
pub fn apply_param(base: &PhysicalParams, param: SweepParam, value: f64) -> Result<PhysicalParams> {
    if !value.is_finite() || (!param.allows_negative() && value < 0.0) {
        return Err(Error::Validation(format!(
            "invalid value {value} for sweep parameter {}",
            param.name()
        )));
    }
    let mut p = base.clone();
    match param {
        SweepParam::Kappa => p.kappa = value,
        SweepParam::Kappa1 => p.kappa_1 = value,
        SweepParam::Kappa2 => p.kappa_2 = value,
        SweepParam::Kappa12 => {
            p.kappa_1 = value;
            p.kappa_2 = value;
        }
        SweepParam::Gamma1 => p.gamma_1 = value,
        SweepParam::Gamma2 => p.gamma_2 = value,
        SweepParam::Gamma12 => {
            p.gamma_1 = value;
            p.gamma_2 = value;
        }
        SweepParam::MuD => p.mu_d = value,
        SweepParam::G => p.g = value,
        SweepParam::Delta12 => p.delta_12 = value,
        SweepParam::GOverGMax => p.g = value * flux::optimal_g(&p)?,
        SweepParam::KappaOverKappaMax => p.kappa = value * flux::optimal_kappa(&p)?,
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxisScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Serialize)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: AxisScale,
}

impl Axis {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Validation(format!(
                "axis {} needs at least 2 points, got {}",
                self.param.name(),
                self.points
            )));
        }
        if !(self.min < self.max) {
            return Err(Error::Validation(format!(
                "axis {} needs min < max, got [{}, {}]",
                self.param.name(),
                self.min,
                self.max
            )));
        }
        if matches!(self.scale, AxisScale::Log) && !(self.min > 0.0) {
            return Err(Error::Validation(format!(
                "log-scale axis {} needs min > 0",
                self.param.name()
            )));
        }
        if !self.param.allows_negative() && self.min < 0.0 {
            return Err(Error::Validation(format!(
                "axis {} range must be non-negative",
                self.param.name()
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        match self.scale {
            AxisScale::Linear => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
            AxisScale::Log => {
                let (la, lb) = (self.min.ln(), self.max.ln());
                (0..n)
                    .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
        }
    }
}

/// Settings for the amplitude-integration evaluation mode.
#[derive(Debug, Clone)]
pub struct OdeEvalConfig {
    pub grid: ModeGrid,
    pub packet: Wavepacket,
    pub rel_tol: f64,
}

#[derive(Debug, Clone)]
pub enum EvalMode {
    ClosedForm,
    OdeQuasiSteady(OdeEvalConfig),
}

impl EvalMode {
    pub fn name(&self) -> &'static str {
        match self {
            EvalMode::ClosedForm => "closed-form",
            EvalMode::OdeQuasiSteady(_) => "ode-quasi-steady",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: PhysicalParams,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub mode: EvalMode,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub axis1_values: Vec<f64>,
    pub axis2_values: Option<Vec<f64>>,
    /// Flux ratios Π₁/Π_wg, row-major over (axis1, axis2).
    pub ratios: Vec<f64>,
    /// ODE mode: relative spread of the windowed ratio per point.
    pub qualities: Option<Vec<f64>>,
    pub optimum_coords: Vec<f64>,
    pub optimum_value: f64,
    pub refinement: &'static str,
    pub warnings: Vec<String>,
}

/// Quasi-steady ratio extracted from an amplitude integration.
#[derive(Debug, Clone)]
pub struct QuasiSteady {
    pub ratio_1: f64,
    pub ratio_2: f64,
    /// Relative spread of the windowed ratio samples (fit quality).
    pub quality: f64,
    pub warning: Option<String>,
}

/// Integrate the amplitude equations for `params` and average the emitted
/// signal flux over the waveguide flux across the quasi-steady window
/// [settle, window_end], where settle = 20 / (slowest decay rate) and the
/// window ends before the pulse has passed.
///
/// Emission counts the one-photon remainder states. In the degenerate
/// symmetric configuration (κ₁ = κ₂, γ₁ = γ₂) this reproduces the
/// closed-form [`flux::steady_flux_ratio`]; with strongly asymmetric
/// signal/idler decay the closed form's κ₁/κ₂ branching is an
/// approximation and the two can drift apart by up to (1 + μ₂/μ₁)/2.
pub fn quasi_steady_ratio(params: &PhysicalParams, cfg: &OdeEvalConfig) -> Result<QuasiSteady> {
    params.validate()?;
    let asp = AnalyticSolutionParams::from_params(params);
    let (r_a, r_b) = asp.pole_decay_rates();
    let mut slow = f64::INFINITY;
    for rate in [r_a, r_b, params.mu_1(), params.mu_2()] {
        if rate > 0.0 {
            slow = slow.min(rate);
        }
    }
    if !slow.is_finite() {
        return Err(Error::Validation(
            "no quasi-steady regime: every decay rate is zero".into(),
        ));
    }
    let settle = 20.0 / slow;
    let pulse_end = 1.5 / cfg.packet.bandwidth;
    let mut warning = None;
    let window_end = if settle < 0.75 * pulse_end {
        pulse_end.min(4.0 * settle).max(1.7 * settle)
    } else {
        warning = Some(format!(
            "insufficient pulse length: transients settle at {settle:.3e} s but the pulse ends near {pulse_end:.3e} s"
        ));
        1.7 * settle
    };

    let fastest = [
        params.kappa_sigma(),
        params.g,
        params.pair_decay(),
        cfg.grid.max_detuning(),
        params.delta_12.abs(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    let dt_hint = 1.0 / (25.0 * fastest.max(1.0 / window_end));
    let opts = IntegrateOpts {
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.rel_tol * 1e-3,
        max_rows: 2000,
        ..IntegrateOpts::default()
    };
    let series = dynamics::pair_population_series(
        params,
        &cfg.grid,
        &cfg.packet,
        window_end,
        dt_hint,
        &opts,
    )?;

    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for (i, &t) in series.times.iter().enumerate() {
        if t < settle {
            continue;
        }
        let pi_wg = flux::waveguide_flux(&cfg.grid, &cfg.packet, t);
        if pi_wg <= 0.0 {
            continue;
        }
        let (pi_1, pi_2) = flux::emitted_flux(
            series.c12_sq[i],
            series.p_signal_only[i],
            series.p_idler_only[i],
            params.kappa_1,
            params.kappa_2,
        );
        r1.push(pi_1 / pi_wg);
        r2.push(pi_2 / pi_wg);
    }
    if r1.len() < 4 {
        return Err(Error::Accuracy(
            "quasi-steady window contains too few samples".into(),
        ));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let m1 = mean(&r1);
    let m2 = mean(&r2);
    let var = r1.iter().map(|r| (r - m1) * (r - m1)).sum::<f64>() / r1.len() as f64;
    let quality = if m1 > 0.0 { var.sqrt() / m1 } else { 0.0 };
    Ok(QuasiSteady {
        ratio_1: m1,
        ratio_2: m2,
        quality,
        warning,
    })
}

/// Build a mode grid and Gaussian packet adequate for quasi-steady
/// extraction: the retained band spans `span_factor` times the largest
/// dynamical scale so the waveguide acts as a Markovian reservoir, and the
/// mode spacing keeps the recurrence time beyond the simulation window.
pub fn markov_grid_packet(
    params: &PhysicalParams,
    delta_omega: f64,
    span_factor: f64,
    modes_per_bandwidth: f64,
) -> Result<(ModeGrid, Wavepacket)> {
    if !(delta_omega > 0.0) || !(span_factor >= 4.0) {
        return Err(Error::Validation(
            "markov grid needs delta_omega > 0 and span_factor >= 4".into(),
        ));
    }
    let scale = [
        params.kappa_sigma(),
        params.g,
        params.pair_decay(),
        params.delta_12.abs(),
        delta_omega,
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    let span = span_factor * scale;
    // Window length the quasi-steady extraction may use, with headroom.
    let asp = AnalyticSolutionParams::from_params(params);
    let (ra, rb) = asp.pole_decay_rates();
    let mut slow = f64::INFINITY;
    for rate in [ra, rb, params.mu_1(), params.mu_2()] {
        if rate > 0.0 {
            slow = slow.min(rate);
        }
    }
    let t_sim = if slow.is_finite() {
        (80.0 / slow).min(2.0 / delta_omega) + 20.0 / slow
    } else {
        2.0 / delta_omega
    };
    let mut spacing = TAU / (1.3 * t_sim);
    spacing = spacing.min(scale / 20.0);
    if modes_per_bandwidth > 0.0 {
        spacing = spacing.min(delta_omega / modes_per_bandwidth);
    }
    let mut n = (span / spacing).ceil() as usize;
    if n % 2 == 0 {
        n += 1;
    }
    if n > 200_000 {
        return Err(Error::Resource(format!(
            "markov grid would need {n} modes; reduce span_factor or modes_per_bandwidth"
        )));
    }
    let v_g = 7.5e7;
    let length = TAU * v_g / spacing;
    let grid = ModeGrid::with_mode_count(length, v_g, 2.0, n)?;
    let packet = gaussian_wavepacket(&grid, delta_omega)?;
    Ok((grid, packet))
}

fn eval_ratio(params: &PhysicalParams, mode: &EvalMode) -> Result<(f64, f64)> {
    match mode {
        EvalMode::ClosedForm => Ok((flux::steady_flux_ratio(params).0, 0.0)),
        EvalMode::OdeQuasiSteady(cfg) => {
            let qs = quasi_steady_ratio(params, cfg)?;
            Ok((qs.ratio_1, qs.quality))
        }
    }
}

fn golden_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    log: bool,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = if log { (lo.ln(), hi.ln()) } else { (lo, hi) };
    let x = |v: f64| if log { v.exp() } else { v };
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x(x1))?;
    let mut f2 = f(x(x2))?;
    for _ in 0..40 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x(x1))?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x(x2))?;
        }
    }
    if f1 > f2 {
        Ok((x(x1), f1))
    } else {
        Ok((x(x2), f2))
    }
}

/// Evaluate the flux ratio over the grid, locate the best point, and refine
/// it by golden section (1-D) or coordinate-descent golden section (2-D) to
/// relative tolerance 1e-6. The refined optimum never falls below the best
/// grid value.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.base.validate()?;
    spec.axis1.validate()?;
    if let Some(axis2) = &spec.axis2 {
        axis2.validate()?;
    }
    let v1 = spec.axis1.values();
    let v2 = spec.axis2.as_ref().map(|a| a.values());
    let n2 = v2.as_ref().map_or(1, |v| v.len());
    let n_total = v1.len() * n2;

    let at = |c1: f64, c2: Option<f64>| -> Result<PhysicalParams> {
        // Plain parameters first so normalized axes see the final landscape.
        let mut pending: Vec<(SweepParam, f64)> = vec![(spec.axis1.param, c1)];
        if let (Some(axis2), Some(c2)) = (&spec.axis2, c2) {
            pending.push((axis2.param, c2));
        }
        pending.sort_by_key(|(p, _)| p.is_normalized());
        let mut params = spec.base.clone();
        for (p, v) in pending {
            params = apply_param(&params, p, v)?;
        }
        Ok(params)
    };

    let evaluations: Vec<Result<(f64, f64)>> = (0..n_total)
        .into_par_iter()
        .map(|idx| {
            let i1 = idx / n2;
            let i2 = idx % n2;
            let params = at(v1[i1], v2.as_ref().map(|v| v[i2]))?;
            eval_ratio(&params, &spec.mode)
        })
        .collect();

    let mut ratios = Vec::with_capacity(n_total);
    let mut qualities = Vec::with_capacity(n_total);
    for e in evaluations {
        let (r, q) = e?;
        ratios.push(r);
        qualities.push(q);
    }

    let best_idx = ratios
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty grid");
    let (bi1, bi2) = (best_idx / n2, best_idx % n2);
    let mut best_coords = vec![v1[bi1]];
    if let Some(v2) = &v2 {
        best_coords.push(v2[bi2]);
    }
    let mut best_value = ratios[best_idx];

    // Refinement bracket: the neighbors of the best grid point.
    let bracket = |values: &[f64], i: usize| -> (f64, f64) {
        let lo = if i > 0 { values[i - 1] } else { values[i] };
        let hi = if i + 1 < values.len() {
            values[i + 1]
        } else {
            values[i]
        };
        (lo, hi)
    };
    let refinement;
    let mut warnings = Vec::new();
    match &spec.axis2 {
        None => {
            refinement = "golden-section";
            let (lo, hi) = bracket(&v1, bi1);
            if lo < hi {
                let log = matches!(spec.axis1.scale, AxisScale::Log);
                let (x, val) = golden_max(
                    |c| Ok(eval_ratio(&at(c, None)?, &spec.mode)?.0),
                    lo,
                    hi,
                    log,
                )?;
                if val > best_value {
                    best_value = val;
                    best_coords = vec![x];
                }
            }
        }
        Some(axis2) => {
            refinement = "coordinate-descent";
            let (lo1, hi1) = bracket(&v1, bi1);
            let (lo2, hi2) = bracket(v2.as_ref().expect("axis2 values"), bi2);
            let log1 = matches!(spec.axis1.scale, AxisScale::Log);
            let log2 = matches!(axis2.scale, AxisScale::Log);
            let (mut c1, mut c2) = (best_coords[0], best_coords[1]);
            for _ in 0..30 {
                let prev = (c1, c2);
                if lo1 < hi1 {
                    let (x, _) = golden_max(
                        |c| Ok(eval_ratio(&at(c, Some(c2))?, &spec.mode)?.0),
                        lo1,
                        hi1,
                        log1,
                    )?;
                    c1 = x;
                }
                if lo2 < hi2 {
                    let (x, _) = golden_max(
                        |c| Ok(eval_ratio(&at(c1, Some(c))?, &spec.mode)?.0),
                        lo2,
                        hi2,
                        log2,
                    )?;
                    c2 = x;
                }
                let moved = ((c1 - prev.0) / prev.0.abs().max(1e-300)).abs()
                    + ((c2 - prev.1) / prev.1.abs().max(1e-300)).abs();
                if moved < 1e-9 {
                    break;
                }
            }
            let val = eval_ratio(&at(c1, Some(c2))?, &spec.mode)?.0;
            if val > best_value {
                best_value = val;
                best_coords = vec![c1, c2];
            }
        }
    }

    if let EvalMode::OdeQuasiSteady(cfg) = &spec.mode {
        // Surface the window-quality warning once, from the base point.
        if let Ok(qs) = quasi_steady_ratio(&spec.base, cfg) {
            if let Some(w) = qs.warning {
                warnings.push(w);
            }
        }
    }

    Ok(SweepResult {
        axis1_values: v1,
        axis2_values: v2,
        ratios,
        qualities: if matches!(spec.mode, EvalMode::OdeQuasiSteady(_)) {
            Some(qualities)
        } else {
            None
        },
        optimum_coords: best_coords,
        optimum_value: best_value,
        refinement,
        warnings,
    })
}

/// Numeric optimum of the closed-form ratio over one or two free parameters,
/// independent of the closed-form optimum expressions.
#[derive(Debug, Clone, Serialize)]
pub enum Optimum {
    Point {
        coords: Vec<f64>,
        value: f64,
    },
    /// Lossless (κ, κ₁)-type landscape: only the product κκ₁ is determined.
    Ridge {
        product: f64,
        value: f64,
    },
}

pub fn locate_optimum_numeric(
    params: &PhysicalParams,
    free_vars: &[SweepParam],
) -> Result<Optimum> {
    params.validate()?;
    if free_vars.is_empty() || free_vars.len() > 2 {
        return Err(Error::Validation(format!(
            "need 1 or 2 free variables, got {}",
            free_vars.len()
        )));
    }
    if free_vars.iter().any(|p| p.is_normalized()) {
        return Err(Error::Validation(
            "normalized parameters cannot be free variables of the numeric optimum".into(),
        ));
    }
    let scale = [
        params.kappa_sigma(),
        params.pair_decay(),
        params.g,
        params.mu_d,
    ]
    .into_iter()
    .fold(0.0f64, f64::max)
    .max(1.0);
    let (lo, hi) = (scale * 1e-8, scale * 1e8);

    if free_vars.len() == 1 {
        let var = free_vars[0];
        let (x, value) = golden_wide(
            |v| Ok(flux::steady_flux_ratio(&apply_param(params, var, v)?).0),
            lo,
            hi,
        )?;
        return Ok(Optimum::Point {
            coords: vec![x],
            value,
        });
    }

    // Lossless coupling landscape: flat ridge instead of a point.
    let lossless = params.mu_d == 0.0 && params.gamma_1 == 0.0 && params.gamma_2 == 0.0;
    let coupling_pair = free_vars.contains(&SweepParam::Kappa)
        && (free_vars.contains(&SweepParam::Kappa12) || free_vars.contains(&SweepParam::Kappa1));
    if lossless && coupling_pair {
        let product = params.g * params.g / 2.0;
        // Product invariance along the ridge.
        let mut value = f64::NAN;
        for f in [0.25, 1.0, 4.0] {
            let kappa = f * params.g.max(1.0);
            let kappa_1 = product / kappa;
            let mut p = apply_param(params, SweepParam::Kappa, kappa)?;
            p = apply_param(&p, SweepParam::Kappa12, kappa_1)?;
            let r = flux::steady_flux_ratio(&p).0;
            if value.is_nan() {
                value = r;
            } else if (r - value).abs() > 1e-9 * value.max(1e-300) {
                return Err(Error::Accuracy(format!(
                    "ridge sampling inconsistent: {r} vs {value}"
                )));
            }
        }
        return Ok(Optimum::Ridge { product, value });
    }

    let (va, vb) = (free_vars[0], free_vars[1]);
    let mut c1 = scale;
    let mut c2 = scale;
    for _ in 0..60 {
        let prev = (c1, c2);
        c1 = golden_wide(
            |v| {
                let p = apply_param(&apply_param(params, vb, c2)?, va, v)?;
                Ok(flux::steady_flux_ratio(&p).0)
            },
            lo,
            hi,
        )?
        .0;
        c2 = golden_wide(
            |v| {
                let p = apply_param(&apply_param(params, va, c1)?, vb, v)?;
                Ok(flux::steady_flux_ratio(&p).0)
            },
            lo,
            hi,
        )?
        .0;
        let moved = ((c1 - prev.0) / prev.0).abs() + ((c2 - prev.1) / prev.1).abs();
        if moved < 1e-10 {
            break;
        }
    }
    let p = apply_param(&apply_param(params, va, c1)?, vb, c2)?;
    Ok(Optimum::Point {
        coords: vec![c1, c2],
        value: flux::steady_flux_ratio(&p).0,
    })
}

fn golden_wide(f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut f = f;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1.exp())?;
    let mut f2 = f(x2.exp())?;
    for _ in 0..130 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1.exp())?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2.exp())?;
        }
    }
    let x = ((a + b) / 2.0).exp();
    let v = f(x)?;
    Ok((x, v))
}
