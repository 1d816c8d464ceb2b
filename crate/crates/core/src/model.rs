//! Physical parameters, waveguide mode discretization, and initial
//! single-photon wavepackets.
//!
//! Every frequency is stored internally as a detuning from the drive
//! resonance ω_d. Absolute optical frequencies (~1e15 rad/s) never enter the
//! dynamics, which preserves precision at the rate scales (1e6–1e10 1/s)
//! the solvers actually resolve.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Default cap on the retained mode count for [`build_mode_grid`].
pub const DEFAULT_MODE_CAP: usize = 65_535;

/// Rates and frequencies of the three phase-matched cavity modes and their
/// couplings. All rates in 1/s, frequencies in rad/s.
///
/// Derived totals: κ_Σ = μ_d/2 + κ for the drive mode, and
/// μ_{1,2}/2 = γ_{1,2}/2 + κ_{1,2} for signal and idler, so the total
/// field decay rates include both cavity absorption and outcoupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Drive cavity mode angular frequency (rad/s). Reference scale only;
    /// the dynamics depend on detunings exclusively.
    pub omega_d: f64,
    /// Frequency mismatch ω₁ + ω₂ − ω_d (rad/s).
    pub delta_12: f64,
    /// Waveguide↔cavity in/outcoupling rate at the drive frequency (1/s).
    pub kappa: f64,
    /// Signal outcoupling rate (1/s).
    pub kappa_1: f64,
    /// Idler outcoupling rate (1/s).
    pub kappa_2: f64,
    /// Signal cavity absorption rate (1/s).
    pub gamma_1: f64,
    /// Idler cavity absorption rate (1/s).
    pub gamma_2: f64,
    /// Drive-mode non-outcoupling loss rate, absorption + diffraction (1/s).
    pub mu_d: f64,
    /// Nonlinear coupling magnitude |g| (1/s).
    pub g: f64,
    /// Phase of the nonlinear coupling (rad).
    pub g_phase: f64,
}

impl PhysicalParams {
    /// Symmetric starting point: all loss rates zero, unit ω_d placeholder.
    pub fn new(omega_d: f64, kappa: f64, kappa_1: f64, kappa_2: f64, g: f64) -> Result<Self> {
        let p = PhysicalParams {
            omega_d,
            delta_12: 0.0,
            kappa,
            kappa_1,
            kappa_2,
            gamma_1: 0.0,
            gamma_2: 0.0,
            mu_d: 0.0,
            g,
            g_phase: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_d > 0.0) {
            return Err(Error::Validation(format!(
                "omega_d must be > 0, got {}",
                self.omega_d
            )));
        }
        for (name, v) in [
            ("kappa", self.kappa),
            ("kappa_1", self.kappa_1),
            ("kappa_2", self.kappa_2),
            ("gamma_1", self.gamma_1),
            ("gamma_2", self.gamma_2),
            ("mu_d", self.mu_d),
            ("g", self.g),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!(
                    "rate {name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if !self.delta_12.is_finite() || !self.g_phase.is_finite() {
            return Err(Error::Validation(
                "delta_12 and g_phase must be finite".into(),
            ));
        }
        debug_assert!(self.kappa_sigma() >= self.kappa);
        Ok(())
    }

    /// Total drive-mode decay rate κ_Σ = μ_d/2 + κ.
    pub fn kappa_sigma(&self) -> f64 {
        self.mu_d / 2.0 + self.kappa
    }

    /// Total signal decay rate μ₁ = γ₁ + 2κ₁.
    pub fn mu_1(&self) -> f64 {
        self.gamma_1 + 2.0 * self.kappa_1
    }

    /// Total idler decay rate μ₂ = γ₂ + 2κ₂.
    pub fn mu_2(&self) -> f64 {
        self.gamma_2 + 2.0 * self.kappa_2
    }

    /// Combined pair decay scale (μ₁ + μ₂)/2 = κ₁ + κ₂ + γ₁/2 + γ₂/2.
    pub fn pair_decay(&self) -> f64 {
        (self.mu_1() + self.mu_2()) / 2.0
    }

    /// Complex pair pole p₁₂ = (μ₁ + μ₂)/2 + i(ω₁ + ω₂ − ω_d).
    pub fn p_12(&self) -> C64 {
        C64::new(self.pair_decay(), self.delta_12)
    }

    /// Nonlinear coupling as a complex number, |g| e^{i·g_phase}.
    pub fn g_complex(&self) -> C64 {
        C64::from_polar(self.g, self.g_phase)
    }
}

/// Discretized waveguide modes: a quantization segment of length `length`
/// carrying modes with linear dispersion ω_k = ω_d + v_g·k spaced by
/// Δδ = 2π·v_g/L, symmetric about the drive resonance.
///
/// Observables must not depend on `length`; it only sets the mode density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeGrid {
    /// Quantization segment length L (m).
    pub length: f64,
    /// Group velocity of the drive wavepacket v_g (m/s).
    pub group_velocity: f64,
    /// Margin factor the grid was built with (span ≥ margin × bandwidth).
    pub margin: f64,
    /// Detunings δ_k = ω_k − ω_d (rad/s), uniformly spaced, symmetric about 0.
    pub detunings: Vec<f64>,
}

impl ModeGrid {
    /// Grid with an explicit odd mode count, bypassing the bandwidth-driven
    /// sizing of [`build_mode_grid`].
    pub fn with_mode_count(
        length: f64,
        group_velocity: f64,
        margin: f64,
        n_modes: usize,
    ) -> Result<Self> {
        if !(length > 0.0) || !(group_velocity > 0.0) {
            return Err(Error::Validation(format!(
                "mode grid needs length > 0 and group velocity > 0, got L={length}, v_g={group_velocity}"
            )));
        }
        if n_modes == 0 || n_modes % 2 == 0 {
            return Err(Error::Validation(format!(
                "mode count must be odd and positive, got {n_modes}"
            )));
        }
        let spacing = TAU * group_velocity / length;
        let half = (n_modes / 2) as i64;
        let detunings = (-half..=half).map(|j| j as f64 * spacing).collect();
        Ok(ModeGrid {
            length,
            group_velocity,
            margin,
            detunings,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.detunings.len()
    }

    /// Mode spacing Δδ = 2π·v_g/L (rad/s).
    pub fn spacing(&self) -> f64 {
        TAU * self.group_velocity / self.length
    }

    /// Total angular-frequency span n·Δδ covered by the grid (rad/s).
    pub fn span(&self) -> f64 {
        self.n_modes() as f64 * self.spacing()
    }

    /// Largest detuning magnitude on the grid (rad/s).
    pub fn max_detuning(&self) -> f64 {
        self.detunings.last().copied().unwrap_or(0.0).abs()
    }
}

/// Build the mode grid for a given quantization length, group velocity and
/// pulse bandwidth: spacing 2π·v_g/L, smallest odd mode count whose span
/// covers `margin × bandwidth`.
pub fn build_mode_grid(
    length: f64,
    group_velocity: f64,
    bandwidth: f64,
    margin: f64,
) -> Result<ModeGrid> {
    build_mode_grid_capped(length, group_velocity, bandwidth, margin, DEFAULT_MODE_CAP)
}

/// Same as [`build_mode_grid`] with a configurable mode-count cap.
pub fn build_mode_grid_capped(
    length: f64,
    group_velocity: f64,
    bandwidth: f64,
    margin: f64,
    cap: usize,
) -> Result<ModeGrid> {
    if !(length > 0.0) || !(group_velocity > 0.0) || !(bandwidth > 0.0) {
        return Err(Error::Validation(format!(
            "mode grid needs positive length, group velocity and bandwidth, got L={length}, v_g={group_velocity}, bandwidth={bandwidth}"
        )));
    }
    if !(margin >= 2.0) {
        return Err(Error::Validation(format!(
            "margin factor must be >= 2, got {margin}"
        )));
    }
    let spacing = TAU * group_velocity / length;
    let mut n = (margin * bandwidth / spacing).ceil() as usize;
    n = n.max(1);
    if n % 2 == 0 {
        n += 1;
    }
    if n > cap {
        let suggested = length * cap as f64 / n as f64;
        return Err(Error::Resource(format!(
            "mode count {n} exceeds cap {cap}; reduce the quantization length to ~{suggested:.3e} m or below"
        )));
    }
    ModeGrid::with_mode_count(length, group_velocity, margin, n)
}

/// A single-photon spectral wavepacket over a mode grid: complex amplitudes
/// C_k(0), one per mode, with Σ|C_k|² = 1.
///
/// All-real positive-peaked amplitudes describe a pulse localized at the
/// coupling point z = 0 at t = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wavepacket {
    /// Spectral amplitudes C_k(0), one per grid mode.
    pub amplitudes: Vec<C64>,
    /// Spectral width Δω characterizing the pulse (rad/s).
    pub bandwidth: f64,
}

impl Wavepacket {
    /// Accept arbitrary amplitudes, requiring unit norm within 1e-12.
    pub fn from_amplitudes(amplitudes: Vec<C64>, bandwidth: f64) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "wavepacket norm deviates from 1 by {:.3e} (> 1e-12)",
                (norm - 1.0).abs()
            )));
        }
        if !(bandwidth > 0.0) {
            return Err(Error::Validation(format!(
                "wavepacket bandwidth must be > 0, got {bandwidth}"
            )));
        }
        Ok(Wavepacket {
            amplitudes,
            bandwidth,
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Gaussian spectral pulse: C_k ∝ exp(−δ_k²/(2Δω²)), real and positive,
/// renormalized to unit norm.
pub fn gaussian_wavepacket(grid: &ModeGrid, delta_omega: f64) -> Result<Wavepacket> {
    if !(delta_omega > 0.0) {
        return Err(Error::Validation(format!(
            "pulse bandwidth must be > 0, got {delta_omega}"
        )));
    }
    if delta_omega * grid.margin > grid.span() {
        return Err(Error::Validation(format!(
            "pulse bandwidth {:.3e} rad/s too large for grid span {:.3e} rad/s at margin {}",
            delta_omega,
            grid.span(),
            grid.margin
        )));
    }
    let mut amps: Vec<f64> = grid
        .detunings
        .iter()
        .map(|&d| (-d * d / (2.0 * delta_omega * delta_omega)).exp())
        .collect();
    let norm: f64 = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    Ok(Wavepacket {
        amplitudes: amps.into_iter().map(|a| C64::new(a, 0.0)).collect(),
        bandwidth: delta_omega,
    })
}

/// On-resonance waveguide↔cavity coupling magnitude per mode,
/// |Ω_kd| = √(2κ·v_g/L), applied uniformly across the retained band
/// (flat-coupling model; a per-mode profile can be supplied through
/// [`CouplingProfile`]).
pub fn omega_kd_from_kappa(grid: &ModeGrid, kappa: f64) -> Result<f64> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::Validation(format!(
            "kappa must be finite and >= 0, got {kappa}"
        )));
    }
    Ok((2.0 * kappa * grid.group_velocity / grid.length).sqrt())
}

/// Hook for the detuning dependence of the waveguide↔cavity coupling.
///
/// The quantitative results use the on-resonance magnitude for every mode
/// within the retained band (`Flat`); `PerMode` scales each mode's coupling
/// by the given factor for sensitivity studies.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingProfile {
    Flat,
    PerMode(Vec<f64>),
}

impl CouplingProfile {
    /// Per-mode coupling magnitudes for `grid` given the flat value `omega`.
    pub fn per_mode(&self, grid: &ModeGrid, omega: f64) -> Result<Vec<f64>> {
        match self {
            CouplingProfile::Flat => Ok(vec![omega; grid.n_modes()]),
            CouplingProfile::PerMode(factors) => {
                if factors.len() != grid.n_modes() {
                    return Err(Error::Validation(format!(
                        "coupling profile has {} entries for a {}-mode grid",
                        factors.len(),
                        grid.n_modes()
                    )));
                }
                Ok(factors.iter().map(|f| f * omega).collect())
            }
        }
    }
}
