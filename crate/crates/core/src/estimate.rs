//! Device-geometry estimates of the model rates: the nonlinear coupling g
//! from a uniform-χ⁽²⁾ overlap of the three ring modes, and the conversion
//! between the per-mode waveguide coupling Ω and the rate κ.
//!
//! The estimate assumes single-photon field normalization per mode
//! (amplitude √(ħω/(2ε₀n²V))) and a scalar effective χ⁽²⁾ constant over the
//! ring volume V = 2πR·S_R, giving
//!
//! ```text
//! g = ζ · χ⁽²⁾/(n_d n₁ n₂) · √(ħ ω_d ω₁ ω₂ / (8 ε₀ V))
//! ```
//!
//! Normalization conventions (overlap factor, effective vs bulk index, mode
//! confinement) shift this by O(1) factors, so the estimate is
//! order-of-magnitude faithful rather than digit-exact.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::model::ModeGrid;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Ring-resonator geometry and material data, SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceGeometry {
    /// Ring radius R (m).
    pub ring_radius: f64,
    /// Ring cross-sectional area S_R (m²).
    pub ring_cross_section: f64,
    /// Scalar effective second-order susceptibility χ⁽²⁾ (m/V).
    pub chi2: f64,
    pub n_drive: f64,
    pub n_signal: f64,
    pub n_idler: f64,
    /// Drive wavelength (m).
    pub lambda_drive: f64,
    /// Signal wavelength (m).
    pub lambda_signal: f64,
    /// Idler wavelength (m).
    pub lambda_idler: f64,
    /// Mode-overlap / phase-matching factor ζ ∈ (0, 1].
    pub overlap_factor: f64,
}

impl DeviceGeometry {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("ring_radius", self.ring_radius),
            ("ring_cross_section", self.ring_cross_section),
            ("n_drive", self.n_drive),
            ("n_signal", self.n_signal),
            ("n_idler", self.n_idler),
            ("lambda_drive", self.lambda_drive),
            ("lambda_signal", self.lambda_signal),
            ("lambda_idler", self.lambda_idler),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!(
                    "device field {name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.chi2 >= 0.0) || !self.chi2.is_finite() {
            return Err(Error::Validation(format!(
                "chi2 must be finite and >= 0, got {}",
                self.chi2
            )));
        }
        if !(self.overlap_factor > 0.0 && self.overlap_factor <= 1.0) {
            return Err(Error::Validation(format!(
                "overlap factor must lie in (0, 1], got {}",
                self.overlap_factor
            )));
        }
        // Photon energy conservation 1/λ_d = 1/λ₁ + 1/λ₂ within 0.1%.
        let lhs = 1.0 / self.lambda_drive;
        let rhs = 1.0 / self.lambda_signal + 1.0 / self.lambda_idler;
        if ((lhs - rhs) / lhs).abs() > 1e-3 {
            return Err(Error::Validation(format!(
                "wavelengths violate energy conservation: 1/λ_d = {lhs:.6e}, 1/λ₁ + 1/λ₂ = {rhs:.6e}"
            )));
        }
        Ok(())
    }

    /// Mode volume V = 2πR·S_R (m³).
    pub fn mode_volume(&self) -> f64 {
        TAU * self.ring_radius * self.ring_cross_section
    }
}

/// Nonlinear coupling estimate with explicit fundamental constants, so the
/// same formula can be evaluated in a rescaled unit system.
pub fn estimate_g_with_constants(
    geom: &DeviceGeometry,
    hbar: f64,
    epsilon_0: f64,
    speed_of_light: f64,
) -> Result<f64> {
    geom.validate()?;
    let omega_d = TAU * speed_of_light / geom.lambda_drive;
    let omega_1 = TAU * speed_of_light / geom.lambda_signal;
    let omega_2 = TAU * speed_of_light / geom.lambda_idler;
    let volume = geom.mode_volume();
    let field_factor = (hbar * omega_d * omega_1 * omega_2 / (8.0 * epsilon_0 * volume)).sqrt();
    Ok(
        geom.overlap_factor * geom.chi2 / (geom.n_drive * geom.n_signal * geom.n_idler)
            * field_factor,
    )
}

/// Nonlinear coupling rate |g| (1/s) for the device, SI inputs.
pub fn estimate_g(geom: &DeviceGeometry) -> Result<f64> {
    estimate_g_with_constants(geom, HBAR, EPSILON_0, SPEED_OF_LIGHT)
}

/// Inverse of the flat-coupling relation: κ = |Ω|²·L/(2v_g); exact
/// round-trip with [`crate::model::omega_kd_from_kappa`].
pub fn kappa_from_omega(omega_kd: f64, grid: &ModeGrid) -> Result<f64> {
    if !(omega_kd >= 0.0) || !omega_kd.is_finite() {
        return Err(Error::Validation(format!(
            "omega_kd must be finite and >= 0, got {omega_kd}"
        )));
    }
    Ok(omega_kd * omega_kd * grid.length / (2.0 * grid.group_velocity))
}
