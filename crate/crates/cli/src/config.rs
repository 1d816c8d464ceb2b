//! JSON run configuration: schema, parsing with location-precise errors,
//! and conversion into the core model types.
//!
//! Every physical quantity carries its SI unit in the key name
//! (`kappa_per_s`, `length_m`, …); unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use ring_spdc::error::{Error, Result};
use ring_spdc::estimate::DeviceGeometry;
use ring_spdc::model::{
    build_mode_grid_capped, gaussian_wavepacket, ModeGrid, PhysicalParams, Wavepacket,
    DEFAULT_MODE_CAP,
};
use ring_spdc::sweep::{Axis, AxisScale, SweepParam};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub physics: PhysicsSection,
    pub grid: GridSection,
    pub pulse: PulseSection,
    #[serde(default)]
    pub device: Option<DeviceSection>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub simulate: Option<SimulateSection>,
    #[serde(default)]
    pub verify: Option<VerifySection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    pub omega_d_rad_per_s: f64,
    #[serde(default)]
    pub delta_12_rad_per_s: f64,
    pub kappa_per_s: f64,
    pub kappa_1_per_s: f64,
    pub kappa_2_per_s: f64,
    #[serde(default)]
    pub gamma_1_per_s: f64,
    #[serde(default)]
    pub gamma_2_per_s: f64,
    #[serde(default)]
    pub mu_d_per_s: f64,
    pub g_per_s: f64,
    #[serde(default)]
    pub g_phase_rad: f64,
}

impl PhysicsSection {
    pub fn to_params(&self) -> Result<PhysicalParams> {
        let p = PhysicalParams {
            omega_d: self.omega_d_rad_per_s,
            delta_12: self.delta_12_rad_per_s,
            kappa: self.kappa_per_s,
            kappa_1: self.kappa_1_per_s,
            kappa_2: self.kappa_2_per_s,
            gamma_1: self.gamma_1_per_s,
            gamma_2: self.gamma_2_per_s,
            mu_d: self.mu_d_per_s,
            g: self.g_per_s,
            g_phase: self.g_phase_rad,
        };
        p.validate()?;
        Ok(p)
    }
}

/// Per-field overrides of the physics section, used by sweeps and by the
/// verify cases.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsOverrides {
    pub omega_d_rad_per_s: Option<f64>,
    pub delta_12_rad_per_s: Option<f64>,
    pub kappa_per_s: Option<f64>,
    pub kappa_1_per_s: Option<f64>,
    pub kappa_2_per_s: Option<f64>,
    pub gamma_1_per_s: Option<f64>,
    pub gamma_2_per_s: Option<f64>,
    pub mu_d_per_s: Option<f64>,
    pub g_per_s: Option<f64>,
    pub g_phase_rad: Option<f64>,
}

impl PhysicsOverrides {
    pub fn apply(&self, base: &PhysicalParams) -> Result<PhysicalParams> {
        let p = PhysicalParams {
            omega_d: self.omega_d_rad_per_s.unwrap_or(base.omega_d),
            delta_12: self.delta_12_rad_per_s.unwrap_or(base.delta_12),
            kappa: self.kappa_per_s.unwrap_or(base.kappa),
            kappa_1: self.kappa_1_per_s.unwrap_or(base.kappa_1),
            kappa_2: self.kappa_2_per_s.unwrap_or(base.kappa_2),
            gamma_1: self.gamma_1_per_s.unwrap_or(base.gamma_1),
            gamma_2: self.gamma_2_per_s.unwrap_or(base.gamma_2),
            mu_d: self.mu_d_per_s.unwrap_or(base.mu_d),
            g: self.g_per_s.unwrap_or(base.g),
            g_phase: self.g_phase_rad.unwrap_or(base.g_phase),
        };
        p.validate()?;
        Ok(p)
    }
}

fn default_margin() -> f64 {
    8.0
}

fn default_mode_cap() -> usize {
    DEFAULT_MODE_CAP
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub length_m: f64,
    pub group_velocity_m_per_s: f64,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_mode_cap")]
    pub n_modes_cap: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub bandwidth_rad_per_s: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceSection {
    pub ring_radius_m: f64,
    pub ring_cross_section_m2: f64,
    pub chi2_m_per_v: f64,
    pub n_drive: f64,
    pub n_signal: f64,
    pub n_idler: f64,
    pub lambda_drive_m: f64,
    pub lambda_signal_m: f64,
    pub lambda_idler_m: f64,
    #[serde(default = "default_overlap")]
    pub overlap_factor: f64,
}

fn default_overlap() -> f64 {
    1.0
}

impl DeviceSection {
    pub fn to_geometry(&self) -> Result<DeviceGeometry> {
        let geom = DeviceGeometry {
            ring_radius: self.ring_radius_m,
            ring_cross_section: self.ring_cross_section_m2,
            chi2: self.chi2_m_per_v,
            n_drive: self.n_drive,
            n_signal: self.n_signal,
            n_idler: self.n_idler,
            lambda_drive: self.lambda_drive_m,
            lambda_signal: self.lambda_signal_m,
            lambda_idler: self.lambda_idler_m,
            overlap_factor: self.overlap_factor,
        };
        geom.validate()?;
        Ok(geom)
    }
}

fn default_scale() -> String {
    "linear".into()
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default = "default_scale")]
    pub scale: String,
}

impl AxisSection {
    pub fn to_axis(&self) -> Result<Axis> {
        let scale = match self.scale.as_str() {
            "linear" => AxisScale::Linear,
            "log" => AxisScale::Log,
            other => {
                return Err(Error::Validation(format!(
                    "unknown axis scale '{other}' (expected 'linear' or 'log')"
                )))
            }
        };
        let axis = Axis {
            param: SweepParam::parse(&self.parameter)?,
            min: self.min,
            max: self.max,
            points: self.points,
            scale,
        };
        axis.validate()?;
        Ok(axis)
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis1: AxisSection,
    #[serde(default)]
    pub axis2: Option<AxisSection>,
    /// "closed-form" or "ode-quasi-steady".
    pub mode: String,
    #[serde(default)]
    pub overrides: Option<PhysicsOverrides>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    #[serde(default)]
    pub t_final_s: Option<f64>,
    #[serde(default)]
    pub dt_hint_s: Option<f64>,
    /// Cap on trajectory CSV rows (output is thinned to fit).
    #[serde(default)]
    pub max_rows: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default)]
    pub t_final_s: Option<f64>,
    #[serde(default)]
    pub dt_s: Option<f64>,
    #[serde(default)]
    pub cases: Vec<VerifyCase>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyCase {
    pub name: String,
    #[serde(default)]
    pub overrides: PhysicsOverrides,
}

fn default_directory() -> String {
    ".".into()
}

fn default_prefix() -> String {
    "run".into()
}

fn default_precision() -> usize {
    17
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_directory")]
    pub directory: String,
    #[serde(default = "default_prefix")]
    pub prefix: String,
    /// Significant digits used in CSV output.
    #[serde(default = "default_precision")]
    pub precision: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            directory: default_directory(),
            prefix: default_prefix(),
            precision: default_precision(),
        }
    }
}

/// A parsed configuration plus the SHA-256 of the raw file bytes, embedded
/// in every output for provenance.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub sha256: String,
}

pub fn load_config(path: &std::path::Path) -> Result<LoadedConfig> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Validation(format!("cannot read config {}: {e}", path.display())))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let sha256 = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect::<String>();
    let mut de = serde_json::Deserializer::from_slice(&bytes);
    let config: RunConfig = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| Error::Validation(format!("config error at {}: {}", e.path(), e.inner())))?;
    if config.output.precision == 0 || config.output.precision > 17 {
        return Err(Error::Validation(format!(
            "output.precision must lie in 1..=17, got {}",
            config.output.precision
        )));
    }
    Ok(LoadedConfig { config, sha256 })
}

impl RunConfig {
    pub fn params(&self) -> Result<PhysicalParams> {
        self.physics.to_params()
    }

    pub fn mode_grid(&self) -> Result<ModeGrid> {
        build_mode_grid_capped(
            self.grid.length_m,
            self.grid.group_velocity_m_per_s,
            self.pulse.bandwidth_rad_per_s,
            self.grid.margin,
            self.grid.n_modes_cap,
        )
    }

    pub fn wavepacket(&self, grid: &ModeGrid) -> Result<Wavepacket> {
        gaussian_wavepacket(grid, self.pulse.bandwidth_rad_per_s)
    }
}
