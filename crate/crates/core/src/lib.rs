//! Simulation and optimization of single-photon spontaneous parametric
//! down-conversion (SPDC) in a waveguide-coupled nonlinear ring cavity.
//!
//! A single drive photon propagating in the waveguide couples into a ring
//! cavity mode at rate κ, decays parametrically into a signal–idler pair at
//! the nonlinear rate g, and the pair outcouples back into the waveguide at
//! rates κ₁, κ₂ while competing with absorption losses γ₁, γ₂, μ_d. The
//! crate provides
//!
//! - [`model`]: physical parameters, waveguide mode discretization, and
//!   initial single-photon wavepackets;
//! - [`dynamics`]: amplitude equations of the no-jump (zero-temperature)
//!   stochastic Schrödinger evolution, plus the closed-form pair population
//!   with its nonlinear Rabi envelope;
//! - [`flux`]: photon fluxes, flux ratios, and the nonlinear critical
//!   coupling optima in closed form;
//! - [`lindblad`]: an independent dense Lindblad master-equation oracle on
//!   the truncated few-excitation basis, with an SSE comparison report;
//! - [`estimate`]: device-geometry estimates of the nonlinear coupling g
//!   and the Ω↔κ conversion;
//! - [`sweep`]: 1-D/2-D parameter sweeps with golden-section refinement of
//!   the located optimum;
//! - [`csvio`]: deterministic CSV serialization of trajectories, sweeps,
//!   and oracle comparisons.

pub mod csvio;
pub mod dynamics;
pub mod error;
pub mod estimate;
pub mod flux;
pub mod lindblad;
pub mod model;
pub mod ode;
pub mod sweep;

pub use error::{Error, Result};
