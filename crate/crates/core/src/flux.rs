//! Photon fluxes, flux ratios, and the nonlinear critical-coupling optima.
//!
//! In the quasi-steady limit (drive pulse much longer than every cavity
//! decay time) the signal and idler fluxes normalized to the incident
//! waveguide flux are
//!
//! ```text
//! Π₁,₂/Π_wg = 8 κ₁,₂ κ |g|² / |κ_Σ p₁₂ + |g|²|²
//! ```
//!
//! with κ_Σ = μ_d/2 + κ and p₁₂ = κ₁ + κ₂ + γ₁/2 + γ₂/2 + iδ₁₂. At exact
//! frequency matching (δ₁₂ = 0) the denominator is the familiar
//! [(κ + μ_d/2)(κ₁ + κ₂ + γ₁/2 + γ₂/2) + |g|²]². The maxima of this ratio
//! over the coupling parameters generalize the classical critical-coupling
//! condition κ = μ_d/2 to nonlinearly coupled quantized modes.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModeGrid, PhysicalParams, Wavepacket};

/// Instantaneous fluxes and their ratios to the incident waveguide flux.
#[derive(Debug, Clone, Serialize)]
pub struct FluxReport {
    /// Signal photon flux (photons/s).
    pub pi_1: f64,
    /// Idler photon flux (photons/s).
    pub pi_2: f64,
    /// Incident waveguide flux (photons/s).
    pub pi_wg: f64,
    pub ratio_1: f64,
    pub ratio_2: f64,
}

impl FluxReport {
    /// Quasi-steady report from the closed-form ratios at a given incident
    /// flux.
    pub fn steady(params: &PhysicalParams, pi_wg: f64) -> Result<Self> {
        if !(pi_wg >= 0.0) {
            return Err(Error::Validation(format!(
                "incident flux must be >= 0, got {pi_wg}"
            )));
        }
        let (ratio_1, ratio_2) = steady_flux_ratio(params);
        Ok(FluxReport {
            pi_1: ratio_1 * pi_wg,
            pi_2: ratio_2 * pi_wg,
            pi_wg,
            ratio_1,
            ratio_2,
        })
    }
}

/// Outcoupled signal and idler fluxes for a given pair population,
/// Π₁,₂ = 2κ₁,₂|C₁₂|².
pub fn instantaneous_flux(c12_sq: f64, kappa_1: f64, kappa_2: f64) -> Result<(f64, f64)> {
    if !(-1e-9..=1.0 + 1e-9).contains(&c12_sq) {
        return Err(Error::Validation(format!(
            "pair population must lie in [0, 1], got {c12_sq}"
        )));
    }
    let c = c12_sq.clamp(0.0, 1.0);
    Ok((2.0 * kappa_1 * c, 2.0 * kappa_2 * c))
}

/// Total emission fluxes including the one-photon remainder states: a pair
/// whose partner has already left still carries one photon waiting to
/// outcouple, so the signal channel emits at 2κ₁(|C₁₂|² + P_{1₁0₂}) and the
/// idler channel at 2κ₂(|C₁₂|² + P_{0₁1₂}).
pub fn emitted_flux(
    c12_sq: f64,
    p_signal_only: f64,
    p_idler_only: f64,
    kappa_1: f64,
    kappa_2: f64,
) -> (f64, f64) {
    (
        2.0 * kappa_1 * (c12_sq + p_signal_only),
        2.0 * kappa_2 * (c12_sq + p_idler_only),
    )
}

/// Incident waveguide flux of the drive wavepacket at time t,
/// Π_wg(t) = (v_g/L)·|Σ_k C_k(0) e^{−iδ_k t}|², evaluated through the O(n)
/// factorization of the double mode sum. Independent of the quantization
/// length for any band much wider than the mode spacing.
pub fn waveguide_flux(grid: &ModeGrid, packet: &Wavepacket, t: f64) -> f64 {
    let mut s = C64::new(0.0, 0.0);
    for (a, &d) in packet.amplitudes.iter().zip(&grid.detunings) {
        s += a * C64::from_polar(1.0, -d * t);
    }
    grid.group_velocity / grid.length * s.norm_sqr()
}

fn denominator(params: &PhysicalParams) -> f64 {
    let d = C64::new(params.kappa_sigma(), 0.0) * params.p_12() + params.g * params.g;
    d.norm_sqr()
}

/// Quasi-steady flux ratios (Π₁/Π_wg, Π₂/Π_wg). Detuning δ₁₂ ≠ 0 enters
/// through the complex pair pole p₁₂; the degenerate all-zero case returns 0.
pub fn steady_flux_ratio(params: &PhysicalParams) -> (f64, f64) {
    let den = denominator(params);
    if den == 0.0 {
        return (0.0, 0.0);
    }
    let common = 8.0 * params.kappa * params.g * params.g / den;
    (params.kappa_1 * common, params.kappa_2 * common)
}

/// Nonlinear coupling maximizing the flux ratio at fixed linear couplings:
/// g²_max = κ_Σ·|p₁₂|, which at exact matching reduces to
/// (κ + μ_d/2)(κ₁ + κ₂ + γ₁/2 + γ₂/2).
pub fn optimal_g(params: &PhysicalParams) -> Result<f64> {
    let ks = params.kappa_sigma();
    let p12 = params.p_12().norm();
    if !(ks > 0.0) || !(p12 > 0.0) {
        return Err(Error::Validation(
            "no interior optimum in g: both κ + μ_d/2 and κ₁ + κ₂ + γ₁/2 + γ₂/2 must be positive"
                .into(),
        ));
    }
    Ok((ks * p12).sqrt())
}

/// Drive coupling maximizing the flux ratio at fixed g:
/// κ_max = μ_d/2 + |g|²/(κ₁ + κ₂ + γ₁/2 + γ₂/2) at exact matching — the
/// nonlinear generalization of the critical-coupling condition κ = μ_d/2 —
/// and its detuned extension through |p₁₂|.
pub fn optimal_kappa(params: &PhysicalParams) -> Result<f64> {
    let p12 = params.p_12();
    if !(p12.norm() > 0.0) {
        return Err(Error::Validation(
            "no interior optimum in κ: κ₁ + κ₂ + γ₁/2 + γ₂/2 must be positive".into(),
        ));
    }
    let a = params.mu_d / 2.0;
    let g2 = params.g * params.g;
    // argmax of κ/|((κ+a)p₁₂ + g²)|²; reduces to a + g²/p₁₂ when δ₁₂ = 0.
    let val = (a * a + (2.0 * a * p12.re * g2 + g2 * g2) / p12.norm_sqr()).sqrt();
    Ok(val)
}

/// Joint optimum over (κ, κ₁) in the degenerate symmetric configuration
/// κ₁ = κ₂, γ₁ = γ₂, δ₁₂ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum JointOptimum {
    /// Isolated maximum at the given couplings.
    Point { kappa: f64, kappa_1: f64 },
    /// Lossless limit: the ratio depends on the couplings only through the
    /// product κκ₁, maximal along the ridge κκ₁ = |g|²/2.
    DegenerateRidge { kappa_kappa_1: f64 },
}

/// Simultaneous optimum of the flux ratio over drive and signal couplings:
///
/// κ²_max = (μ_d/(2γ₁))g² + μ_d²/4,  κ₁²_max = (γ₁/(2μ_d))g² + γ₁²/4.
///
/// With either loss rate zero there is no isolated optimum — only the
/// product κκ₁ is constrained — reported as the degenerate ridge.
pub fn optimal_joint(params: &PhysicalParams) -> Result<JointOptimum> {
    let sym = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300);
    if !sym(params.kappa_1, params.kappa_2) || !sym(params.gamma_1, params.gamma_2) {
        return Err(Error::Validation(
            "joint optimum requires the degenerate symmetric configuration κ₁ = κ₂, γ₁ = γ₂".into(),
        ));
    }
    if params.delta_12 != 0.0 {
        return Err(Error::Validation(
            "joint optimum requires exact frequency matching δ₁₂ = 0".into(),
        ));
    }
    let g2 = params.g * params.g;
    if params.mu_d == 0.0 || params.gamma_1 == 0.0 {
        return Ok(JointOptimum::DegenerateRidge {
            kappa_kappa_1: g2 / 2.0,
        });
    }
    let a = params.mu_d / 2.0; // drive absorption half-rate
    let c = params.gamma_1; // pair absorption scale 2·(γ₁/2)
    let kappa = (a * a + a / c * g2).sqrt();
    let kappa_1 = (c * c / 4.0 + c / (2.0 * a) * g2 / 2.0).sqrt();
    Ok(JointOptimum::Point { kappa, kappa_1 })
}

/// Peak flux ratio at the joint optimum as a function of the loss product
/// r = μ_d·γ₁/|g|²:  Π₁max/Π_wg = 2/(√(2+r) + √r)². Strictly decreasing,
/// equal to 1 at r = 0.
pub fn max_ratio(loss_product: f64) -> Result<f64> {
    if !(loss_product >= 0.0) {
        return Err(Error::Validation(format!(
            "loss product must be >= 0, got {loss_product}"
        )));
    }
    let s = (2.0 + loss_product).sqrt() + loss_product.sqrt();
    Ok(2.0 / (s * s))
}

/// Lossless flux ratio Π₁/Π_wg = 8κκ₁g²/(2κκ₁ + g²)², a function of the
/// product κκ₁ alone, maximal (= 1) on the ridge 2κκ₁ = g².
pub fn lossless_ratio(kappa: f64, kappa_1: f64, g: f64) -> f64 {
    let u = 2.0 * kappa * kappa_1;
    let den = u + g * g;
    if den == 0.0 {
        return 0.0;
    }
    8.0 * kappa * kappa_1 * g * g / (den * den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_mode_grid, gaussian_wavepacket, ModeGrid};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    fn params(kappa: f64, k1: f64, k2: f64, g1: f64, g2: f64, mu_d: f64, g: f64) -> PhysicalParams {
        PhysicalParams {
            omega_d: 2.5e15,
            delta_12: 0.0,
            kappa,
            kappa_1: k1,
            kappa_2: k2,
            gamma_1: g1,
            gamma_2: g2,
            mu_d,
            g,
            g_phase: 0.0,
        }
    }

    /// Golden-section maximizer on a log axis, used as the independent
    /// numeric oracle for the closed-form optima.
    fn golden_argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let (mut a, mut b) = (lo.ln(), hi.ln());
        let mut x1 = b - INV_PHI * (b - a);
        let mut x2 = a + INV_PHI * (b - a);
        let mut f1 = f(x1.exp());
        let mut f2 = f(x2.exp());
        for _ in 0..200 {
            if f1 > f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - INV_PHI * (b - a);
                f1 = f(x1.exp());
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_PHI * (b - a);
                f2 = f(x2.exp());
            }
        }
        ((a + b) / 2.0).exp()
    }

    #[test]
    fn instantaneous_flux_examples() {
        assert_eq!(instantaneous_flux(0.0, 1e9, 2e9).unwrap(), (0.0, 0.0));
        let (p1, _) = instantaneous_flux(0.3, 1e9, 2e9).unwrap();
        assert_relative_eq!(p1, 6e8, max_relative = 1e-14);
        let (a, b) = instantaneous_flux(0.4, 7e8, 7e8).unwrap();
        assert_eq!(a, b);
        assert!(instantaneous_flux(1.1, 1e9, 1e9).is_err());
        assert!(instantaneous_flux(-0.1, 1e9, 1e9).is_err());
    }

    #[test]
    fn waveguide_flux_single_mode_is_constant() {
        let grid = ModeGrid::with_mode_count(1.0, 7.5e7, 2.0, 1).unwrap();
        let packet = Wavepacket::from_amplitudes(vec![C64::new(1.0, 0.0)], 1e7).unwrap();
        let f0 = waveguide_flux(&grid, &packet, 0.0);
        assert_relative_eq!(f0, 7.5e7, max_relative = 1e-12);
        for j in 1..10 {
            assert_relative_eq!(
                waveguide_flux(&grid, &packet, j as f64 * 1e-9),
                f0,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn waveguide_flux_peaks_at_pulse_center() {
        let grid = build_mode_grid(1.0, 7.5e7, 2e9, 8.0).unwrap();
        let packet = gaussian_wavepacket(&grid, 1e9).unwrap();
        let sum: f64 = packet.amplitudes.iter().map(|a| a.re).sum();
        let expected = grid.group_velocity / grid.length * sum * sum;
        assert_relative_eq!(
            waveguide_flux(&grid, &packet, 0.0),
            expected,
            max_relative = 1e-12
        );
        assert!(waveguide_flux(&grid, &packet, 1e-9) < expected);
    }

    #[test]
    fn waveguide_flux_l_independent() {
        // Same physical bandwidth, doubled quantization length.
        let g1 = build_mode_grid(1.0, 7.5e7, 2e9, 8.0).unwrap();
        let g2 = build_mode_grid(2.0, 7.5e7, 2e9, 8.0).unwrap();
        let p1 = gaussian_wavepacket(&g1, 5e8).unwrap();
        let p2 = gaussian_wavepacket(&g2, 5e8).unwrap();
        let f1 = waveguide_flux(&g1, &p1, 0.0);
        let f2 = waveguide_flux(&g2, &p2, 0.0);
        assert_relative_eq!(f1, f2, max_relative = 1e-2);
    }

    #[test]
    fn steady_ratio_pinned_values() {
        // Lossless symmetric, g² = 2κ²: unity conversion.
        let k = 1e9;
        let p = params(k, k, k, 0.0, 0.0, 0.0, (2.0f64).sqrt() * k);
        assert_relative_eq!(steady_flux_ratio(&p).0, 1.0, max_relative = 1e-12);
        // Lossy configuration at its own optimum: peak ratio 1/4.
        let p = params(k, k, k, 2.0 * k, 2.0 * k, 2.0 * k, (8.0f64).sqrt() * k);
        assert_relative_eq!(steady_flux_ratio(&p).0, 0.25, max_relative = 1e-12);
        // Lossless with g² = κ²/2.
        let p = params(k, k, k, 0.0, 0.0, 0.0, k / (2.0f64).sqrt());
        assert_relative_eq!(steady_flux_ratio(&p).0, 0.64, max_relative = 1e-12);
        // Degenerate all-zero input.
        let p = params(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(steady_flux_ratio(&p), (0.0, 0.0));
    }

    #[test]
    fn optimal_g_examples() {
        let k = 1e9;
        let p = params(k, k, k, 0.0, 0.0, 0.0, 1.0);
        assert_relative_eq!(
            optimal_g(&p).unwrap(),
            (2.0f64).sqrt() * k,
            max_relative = 1e-12
        );
        let p = params(k, k, k, 2.0 * k, 2.0 * k, 2.0 * k, 1.0);
        assert_relative_eq!(
            optimal_g(&p).unwrap(),
            (8.0f64).sqrt() * k,
            max_relative = 1e-12
        );
        let p = params(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert!(optimal_g(&p).is_err());
    }

    #[test]
    fn optimal_g_agrees_with_numeric_argmax() {
        let base = params(7e8, 3e8, 5e8, 2e8, 1e8, 9e8, 1.0);
        let numeric = golden_argmax(
            |g| {
                let mut p = base.clone();
                p.g = g;
                steady_flux_ratio(&p).0
            },
            1e5,
            1e13,
        );
        assert_relative_eq!(numeric, optimal_g(&base).unwrap(), max_relative = 1e-3);
    }

    #[test]
    fn optimal_kappa_examples() {
        // g → 0 recovers classical critical coupling κ = μ_d/2.
        let mut p = params(1.0, 3e8, 3e8, 0.0, 0.0, 8e8, 0.0);
        assert_abs_diff_eq!(optimal_kappa(&p).unwrap(), 4e8, epsilon = 1e-12 * 4e8);
        // κ₁ = κ₂ = g, lossless: κ_max = g/2.
        p = params(1.0, 5e8, 5e8, 0.0, 0.0, 0.0, 5e8);
        assert_relative_eq!(optimal_kappa(&p).unwrap(), 2.5e8, max_relative = 1e-12);
        // Zero denominator.
        p = params(1.0, 0.0, 0.0, 0.0, 0.0, 5e8, 1e8);
        assert!(optimal_kappa(&p).is_err());
    }

    #[test]
    fn optimal_kappa_agrees_with_numeric_argmax() {
        let base = params(1.0, 4e8, 2e8, 3e8, 1e8, 1.2e9, 6e8);
        let numeric = golden_argmax(
            |k| {
                let mut p = base.clone();
                p.kappa = k;
                steady_flux_ratio(&p).0
            },
            1e4,
            1e12,
        );
        assert_relative_eq!(numeric, optimal_kappa(&base).unwrap(), max_relative = 1e-3);
    }

    #[test]
    fn joint_optimum_matched_losses() {
        // μ_d = γ₁ = g: κ_max = κ₁max = (√3/2)·g with ratio 1/(2+√3).
        let g = 4.1e8;
        let p = params(1.0, 1.0, 1.0, g, g, g, g);
        match optimal_joint(&p).unwrap() {
            JointOptimum::Point { kappa, kappa_1 } => {
                assert_relative_eq!(kappa, 3.0f64.sqrt() / 2.0 * g, max_relative = 1e-12);
                assert_relative_eq!(kappa_1, 3.0f64.sqrt() / 2.0 * g, max_relative = 1e-12);
                let mut at = p.clone();
                at.kappa = kappa;
                at.kappa_1 = kappa_1;
                at.kappa_2 = kappa_1;
                let ratio = steady_flux_ratio(&at).0;
                assert_relative_eq!(ratio, max_ratio(1.0).unwrap(), max_relative = 1e-12);
            }
            other => panic!("expected point optimum, got {other:?}"),
        }
    }

    #[test]
    fn joint_optimum_degenerates_without_losses() {
        let p = params(2e8, 3e8, 3e8, 0.0, 0.0, 0.0, 1e9);
        match optimal_joint(&p).unwrap() {
            JointOptimum::DegenerateRidge { kappa_kappa_1 } => {
                assert_relative_eq!(kappa_kappa_1, 5e17, max_relative = 1e-12);
            }
            other => panic!("expected ridge, got {other:?}"),
        }
        let p = params(2e8, 3e8, 4e8, 0.0, 0.0, 1e8, 1e9);
        assert!(optimal_joint(&p).is_err(), "asymmetric κ must be rejected");
    }

    #[test]
    fn joint_optimum_agrees_with_2d_numeric_argmax() {
        // Asymmetric losses probe the μ_d/γ₁ structure of the optimum.
        for (mu_d, gamma_1, g) in [(9e8, 3e8, 4.1e8), (2e8, 1.1e9, 7e8), (5e8, 5e8, 2e8)] {
            let base = params(1.0, 1.0, 1.0, gamma_1, gamma_1, mu_d, g);
            let eval = |kappa: f64, kappa_1: f64| {
                let mut p = base.clone();
                p.kappa = kappa;
                p.kappa_1 = kappa_1;
                p.kappa_2 = kappa_1;
                steady_flux_ratio(&p).0
            };
            // Coordinate-descent golden refinement.
            let (mut k, mut k1) = (g.max(mu_d), g.max(gamma_1));
            for _ in 0..40 {
                k = golden_argmax(|x| eval(x, k1), k / 1e4, k * 1e4);
                k1 = golden_argmax(|x| eval(k, x), k1 / 1e4, k1 * 1e4);
            }
            match optimal_joint(&base).unwrap() {
                JointOptimum::Point { kappa, kappa_1 } => {
                    assert_relative_eq!(k, kappa, max_relative = 5e-3);
                    assert_relative_eq!(k1, kappa_1, max_relative = 5e-3);
                    // Peak value consistent with the loss-product formula.
                    let r = mu_d * gamma_1 / (g * g);
                    assert_relative_eq!(
                        eval(kappa, kappa_1),
                        max_ratio(r).unwrap(),
                        max_relative = 1e-9
                    );
                }
                other => panic!("expected point optimum, got {other:?}"),
            }
        }
    }

    #[test]
    fn max_ratio_examples() {
        assert_relative_eq!(max_ratio(0.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(
            max_ratio(1.0).unwrap(),
            1.0 / (2.0 + 3.0f64.sqrt()),
            max_relative = 1e-14
        );
        let (a, b, c) = (
            max_ratio(0.0).unwrap(),
            max_ratio(1.0).unwrap(),
            max_ratio(2.0).unwrap(),
        );
        assert!(a > b && b > c);
        assert!(max_ratio(-0.5).is_err());
    }

    #[test]
    fn lossless_ratio_examples() {
        let g = 1e9;
        // 2κκ₁ = g² is the unity ridge.
        assert_relative_eq!(lossless_ratio(g, g / 2.0, g), 1.0, max_relative = 1e-14);
        // Product invariance.
        assert_relative_eq!(
            lossless_ratio(2e8, 9e8, g),
            lossless_ratio(4e8, 4.5e8, g),
            max_relative = 1e-14
        );
        // κκ₁ = g².
        assert_relative_eq!(lossless_ratio(g, g, g), 8.0 / 9.0, max_relative = 1e-14);
        assert_eq!(lossless_ratio(0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn steady_ratio_reduces_to_lossless_form() {
        for (kappa, k1, g) in [(3e8, 7e8, 5e8), (1e9, 1e8, 9e8), (2e7, 2e7, 1e8)] {
            let p = params(kappa, k1, k1, 0.0, 0.0, 0.0, g);
            assert_relative_eq!(
                steady_flux_ratio(&p).0,
                lossless_ratio(kappa, k1, g),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn flux_report_invariants() {
        let p = params(5e8, 3e8, 6e8, 1e8, 2e8, 4e8, 7e8);
        let rep = FluxReport::steady(&p, 1e10).unwrap();
        assert!(rep.pi_1 >= 0.0 && rep.pi_2 >= 0.0 && rep.pi_wg >= 0.0);
        assert_relative_eq!(
            rep.ratio_1 / rep.ratio_2,
            p.kappa_1 / p.kappa_2,
            max_relative = 1e-12
        );
        assert!(rep.ratio_1 + rep.ratio_2 <= 2.0);
    }

    proptest! {
        /// g_max is the global maximum of the ratio in g.
        #[test]
        fn optimal_g_dominates_random_g(
            kappa in 1e6f64..1e10,
            k1 in 1e6f64..1e10,
            k2 in 1e6f64..1e10,
            gam1 in 0.0f64..1e9,
            gam2 in 0.0f64..1e9,
            mu_d in 0.0f64..1e9,
            g_probe in 1e5f64..1e12,
        ) {
            let base = params(kappa, k1, k2, gam1, gam2, mu_d, 1.0);
            let g_max = optimal_g(&base).unwrap();
            let at = |g: f64| {
                let mut p = base.clone();
                p.g = g;
                steady_flux_ratio(&p).0
            };
            prop_assert!(at(g_max) + 1e-12 >= at(g_probe));
        }

        /// AM–GM bound: ratio₁ ≤ 2κ₁/(κ₁+κ₂+γ₁/2+γ₂/2).
        #[test]
        fn ratio_bounded_by_branching_fraction(
            kappa in 1e6f64..1e10,
            k1 in 1e6f64..1e10,
            k2 in 1e6f64..1e10,
            gam1 in 0.0f64..1e9,
            gam2 in 0.0f64..1e9,
            mu_d in 0.0f64..1e9,
            g in 1e5f64..1e11,
        ) {
            let p = params(kappa, k1, k2, gam1, gam2, mu_d, g);
            let (r1, r2) = steady_flux_ratio(&p);
            let bound = 2.0 * k1 / p.pair_decay();
            prop_assert!(r1 <= bound * (1.0 + 1e-12));
            prop_assert!(r1 + r2 <= 2.0 + 1e-12);
        }

        /// Absorption losses only ever reduce the ratio.
        #[test]
        fn absorption_monotonically_hurts(
            kappa in 1e7f64..1e10,
            k1 in 1e7f64..1e10,
            mu_d in 0.0f64..1e9,
            g in 1e6f64..1e10,
            gam in 1e5f64..1e9,
        ) {
            let p0 = params(kappa, k1, k1, 0.0, 0.0, mu_d, g);
            let mut p1 = p0.clone();
            p1.gamma_1 = gam;
            prop_assert!(steady_flux_ratio(&p1).0 < steady_flux_ratio(&p0).0);
        }

        /// Joint-optimum value equals the loss-product formula.
        #[test]
        fn joint_value_matches_loss_product_formula(
            mu_d in 1e6f64..1e10,
            gamma_1 in 1e6f64..1e10,
            g in 1e6f64..1e10,
        ) {
            let base = params(1.0, 1.0, 1.0, gamma_1, gamma_1, mu_d, g);
            if let JointOptimum::Point { kappa, kappa_1 } = optimal_joint(&base).unwrap() {
                let mut p = base.clone();
                p.kappa = kappa;
                p.kappa_1 = kappa_1;
                p.kappa_2 = kappa_1;
                let r = mu_d * gamma_1 / (g * g);
                let lhs = steady_flux_ratio(&p).0;
                let rhs = max_ratio(r).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1e-300));
            } else {
                prop_assert!(false, "lossy draw must have a point optimum");
            }
        }
    }
}
