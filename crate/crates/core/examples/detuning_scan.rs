//! Compare the closed-form quasi-steady flux ratio against a full
//! amplitude integration while scanning the pair-frequency mismatch
//! δ₁₂ = ω₁ + ω₂ − ω_d.
//!
//! Run with: cargo run --release -p ring-spdc --example detuning_scan

use ring_spdc::flux;
use ring_spdc::model::PhysicalParams;
use ring_spdc::sweep::{markov_grid_packet, quasi_steady_ratio, OdeEvalConfig};

fn main() {
    let kappa = 1e9f64;
    println!("delta_12/kappa   ode_ratio    closed_ratio   rel_diff");
    for delta_frac in [0.0, 0.3, 0.8, 1.5] {
        let params = PhysicalParams {
            omega_d: 2.513e15,
            delta_12: delta_frac * kappa,
            kappa,
            kappa_1: kappa,
            kappa_2: kappa,
            gamma_1: 3e8,
            gamma_2: 3e8,
            mu_d: 4e8,
            g: 1.2e9,
            g_phase: 0.7,
        };
        let (grid, packet) = markov_grid_packet(&params, kappa / 80.0, 20.0, 0.0).unwrap();
        let qs = quasi_steady_ratio(
            &params,
            &OdeEvalConfig {
                grid,
                packet,
                rel_tol: 1e-9,
            },
        )
        .unwrap();
        let closed = flux::steady_flux_ratio(&params).0;
        println!(
            "{delta_frac:14.2} {:12.6} {:14.6} {:10.3e}",
            qs.ratio_1,
            closed,
            (qs.ratio_1 - closed).abs() / closed
        );
    }
}
