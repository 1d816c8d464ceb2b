//! Independent Lindblad master-equation oracle on the truncated
//! few-excitation basis.
//!
//! Evolves the full density matrix under
//!
//! ```text
//! dρ/dt = −i[H, ρ] + Σ_j μ_j (ĉ_j ρ ĉ_j† − ½{ĉ_j†ĉ_j, ρ})
//! ```
//!
//! at zero reservoir temperature, with the drive-mode dissipation split the
//! same way the amplitude equations split it: absorption/diffraction μ_d is
//! a Lindblad jump on the drive mode, while outcoupling to the waveguide is
//! Hamiltonian (the −Σ_k Ω_k ĉ_k ĉ_d† + h.c. coupling). Signal and idler
//! carry total jump rates μ_{1,2} = γ_{1,2} + 2κ_{1,2}; the waveguide modes
//! are lossless.
//!
//! The single-excitation manifold closes onto itself plus the one-jump
//! descendants |1₁0₂⟩, |0₁1₂⟩ and the vacuum, so the basis
//! {|vac⟩, |1_k⟩, |1_d⟩, |1₁1₂⟩, |1₁0₂⟩, |0₁1₂⟩} of dimension n_modes + 5 is
//! exact. The density matrix is dense; the Hamiltonian action exploits its
//! star structure (diagonal + drive row/column) so one generator
//! application costs O(dim²) rather than O(dim³).
//!
//! Ref: Breuer & Petruccione, "The Theory of Open Quantum Systems" (2002).

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::dynamics::{self, IntegrateOpts, SseInitial};
use crate::error::{Error, Result};
use crate::model::{omega_kd_from_kappa, ModeGrid, PhysicalParams, Wavepacket};
use crate::ode::{self, OdeOptions};

/// Cap on the mode count for the dense oracle.
pub const ORACLE_MODE_CAP: usize = 512;

/// Ordered basis of the truncated few-excitation space:
/// vacuum, |1_k⟩ per mode, |1_d⟩, |1₁1₂⟩, |1₁0₂⟩, |0₁1₂⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedBasis {
    pub n_modes: usize,
}

impl TruncatedBasis {
    pub fn new(n_modes: usize) -> Self {
        TruncatedBasis { n_modes }
    }

    pub fn dimension(&self) -> usize {
        self.n_modes + 5
    }

    pub fn idx_vacuum(&self) -> usize {
        0
    }

    pub fn idx_mode(&self, k: usize) -> usize {
        1 + k
    }

    pub fn idx_drive(&self) -> usize {
        self.n_modes + 1
    }

    pub fn idx_pair(&self) -> usize {
        self.n_modes + 2
    }

    pub fn idx_signal_only(&self) -> usize {
        self.n_modes + 3
    }

    pub fn idx_idler_only(&self) -> usize {
        self.n_modes + 4
    }

    pub fn label(&self, idx: usize) -> String {
        if idx == 0 {
            "vacuum".into()
        } else if idx <= self.n_modes {
            format!("mode_{:04}", idx - 1)
        } else if idx == self.idx_drive() {
            "drive".into()
        } else if idx == self.idx_pair() {
            "pair".into()
        } else if idx == self.idx_signal_only() {
            "signal_only".into()
        } else {
            "idler_only".into()
        }
    }
}

/// Hermitian, unit-trace density matrix on the truncated basis.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub mat: Array2<C64>,
}

impl DensityMatrix {
    /// Pure state ρ = |ψ⟩⟨ψ| from a normalized vector on the basis.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "state vector norm deviates from 1 by {:.3e}",
                (norm - 1.0).abs()
            )));
        }
        let dim = psi.len();
        let mut mat = Array2::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                mat[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        Ok(DensityMatrix { mat })
    }

    /// Initial state for a wavepacket drive: the photon distributed over the
    /// waveguide modes, cavity empty.
    pub fn from_packet(basis: &TruncatedBasis, packet: &Wavepacket) -> Result<Self> {
        if packet.amplitudes.len() != basis.n_modes {
            return Err(Error::Validation(format!(
                "wavepacket has {} amplitudes for a {}-mode basis",
                packet.amplitudes.len(),
                basis.n_modes
            )));
        }
        let mut psi = vec![C64::new(0.0, 0.0); basis.dimension()];
        for (k, a) in packet.amplitudes.iter().enumerate() {
            psi[basis.idx_mode(k)] = *a;
        }
        Self::pure(&psi)
    }

    pub fn dimension(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dimension()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Tr ρ² = Σ|ρ_ij|², real for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn population(&self, idx: usize) -> f64 {
        self.mat[(idx, idx)].re
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dimension();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Validity check: trace 1 within 1e-9, Hermitian to 1e-12, positive
    /// semidefinite within −1e-9 on the spectrum.
    pub fn validate(&self) -> Result<()> {
        if (self.trace() - 1.0).abs() > 1e-9 {
            return Err(Error::Accuracy(format!(
                "density matrix trace deviates from 1 by {:.3e}",
                (self.trace() - 1.0).abs()
            )));
        }
        if self.hermiticity_error() > 1e-12 {
            return Err(Error::Accuracy(format!(
                "density matrix Hermiticity violated by {:.3e}",
                self.hermiticity_error()
            )));
        }
        if !is_positive_semidefinite(&self.mat, 1e-9) {
            return Err(Error::Accuracy(
                "density matrix has an eigenvalue below -1e-9".into(),
            ));
        }
        Ok(())
    }
}

/// PSD check via Cholesky of A + tol·I: succeeds iff every eigenvalue of A
/// is ≥ −tol (up to rounding), without dragging in an eigensolver.
pub fn is_positive_semidefinite(a: &Array2<C64>, tol: f64) -> bool {
    let n = a.nrows();
    let mut l = a.clone();
    for i in 0..n {
        l[(i, i)] += tol;
    }
    for j in 0..n {
        let mut d = l[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d < -tol {
            return false;
        }
        let d_sqrt = d.max(0.0).sqrt();
        l[(j, j)] = C64::new(d_sqrt, 0.0);
        for i in (j + 1)..n {
            let mut v = l[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            if d_sqrt > 0.0 {
                l[(i, j)] = v / d_sqrt;
            } else if v.norm() > (tol * 1e3).max(1e-12) {
                // Zero pivot with nonzero column: not PSD.
                return false;
            } else {
                l[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    true
}

/// Linear generator of the master equation on the truncated basis.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    pub basis: TruncatedBasis,
    /// Diagonal of H/ħ (detunings) in the drive rotating frame.
    diag: Vec<f64>,
    /// Drive↔mode coupling magnitudes Ω_k (H carries −Ω_k on the star).
    omega: Vec<f64>,
    /// Nonlinear drive↔pair coupling (H carries −g).
    g: C64,
    /// Jump channels (from-state, to-state, rate μ).
    pub jumps: Vec<(usize, usize, f64)>,
    /// Per-basis-state total outgoing jump rate.
    decay: Vec<f64>,
}

/// Assemble the generator −i[H,·] + Σ_j μ_j(ĉ_j·ĉ_j† − ½{ĉ_j†ĉ_j,·}) for the
/// given physical parameters and mode grid.
pub fn build_superoperator(params: &PhysicalParams, grid: &ModeGrid) -> Result<LindbladGenerator> {
    params.validate()?;
    let n = grid.n_modes();
    if n > ORACLE_MODE_CAP {
        return Err(Error::Resource(format!(
            "dense oracle capped at {ORACLE_MODE_CAP} modes, got {n}"
        )));
    }
    let basis = TruncatedBasis::new(n);
    let dim = basis.dimension();
    let omega_flat = omega_kd_from_kappa(grid, params.kappa)?;

    // Frame choice: drive manifold at ω_d, signal/idler split so the
    // nonlinear coupling is static; detunings land on the diagonal.
    let mut diag = vec![0.0; dim];
    for k in 0..n {
        diag[basis.idx_mode(k)] = grid.detunings[k];
    }
    diag[basis.idx_pair()] = params.delta_12;
    diag[basis.idx_signal_only()] = params.delta_12 / 2.0;
    diag[basis.idx_idler_only()] = params.delta_12 / 2.0;

    let mu_1 = params.mu_1();
    let mu_2 = params.mu_2();
    let mut jumps = Vec::new();
    if params.mu_d > 0.0 {
        jumps.push((basis.idx_drive(), basis.idx_vacuum(), params.mu_d));
    }
    if mu_1 > 0.0 {
        jumps.push((basis.idx_pair(), basis.idx_idler_only(), mu_1));
        jumps.push((basis.idx_signal_only(), basis.idx_vacuum(), mu_1));
    }
    if mu_2 > 0.0 {
        jumps.push((basis.idx_pair(), basis.idx_signal_only(), mu_2));
        jumps.push((basis.idx_idler_only(), basis.idx_vacuum(), mu_2));
    }
    let mut decay = vec![0.0; dim];
    for &(from, _, rate) in &jumps {
        decay[from] += rate;
    }
    Ok(LindbladGenerator {
        basis,
        diag,
        omega: vec![omega_flat; n],
        g: params.g_complex(),
        jumps,
        decay,
    })
}

impl LindbladGenerator {
    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    /// Dense Hamiltonian over ħ, for inspection and structure tests.
    pub fn hamiltonian(&self) -> Array2<C64> {
        let dim = self.dimension();
        let b = &self.basis;
        let mut h = Array2::<C64>::zeros((dim, dim));
        for i in 0..dim {
            h[(i, i)] = C64::new(self.diag[i], 0.0);
        }
        for k in 0..b.n_modes {
            h[(b.idx_drive(), b.idx_mode(k))] = C64::new(-self.omega[k], 0.0);
            h[(b.idx_mode(k), b.idx_drive())] = C64::new(-self.omega[k], 0.0);
        }
        h[(b.idx_pair(), b.idx_drive())] = -self.g;
        h[(b.idx_drive(), b.idx_pair())] = -self.g.conj();
        h
    }

    /// Apply the generator to a row-major flattened density matrix.
    pub fn apply_flat(&self, rho: &[C64], drho: &mut [C64]) {
        let dim = self.dimension();
        let b = &self.basis;
        let n = b.n_modes;
        let d = b.idx_drive();
        let pair = b.idx_pair();
        let i_unit = C64::new(0.0, 1.0);

        // Diagonal Hamiltonian part and the jump anticommutator.
        for r in 0..dim {
            let f = C64::new(-0.5 * self.decay[r], -(self.diag[r]));
            for c in 0..dim {
                let scale = f + C64::new(-0.5 * self.decay[c], self.diag[c]);
                drho[r * dim + c] = scale * rho[r * dim + c];
            }
        }

        // Star couplings of H: row/column `drive` against modes and pair.
        // −i(Hρ): row d gains +i(Σ_k Ω_k ρ[k,:] + g* ρ[pair,:]);
        //         each row k gains +i Ω_k ρ[d,:]; row pair gains +i g ρ[d,:].
        for c in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += self.omega[k] * rho[b.idx_mode(k) * dim + c];
            }
            acc += self.g.conj() * rho[pair * dim + c];
            drho[d * dim + c] += i_unit * acc;
        }
        for k in 0..n {
            let ok = self.omega[k];
            if ok != 0.0 {
                let row_k = b.idx_mode(k) * dim;
                for c in 0..dim {
                    drho[row_k + c] += i_unit * ok * rho[d * dim + c];
                }
            }
        }
        if self.g.norm_sqr() != 0.0 {
            for c in 0..dim {
                drho[pair * dim + c] += i_unit * self.g * rho[d * dim + c];
            }
        }
        // +i(ρH): column d gains −i(Σ_k Ω_k ρ[:,k] + g ρ[:,pair]);
        //         each column k gains −i Ω_k ρ[:,d]; column pair −i g* ρ[:,d].
        for r in 0..dim {
            let row = r * dim;
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += self.omega[k] * rho[row + b.idx_mode(k)];
            }
            acc += self.g * rho[row + pair];
            drho[row + d] -= i_unit * acc;
            let rho_rd = rho[row + d];
            for k in 0..n {
                drho[row + b.idx_mode(k)] -= i_unit * self.omega[k] * rho_rd;
            }
            drho[row + pair] -= i_unit * self.g.conj() * rho_rd;
        }

        // Jump feeds onto the diagonal.
        for &(from, to, rate) in &self.jumps {
            drho[to * dim + to] += rate * rho[from * dim + from];
        }
    }

    /// Fastest angular scale of the generator, used to bound step sizes.
    pub fn fastest_scale(&self) -> f64 {
        let n = self.basis.n_modes as f64;
        let omega_max = self.omega.iter().fold(0.0f64, |m, &o| m.max(o));
        let diag_max = self.diag.iter().fold(0.0f64, |m, &d| m.max(d.abs()));
        let decay_max = self.decay.iter().fold(0.0f64, |m, &d| m.max(d));
        [diag_max, decay_max, self.g.norm(), omega_max * n.sqrt()]
            .into_iter()
            .fold(0.0f64, f64::max)
    }
}

/// Density-matrix time series.
#[derive(Debug, Clone)]
pub struct DensityEvolution {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

/// Evolve ρ with the same embedded Runge–Kutta scheme the amplitude
/// equations use; Hermiticity is restored after every accepted step and the
/// trace is monitored (drift beyond 1e-6 is an accuracy error).
pub fn evolve_density(
    rho0: &DensityMatrix,
    generator: &LindbladGenerator,
    t_final: f64,
    dt: f64,
) -> Result<DensityEvolution> {
    if !(t_final > 0.0) || !(dt > 0.0) {
        return Err(Error::Validation(format!(
            "t_final and dt must be > 0, got {t_final}, {dt}"
        )));
    }
    let fastest = generator.fastest_scale();
    if fastest > 0.0 && dt > 1.0 / (20.0 * fastest) {
        return Err(Error::Validation(format!(
            "dt {dt:.3e} s does not resolve the fastest rate {fastest:.3e} 1/s (need <= 1/(20·rate))"
        )));
    }
    evolve_density_sampled(
        rho0,
        generator,
        &ode::sample_grid(0.0, t_final, dt, 512),
        &OdeOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            ..OdeOptions::default()
        },
    )
}

/// [`evolve_density`] with explicit sample times and integrator options.
pub fn evolve_density_sampled(
    rho0: &DensityMatrix,
    generator: &LindbladGenerator,
    sample_times: &[f64],
    opts: &OdeOptions,
) -> Result<DensityEvolution> {
    let dim = generator.dimension();
    if rho0.dimension() != dim {
        return Err(Error::Validation(format!(
            "initial density matrix dimension {} does not match generator dimension {}",
            rho0.dimension(),
            dim
        )));
    }
    let y0: Vec<C64> = rho0.mat.iter().copied().collect();
    let mut evo = DensityEvolution {
        times: sample_times.to_vec(),
        states: Vec::with_capacity(sample_times.len()),
    };
    let mut trace_err: Option<f64> = None;
    let mut hermitize = |y: &mut [C64]| {
        for i in 0..dim {
            for j in (i + 1)..dim {
                let a = y[i * dim + j];
                let b = y[j * dim + i];
                let avg = 0.5 * (a + b.conj());
                y[i * dim + j] = avg;
                y[j * dim + i] = avg.conj();
            }
            y[i * dim + i] = C64::new(y[i * dim + i].re, 0.0);
        }
    };
    let fastest = generator.fastest_scale();
    let ode_opts = OdeOptions {
        max_step: if fastest > 0.0 {
            Some(std::f64::consts::TAU / fastest / 6.0)
        } else {
            None
        },
        ..opts.clone()
    };
    ode::integrate(
        |_t, y, dy| generator.apply_flat(y, dy),
        &y0,
        0.0,
        sample_times,
        &ode_opts,
        Some(&mut hermitize),
        |_i, _t, y| {
            let mat = Array2::from_shape_vec((dim, dim), y.to_vec()).expect("shape");
            let dm = DensityMatrix { mat };
            let drift = (dm.trace() - 1.0).abs();
            if drift > 1e-6 && trace_err.is_none() {
                trace_err = Some(drift);
            }
            evo.states.push(dm);
        },
    )?;
    if let Some(drift) = trace_err {
        return Err(Error::Accuracy(format!(
            "density matrix trace drifted by {drift:.3e} (> 1e-6)"
        )));
    }
    Ok(evo)
}

/// Options for the SSE↔Lindblad comparison.
#[derive(Debug, Clone)]
pub struct CompareOpts {
    pub rel_tol: f64,
    pub max_rows: usize,
    /// Fault-injection fixture: scales the oracle's signal jump rate μ₁ so
    /// tests can confirm a corrupted rate mapping is detected. 1.0 in
    /// normal operation.
    pub mu_1_scale: f64,
}

impl Default for CompareOpts {
    fn default() -> Self {
        CompareOpts {
            rel_tol: 1e-10,
            max_rows: 256,
            mu_1_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub time: f64,
    pub label: String,
    pub population_sse: f64,
    pub population_lindblad: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub max_abs_diff: f64,
    pub worst_label: String,
    pub worst_time: f64,
}

/// Evolve the same initial wavepacket through the amplitude equations and
/// through the master equation, and tabulate every population side by side.
///
/// At zero temperature the no-jump amplitudes reproduce the excited-manifold
/// populations exactly, and the one-jump descendants close the balance: the
/// `vacuum_manifold` row compares P_vac + P_{1₁0₂} + P_{0₁1₂} against the
/// SSE norm deficit.
pub fn compare_with_sse(
    params: &PhysicalParams,
    grid: &ModeGrid,
    packet: &Wavepacket,
    t_final: f64,
    dt: f64,
    opts: &CompareOpts,
) -> Result<ComparisonReport> {
    let sse_opts = IntegrateOpts {
        rel_tol: opts.rel_tol,
        abs_tol: opts.rel_tol * 1e-3,
        max_rows: opts.max_rows,
        ..IntegrateOpts::default()
    };
    let traj = dynamics::integrate_initial(
        params,
        grid,
        SseInitial::Packet(packet),
        t_final,
        dt,
        &sse_opts,
    )?;

    let mut oracle_params = params.clone();
    if opts.mu_1_scale != 1.0 {
        // Corrupt μ₁ = γ₁ + 2κ₁ through the absorption channel.
        let target_mu1 = params.mu_1() * opts.mu_1_scale;
        oracle_params.gamma_1 = (target_mu1 - 2.0 * params.kappa_1).max(0.0);
    }
    let generator = build_superoperator(&oracle_params, grid)?;
    let rho0 = DensityMatrix::from_packet(&generator.basis, packet)?;
    let evo = evolve_density_sampled(
        &rho0,
        &generator,
        &traj.times,
        &OdeOptions {
            rel_tol: opts.rel_tol,
            abs_tol: opts.rel_tol * 1e-3,
            ..OdeOptions::default()
        },
    )?;

    let basis = generator.basis;
    let n = basis.n_modes;
    let mut report = ComparisonReport {
        rows: Vec::new(),
        max_abs_diff: 0.0,
        worst_label: String::new(),
        worst_time: 0.0,
    };
    let push = |time: f64, label: String, sse: f64, lind: f64, report: &mut ComparisonReport| {
        let abs_diff = (sse - lind).abs();
        if abs_diff > report.max_abs_diff {
            report.max_abs_diff = abs_diff;
            report.worst_label = label.clone();
            report.worst_time = time;
        }
        report.rows.push(ComparisonRow {
            time,
            label,
            population_sse: sse,
            population_lindblad: lind,
            abs_diff,
        });
    };
    for (i, &t) in traj.times.iter().enumerate() {
        let dm = &evo.states[i];
        for k in 0..n {
            push(
                t,
                basis.label(basis.idx_mode(k)),
                traj.c_k[i][k].norm_sqr(),
                dm.population(basis.idx_mode(k)),
                &mut report,
            );
        }
        push(
            t,
            "drive".into(),
            traj.c_d[i].norm_sqr(),
            dm.population(basis.idx_drive()),
            &mut report,
        );
        push(
            t,
            "pair".into(),
            traj.c_12[i].norm_sqr(),
            dm.population(basis.idx_pair()),
            &mut report,
        );
        push(
            t,
            "signal_only".into(),
            traj.p_signal_only[i],
            dm.population(basis.idx_signal_only()),
            &mut report,
        );
        push(
            t,
            "idler_only".into(),
            traj.p_idler_only[i],
            dm.population(basis.idx_idler_only()),
            &mut report,
        );
        let vac_manifold = dm.population(basis.idx_vacuum())
            + dm.population(basis.idx_signal_only())
            + dm.population(basis.idx_idler_only());
        push(
            t,
            "vacuum_manifold".into(),
            traj.vacuum_pop[i],
            vac_manifold,
            &mut report,
        );
    }
    Ok(report)
}
