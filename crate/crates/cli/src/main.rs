//! Command-line driver for the ring-cavity SPDC simulator.
//!
//! Exit codes: 0 success, 1 validation/configuration error, 2 numerical
//! accuracy failure (including oracle discrepancies), 3 resource limits.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ring_spdc::error::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ring-spdc",
    version,
    about = "Single-photon SPDC in a waveguide-coupled nonlinear ring cavity: \
             amplitude dynamics, flux optima, sweeps, and a Lindblad cross-check"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON run configuration.
    #[arg(long, env = "RING_SPDC_CONFIG")]
    config: PathBuf,
    /// Output directory (overrides output.directory from the config).
    #[arg(long, env = "RING_SPDC_OUT")]
    out: Option<PathBuf>,
    /// Worker threads for sweep evaluation (default: all cores).
    #[arg(long, env = "RING_SPDC_THREADS")]
    threads: Option<usize>,
    /// Integrator relative tolerance override.
    #[arg(long, env = "RING_SPDC_TOLERANCE")]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the amplitude equations and write the trajectory + summary.
    Simulate(CommonArgs),
    /// Sweep the flux ratio over one or two parameters and locate the optimum.
    Sweep(CommonArgs),
    /// Cross-check the amplitude evolution against the Lindblad oracle.
    Verify(VerifyArgs),
    /// Estimate the nonlinear coupling from device geometry.
    Estimate(CommonArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Fault-injection fixture: scale the oracle's signal decay rate μ₁.
    #[arg(long, hide = true, default_value_t = 1.0)]
    corrupt_mu_1: f64,
}

fn run(cli: Cli) -> Result<()> {
    let (common, action): (&CommonArgs, Box<dyn FnOnce(&CommonArgs) -> Result<()>>) = match &cli
        .command
    {
        Command::Simulate(c) => (
            c,
            Box::new(|c| dispatch(c, |l, ctx| commands::cmd_simulate(l, ctx))),
        ),
        Command::Sweep(c) => (
            c,
            Box::new(|c| dispatch(c, |l, ctx| commands::cmd_sweep(l, ctx))),
        ),
        Command::Verify(v) => {
            let scale = v.corrupt_mu_1;
            (
                &v.common,
                Box::new(move |c| dispatch(c, move |l, ctx| commands::cmd_verify(l, ctx, scale))),
            )
        }
        Command::Estimate(c) => (
            c,
            Box::new(|c| dispatch(c, |l, ctx| commands::cmd_estimate(l, ctx))),
        ),
    };
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Resource(format!("cannot configure {n} threads: {e}")))?;
    }
    action(common)
}

fn dispatch(
    common: &CommonArgs,
    f: impl FnOnce(&config::LoadedConfig, &commands::Context) -> Result<()>,
) -> Result<()> {
    let loaded = config::load_config(&common.config)?;
    let ctx = commands::Context {
        out_dir: common
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from(&loaded.config.output.directory)),
        tolerance: common.tolerance,
    };
    f(&loaded, &ctx)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
