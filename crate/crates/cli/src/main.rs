use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use walker_cli::commands::{cmd_construct, cmd_frenet, cmd_surface_check, cmd_verify};
use walker_cli::config::{Overrides, RunConfig, DEFAULT_OUTPUT_DIR, DEFAULT_SEED};
use walker_cli::CliError;

/// Geometry of curves and cylinders in strict Walker 3-manifolds.
#[derive(Parser)]
#[command(name = "walker", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Override the sample count (grid size per axis for surface-check).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Override the zero threshold used in summaries.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the property suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Frenet apparatus along the configured curve.
    Frenet { config: PathBuf },
    /// Flatness and totally-geodesic checks for the configured cylinder.
    SurfaceCheck { config: PathBuf },
    /// Run the constructive example and write its report.
    Construct { config: PathBuf },
    /// Run a verification suite (cross, connection, curvature, frenet,
    /// pairing, cylinder, construction, parser or all).
    Verify { suite: String },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let overrides = Overrides { samples: cli.samples, tol: cli.tol, out: cli.out.clone() };
    let load = |path: &PathBuf| RunConfig::load(path)?.apply(&overrides);
    match &cli.command {
        Command::Frenet { config } => cmd_frenet(&load(config)?),
        Command::SurfaceCheck { config } => cmd_surface_check(&load(config)?),
        Command::Construct { config } => cmd_construct(&load(config)?),
        Command::Verify { suite } => {
            let out = cli.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
            cmd_verify(suite, cli.seed, &out)
        }
    }
}

fn main() -> ExitCode {
    let code = run(Cli::parse()).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
