//! `bergshape`: moments, reconstruction, validation and spectra from the
//! command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use bergshape_core::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "bergshape", version, about = "Shape reconstruction from complex area moments")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Mantissa bits for every computation (at least 53).
    #[arg(long, global = true, env = "BERGSHAPE_PRECISION")]
    pub precision: Option<u32>,

    /// Worker threads for the parallel loops.
    #[arg(long, global = true, env = "BERGSHAPE_WORKERS")]
    pub workers: Option<usize>,

    /// Fail instead of warning when the precision looks too low for `n`.
    #[arg(long, global = true, env = "BERGSHAPE_STRICT_PRECISION")]
    pub strict_precision: bool,

    /// Write an SVG overlay of the reconstructed boundary.
    #[arg(long, global = true, env = "BERGSHAPE_SVG")]
    pub svg: Option<PathBuf>,

    /// Trapezoid nodes for curved boundaries.
    #[arg(long, global = true, env = "BERGSHAPE_QUAD_NODES")]
    pub quad_nodes: Option<usize>,

    /// Which Hessenberg column the scaled diagonals are read from:
    /// `zero-based` (column n) or `one-based` (column n-1).
    #[arg(long, global = true, env = "BERGSHAPE_INDEXING")]
    pub indexing: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the moment table of a domain described in JSON.
    Moments(commands::MomentsArgs),
    /// Recover the exterior map and boundary curve from a moment file.
    Reconstruct(commands::ReconstructArgs),
    /// Run the convergence checks on a reference domain.
    Validate(commands::ValidateArgs),
    /// Eigenvalues of a Hessenberg section, optionally against polynomial zeros.
    Spectra(commands::SpectraArgs),
}

/// Outcome of a subcommand that ran to completion.
pub enum Status {
    Ok,
    ValidationFailed,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::MomentsNotPositiveDefinite { .. }
        | Error::NoConvergence { .. }
        | Error::EvaluationOverflow
        | Error::ZeroArgument => 3,
        Error::PrecisionTooLow { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BERGSHAPE_LOG", "warn")).init();
    let cli = Cli::parse();

    if let Some(workers) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }

    let result = match &cli.command {
        Command::Moments(args) => commands::moments(&cli.global, args),
        Command::Reconstruct(args) => commands::reconstruct(&cli.global, args),
        Command::Validate(args) => commands::validate(&cli.global, args),
        Command::Spectra(args) => commands::spectra(&cli.global, args),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ValidationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
