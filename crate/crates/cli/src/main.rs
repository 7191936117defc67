//! Command-line front end: reproducible phase-space data files for the
//! Morse-oscillator Wigner and semiclassical distributions.

mod commands;
mod config;
mod emit;
mod verify;
mod workers;

use clap::Parser;
use std::io::Write;
use std::process::ExitCode;

use commands::Artifact;
use config::{CliError, CommonArgs, Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "morse-wigner",
    version,
    about = "Wigner and semiclassical phase-space distributions of the Morse oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Print the bound-state spectrum (n, eps_n, E_n)
    Spectrum(CommonArgs),
    /// Sample the dimensionless potential V(Q) with energy-level markers
    Potential(CommonArgs),
    /// Sample the Wigner distribution on a scaled (Q, P) lattice
    Wdf(CommonArgs),
    /// Sample the semiclassical distribution on a scaled (Q, P) lattice
    Sdf(CommonArgs),
    /// Compare WDF and SDF constant-density curves level by level
    Compare(CommonArgs),
    /// Run the numerical verification suite (exit 1 on any failure)
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated subset of checks to run (default: all)
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
}

fn write_artifact(config: &RunConfig, artifact: &Artifact) -> Result<(), CliError> {
    let done = match &config.output {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            artifact.write(config, &mut file).and_then(|_| file.flush())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            artifact.write(config, &mut lock).and_then(|_| lock.flush())
        }
    };
    match done {
        // a closed pipe (e.g. piping into `head`) is not a failure
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Spectrum(args) => {
            let config = RunConfig::resolve("spectrum", &args)?;
            write_artifact(&config, &commands::cmd_spectrum(&config)?)?;
            Ok(0)
        }
        Command::Potential(args) => {
            let config = RunConfig::resolve("potential", &args)?;
            write_artifact(&config, &commands::cmd_potential(&config)?)?;
            Ok(0)
        }
        Command::Wdf(args) => {
            let config = RunConfig::resolve("wdf", &args)?;
            write_artifact(&config, &commands::cmd_wdf(&config)?)?;
            Ok(0)
        }
        Command::Sdf(args) => {
            let config = RunConfig::resolve("sdf", &args)?;
            write_artifact(&config, &commands::cmd_sdf(&config)?)?;
            Ok(0)
        }
        Command::Compare(args) => {
            let config = RunConfig::resolve("compare", &args)?;
            write_artifact(&config, &commands::cmd_compare(&config)?)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let config = RunConfig::resolve("verify", &args.common)?;
            let (report, all_passed) = verify::run_verify(&config, &args.checks)?;
            if config.output.is_some() {
                let artifact = Artifact::Table(report);
                write_artifact(&config, &artifact)?;
            } else if config.format == Format::Json {
                // the human-readable lines already went to stdout; emit the
                // structured report only when explicitly requested
                let artifact = Artifact::Table(report);
                write_artifact(&config, &artifact)?;
            }
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e @ CliError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
