use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use rswave::par;
use rswave::scenario::{self, Subcommand};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Propagate,
    Spectrum,
    Vortex,
    CheckCovariance,
    CheckAction,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Propagate => Subcommand::Propagate,
            Command::Spectrum => Subcommand::Spectrum,
            Command::Vortex => Subcommand::Vortex,
            Command::CheckCovariance => Subcommand::CheckCovariance,
            Command::CheckAction => Subcommand::CheckAction,
        }
    }
}

/// Riemann-Silberstein field propagation, spectra, vortex tracing and
/// invariant checks.
///
/// Set RSWAVE_THREADS to cap the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "rswave", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Scenario config file (INI style).
    #[arg(long)]
    config: PathBuf,
    /// Directory for field dumps, CSV files and the report.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("RSWAVE_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                par::init_threads(n);
            }
            _ => {
                eprintln!("rswave: RSWAVE_THREADS must be a positive integer, got `{v}`");
                return ExitCode::from(2);
            }
        }
    }

    let sub = Subcommand::from(cli.command);
    match scenario::run_scenario(sub, &cli.config, &cli.out) {
        Ok(outcome) => {
            print!("{}", outcome.report.render());
            let failed = outcome.report.failures();
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                for c in failed {
                    eprintln!(
                        "rswave: check `{}` failed: measured {:.16e} exceeds tolerance {:.16e}",
                        c.name, c.measured, c.tolerance
                    );
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("rswave: {e}");
            ExitCode::from(2)
        }
    }
}
