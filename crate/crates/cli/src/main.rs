//! `wavepath`: exact, operational, reconstructed and sampled statistics of a
//! spin-marked two-aperture interferometer.

mod commands;
mod config;
mod error;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, Options, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(name = "wavepath", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bloch vector, path and fringe statistics, phase density
    Exact(Options),
    /// Joint statistics recorded through the spin marker
    Operational(Options),
    /// Reconstructed joint with exact marginals, and its negativity
    Invert(Options),
    /// Seeded shots from the operational joint and the estimate they give
    Sample(Options),
    /// Minimum reconstructed entry over a θ × ϑ grid
    Scan(Options),
}

type Handler = fn(&RunConfig) -> Result<String, CliError>;

fn run(command: Command) -> Result<(), CliError> {
    let (run, options): (Handler, Options) = match command {
        Command::Exact(o) => (commands::exact, o),
        Command::Operational(o) => (commands::operational, o),
        Command::Invert(o) => (commands::invert, o),
        Command::Sample(o) => (commands::sample, o),
        Command::Scan(o) => (commands::scan, o),
    };
    let out = options.out.clone();
    let cfg = RunConfig::resolve(options)?;
    let text = run(&cfg)?;
    if cfg.format == Format::Csv {
        // CSV headers are fixed, so the resolved config goes to stderr
        eprintln!(
            "config: {}",
            serde_json::to_string(&report::canonical(report::to_value(&cfg))?).unwrap()
        );
    }
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
