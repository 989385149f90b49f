use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod verify;

use config::ConfigArgs;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] dmnls::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Variational experiments for the dispersion-managed NLS in two dimensions.
#[derive(Parser, Debug)]
#[command(name = "dmnls", version)]
struct Cli {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate H for a field file or a sampled Gaussian.
    Energy(commands::EnergyArgs),
    /// Ground state at the configured mass.
    Minimize(commands::MinimizeArgs),
    /// Best-constant ascent for a given exponent and time window.
    Weinstein(commands::WeinsteinArgs),
    /// Threshold mass by energy-sign bisection, checked against the formula.
    Threshold(commands::ThresholdArgs),
    /// p = 5 blow-down family H(β).
    CriticalScan(commands::CriticalArgs),
    /// Closed-form Gaussian energies for p > 5.
    SupercriticalScan(commands::SupercriticalArgs),
    /// Analytic Gaussian quantities.
    Oracle(commands::OracleArgs),
    /// Fast invariant suite; exit status 2 on any failure.
    Verify,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = cli.cfg.resolve().and_then(|cfg| {
        if cfg.threads > 0 {
            dmnls::set_threads(cfg.threads);
        }
        match cli.cmd {
            Command::Energy(a) => commands::energy(&cfg, &a),
            Command::Minimize(a) => commands::minimize(&cfg, &a),
            Command::Weinstein(a) => commands::weinstein(&cfg, &a),
            Command::Threshold(a) => commands::threshold(&cfg, &a),
            Command::CriticalScan(a) => commands::critical_scan(&cfg, &a),
            Command::SupercriticalScan(a) => commands::supercritical_scan(&cfg, &a),
            Command::Oracle(a) => commands::oracle(&cfg, &a),
            Command::Verify => verify::run(&cfg),
        }
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
