//! `pseudoherm`: spectra, densities, phase diagrams and Monte Carlo checks
//! for the `phi = A B` ensemble.
//!
//! Exit codes: 0 success, 1 a comparison threshold failed, 2 invalid
//! arguments, 3 numerical or I/O failure.

mod commands;
mod settings;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pseudoherm::analytic::AnalyticError;
use pseudoherm::ensemble::EnsembleError;
use pseudoherm::linalg::LinalgError;
use pseudoherm::mech::MechError;

use settings::{CommonArgs, CompareArgs, MechArgs, PhaseArgs, Settings};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
    #[error("comparison failed")]
    Acceptance,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Acceptance => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::InvalidMetric(_) | LinalgError::SingularMetric | LinalgError::InvalidTolerance(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<AnalyticError> for CliError {
    fn from(e: AnalyticError) -> Self {
        match e {
            AnalyticError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<EnsembleError> for CliError {
    fn from(e: EnsembleError) -> Self {
        match e {
            EnsembleError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            EnsembleError::Linalg(l) => l.into(),
            EnsembleError::Analytic(a) => a.into(),
            EnsembleError::Io { .. } | EnsembleError::Format { .. } => CliError::Io(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<MechError> for CliError {
    fn from(e: MechError) -> Self {
        match e {
            MechError::InvalidParams(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "pseudoherm", version, about = "Pseudo-hermitian random matrix experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of one sample, with the analytic boundary at t = -1.
    Spectrum(CommonArgs),
    /// Large-N density of real eigenvalues and its support.
    RealDensity(CommonArgs),
    /// Boundary of the complex eigenvalue domain at t = -1.
    Boundary(CommonArgs),
    /// Fraction of real eigenvalues against λ.
    Fraction(CommonArgs),
    /// Critical curves in the (λ, t) plane.
    PhaseDiagram(PhaseArgs),
    /// Monte Carlo run checked against the large-N predictions.
    Compare(CompareArgs),
    /// Positive-metric mechanical control M^{-1} K.
    Mech(MechArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (mut settings, command) = match &cli.command {
        Command::Spectrum(a) | Command::RealDensity(a) | Command::Boundary(a) | Command::Fraction(a) => {
            (Settings::merge(a)?, &cli.command)
        }
        Command::PhaseDiagram(a) => (Settings::merge(&a.common)?.with_phase(a), &cli.command),
        Command::Compare(a) => (Settings::merge(&a.common)?.with_compare(a), &cli.command),
        Command::Mech(a) => (Settings::merge(&a.common)?.with_mech(a), &cli.command),
    };
    let pass = match command {
        Command::Spectrum(_) => commands::spectrum(&mut settings).map(|_| true),
        Command::RealDensity(_) => commands::real_density(&mut settings).map(|_| true),
        Command::Boundary(_) => commands::boundary(&mut settings).map(|_| true),
        Command::Fraction(_) => commands::fraction(&mut settings).map(|_| true),
        Command::PhaseDiagram(_) => commands::phase_diagram(&mut settings).map(|_| true),
        Command::Compare(_) => commands::compare(&mut settings),
        Command::Mech(_) => commands::mech(&mut settings),
    };
    for w in &settings.warnings {
        eprintln!("warning: {w}");
    }
    if pass? {
        Ok(())
    } else {
        Err(CliError::Acceptance)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
