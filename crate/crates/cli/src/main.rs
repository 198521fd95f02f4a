//! `lojacobi`: exact spectral verification for the Jacobi operator of the
//! Lawson–Osserman cone link.
//!
//! Exit codes: 0 pass (or partial coverage), 1 verification failure, 2 usage error.

mod cache;
mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lojacobi::harmonic::Provenance;
use lojacobi::suite::Status;

#[derive(Parser, Debug)]
#[command(name = "lojacobi", version, about = "Exact spectral verification for the Lawson-Osserman cone link")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Largest k accepted for operator assembly.
    #[arg(long, global = true, default_value_t = 6)]
    pub limit: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Paper,
    Generated,
}

impl From<Source> for Provenance {
    fn from(s: Source) -> Self {
        match s {
            Source::Paper => Provenance::Paper,
            Source::Generated => Provenance::Generated,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeometryCheck {
    Connections,
    Killing,
    Groups,
    Frames,
}

#[derive(Args, Debug, Clone)]
pub struct OperatorArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = Source::Paper)]
    pub source: Source,
    /// Cross-check with the floating-point oracle.
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pub oracle: Toggle,
    /// Compare against the published reference data (k ≤ 4).
    #[arg(long)]
    pub golden: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List a basis of Q_k with eigenfunction checks.
    Basis {
        #[arg(long)]
        k: u32,
        /// Restrict to one weight block.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        #[arg(long, value_enum, default_value_t = Source::Paper)]
        source: Source,
    },
    /// Assemble L_k.
    Matrix(OperatorArgs),
    /// Exact characteristic polynomial of L_k.
    Charpoly(OperatorArgs),
    /// Exact eigenvalues of L_k with multiplicities.
    Spectrum(OperatorArgs),
    /// Exact inertia of L_k.
    Inertia(OperatorArgs),
    /// Run every acceptance criterion.
    VerifyAll {
        #[arg(long, default_value_t = 4)]
        max_k: u32,
        #[arg(long, default_value_t = 5)]
        positivity_k: u32,
    },
    /// Frame, connection, Killing-field and group checks on the link.
    Geometry {
        /// Run one check; all four when omitted.
        #[arg(long, value_enum)]
        check: Option<GeometryCheck>,
        /// Exact points for the frame checks.
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Configurations per group identity.
        #[arg(long, default_value_t = 100)]
        configurations: usize,
    },
    /// Indicial roots, decay orders and the mode ODE.
    Decay {
        /// Roots for one Jacobi eigenvalue, e.g. -15/4.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Integrate the mode equation for this Jacobi eigenvalue.
        #[arg(long, allow_hyphen_values = true)]
        ode_demo: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            let out = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report.to_json()).expect("json") + "\n",
                Format::Text => report.to_text(),
            };
            print!("{out}");
            match report.status {
                Status::Fail => ExitCode::from(1),
                Status::Pass | Status::Partial => ExitCode::SUCCESS,
            }
        }
        Err(commands::CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::CliError::Failure(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
