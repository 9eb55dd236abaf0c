use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bopshox", version, about = "Exact vs Born-Oppenheimer analysis of two coupled oscillators")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Fast-particle mass m
    #[arg(long = "m", global = true)]
    pub m: Option<f64>,
    /// Slow-particle mass M
    #[arg(long = "M", global = true)]
    pub big_m: Option<f64>,
    /// Fast frequency ω
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Slow frequency Ω
    #[arg(long = "Omega", global = true)]
    pub big_omega: Option<f64>,
    /// Reduced slow frequency Ω/ω; sets Ω from ω
    #[arg(long = "Omega-bar", global = true, conflicts_with = "big_omega")]
    pub omega_bar: Option<f64>,
    /// Dimensionless coupling δ, |δ| < 1
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// key = value parameter file (keys m, M, omega, Omega, delta); flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Gauss-Hermite nodes per axis for overlaps
    #[arg(long, global = true, default_value_t = 80)]
    pub nodes: usize,
    /// Relative tolerance of the shooting eigensolver
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Run sweeps on the calling thread only
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct StateArgs {
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub l: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact energy and normal-mode data
    Exact(StateArgs),
    /// BO energy, effective frequencies and turning points
    Bo(StateArgs),
    /// BO eigenvalue by two-sided phase-space shooting
    Shoot {
        #[command(flatten)]
        state: StateArgs,
        /// Also write the converged trajectory
        #[arg(long)]
        trajectory: bool,
    },
    /// Relative BO energy errors on the lattice n ≤ n-max, l ≤ l-max
    Errors {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        l_max: usize,
    },
    /// Overlap σ between exact and BO wavefunctions
    Overlap(StateArgs),
    /// QU decomposition of G, at the current δ or over a sweep
    Qu {
        /// start:stop:step
        #[arg(long)]
        sweep_delta: Option<String>,
    },
    /// Figure dataset 1-5
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        number: u8,
        /// start:stop:step for the δ sweeps of figures 3-5
        #[arg(long)]
        sweep_delta: Option<String>,
        /// Cells per axis of the figure 1 region map
        #[arg(long, default_value_t = bopshox::analysis::FIGURE1_RESOLUTION)]
        resolution: usize,
    },
}
