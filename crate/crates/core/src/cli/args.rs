use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(
    name = "twospin",
    version,
    about = "Exact dynamics and geometric phases of two Ising-coupled spins in a rotating field"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The four eigenenergies E_1..E_4.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Total, dynamical and geometric phase of each eigenpath over one cycle.
    Phases {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = PhaseMode::Berry)]
        mode: PhaseMode,
    },
    /// Evolve a state and print its amplitudes.
    Evolve {
        #[command(flatten)]
        common: CommonArgs,
        /// uu, ud, du, dd, singlet, xi1..xi4, tilde1..tilde4, or eight
        /// comma-separated reals re0,im0,re1,im1,re2,im2,re3,im3.
        #[arg(long, allow_hyphen_values = true)]
        initial: String,
        /// Elapsed time.
        #[arg(long, allow_hyphen_values = true)]
        time: f64,
    },
    /// Two-cycle sign-reversal protocols.
    Twocycle {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        scheme: Scheme,
        /// Comma-separated omega1 values for a convergence table.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        omega1_sweep: Option<Vec<f64>>,
    },
    /// Evaluate a quantity over a parameter grid.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// name=start:stop:count; repeat for more axes.
        #[arg(long = "axis", required = true, allow_hyphen_values = true)]
        axes: Vec<String>,
        #[arg(long, value_enum)]
        quantity: Quantity,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Static field frequency of both spins.
    #[arg(long, allow_hyphen_values = true)]
    pub omega0: Option<f64>,
    #[arg(long = "omega-a0", allow_hyphen_values = true)]
    pub omega_a0: Option<f64>,
    #[arg(long = "omega-b0", allow_hyphen_values = true)]
    pub omega_b0: Option<f64>,
    /// Rotating field amplitude of both spins.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long = "gamma-a", allow_hyphen_values = true)]
    pub gamma_a: Option<f64>,
    #[arg(long = "gamma-b", allow_hyphen_values = true)]
    pub gamma_b: Option<f64>,
    /// Ising coupling.
    #[arg(long = "J", allow_hyphen_values = true)]
    pub j: Option<f64>,
    /// Angular frequency of the rotating field.
    #[arg(long, allow_hyphen_values = true)]
    pub omega1: Option<f64>,
    /// Use the stepped integrator with this many steps per evolution.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat TOML file with any of the parameter keys above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseMode {
    Berry,
    Aa,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Adiabatic,
    Aa,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Spectrum,
    Berry,
    Aa,
    TwocycleDefect,
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Spectrum { common }
            | Command::Phases { common, .. }
            | Command::Evolve { common, .. }
            | Command::Twocycle { common, .. }
            | Command::Sweep { common, .. } => common,
        }
    }
}
