use clap::{Args, Parser, Subcommand, ValueEnum};
use qed1d::model::DEFAULT_C;
use std::path::PathBuf;

/// One-dimensional QED model of the hydrogen-like atom.
#[derive(Debug, Parser)]
#[command(name = "qed1d", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Nuclear charge; required except when scanning over Z.
    #[arg(long = "Z", global = true)]
    pub z: Option<f64>,
    /// Speed of light in atomic units.
    #[arg(long, global = true, default_value_t = DEFAULT_C)]
    pub c: f64,
    /// Electron mass in atomic units.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, global = true, default_value_t = 2000)]
    pub max_subdivisions: usize,
    /// Output format; JSON for single values and CSV for grids and scans
    /// when omitted.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First-order energy corrections of the bound state.
    Energy(EnergyArgs),
    /// Vacuum-polarization density on a grid.
    VpDensity(DensityArgs),
    /// First-order (Uehling) vacuum-polarization density on a grid.
    Uehling(GridArgs),
    /// Integrated vacuum charge, observed nuclear charge and vacuum numbers.
    VacuumCharge(ChargeArgs),
    /// A quantity over a range of Z or 1/c.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[arg(long, value_enum, default_value_t = EnergyUnits::Hartree)]
    pub energy_units: EnergyUnits,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, value_enum, default_value_t = Method::Spectral)]
    pub method: Method,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Clone, Copy, Debug, Args)]
pub struct GridArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = -0.05)]
    pub x_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.05)]
    pub x_max: f64,
    #[arg(long, default_value_t = 501)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = XUnits::Au)]
    pub x_units: XUnits,
}

#[derive(Debug, Args)]
pub struct ChargeArgs {
    /// Momentum cutoff for the individual vacuum numbers, in units of mc.
    #[arg(long, default_value_t = qed1d::green::DEFAULT_NUMBER_CUTOFF)]
    pub cutoff: f64,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub variable: Variable,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
    #[arg(long, value_enum, default_value_t = Quantity::EnergyBreakdown)]
    pub quantity: Quantity,
    #[arg(long, value_enum, default_value_t = EnergyUnits::Hartree)]
    pub energy_units: EnergyUnits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Spectral,
    Commutator,
    Green,
    Uehling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum XUnits {
    /// Bohr radii.
    Au,
    /// Reduced Compton wavelengths 1/(mc).
    Compton,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnergyUnits {
    Hartree,
    /// Units of m Z⁴/(8c²), the leading relativistic correction.
    Relativistic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variable {
    #[value(name = "Z")]
    Z,
    #[value(name = "inv_c")]
    InvC,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    EnergyBreakdown,
    VacuumCharge,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Spectral => "spectral",
            Method::Commutator => "commutator",
            Method::Green => "green",
            Method::Uehling => "uehling",
        }
    }
}

impl XUnits {
    pub fn as_str(self) -> &'static str {
        match self {
            XUnits::Au => "au",
            XUnits::Compton => "compton",
        }
    }
}

impl EnergyUnits {
    pub fn as_str(self) -> &'static str {
        match self {
            EnergyUnits::Hartree => "hartree",
            EnergyUnits::Relativistic => "relativistic",
        }
    }
}
