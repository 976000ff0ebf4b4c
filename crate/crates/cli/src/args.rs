use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dfg_shaper::experiments::DEFAULT_PM_FWHMS;
use dfg_shaper::Preset;

#[derive(Debug, Parser)]
#[command(name = "dfg-shaper", version, about = "Model the fidelity of a DFG pulse shaper")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one target through the model and export both spectra.
    Shape(ShapeArgs),
    /// Overlap versus mode width for several mode orders.
    Sweep(SweepArgs),
    /// Overlap versus mode width for several phasematching widths.
    PmSweep(PmSweepArgs),
    /// Print derived quantities of a configuration.
    Info(InfoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Structured,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Configuration file: TOML, or the JSON manifest of an earlier run.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory for output files; created if missing.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// current-experiment, pulsed-outlook or ideal.
    #[arg(long, value_name = "NAME")]
    pub preset: Option<Preset>,
    #[command(flatten)]
    pub toggles: ToggleArgs,
}

/// Each flag switches one stage off, whatever the preset or file says.
#[derive(Debug, Args, Default, Clone, Copy)]
pub struct ToggleArgs {
    #[arg(long)]
    pub no_envelope: bool,
    #[arg(long)]
    pub no_window: bool,
    #[arg(long)]
    pub no_shaper_res: bool,
    #[arg(long)]
    pub no_dual_mode: bool,
    #[arg(long)]
    pub no_dye_linewidth: bool,
    #[arg(long)]
    pub no_spectrometer: bool,
}

#[derive(Debug, Args)]
pub struct SigmaArgs {
    #[arg(long, default_value_t = 0.25, value_name = "NM")]
    pub sigma_start: f64,
    #[arg(long, default_value_t = 10.0, value_name = "NM")]
    pub sigma_stop: f64,
    #[arg(long, default_value_t = 0.25, value_name = "NM")]
    pub sigma_step: f64,
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Hermite-Gauss order.
    #[arg(long)]
    pub order: u32,
    /// Base width of the mode on the pump axis, nm.
    #[arg(long, value_name = "NM")]
    pub sigma: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0u32, 1, 2, 3, 4])]
    pub orders: Vec<u32>,
    #[command(flatten)]
    pub sigma: SigmaArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct PmSweepArgs {
    #[arg(long, default_value_t = 4)]
    pub order: u32,
    /// Phasematching widths on the pump axis, nm.
    #[arg(long, value_delimiter = ',', value_name = "NM", default_values_t = DEFAULT_PM_FWHMS)]
    pub pm_fwhms: Vec<f64>,
    #[command(flatten)]
    pub sigma: SigmaArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}
