//! Command-line front end: configuration loading, command dispatch and
//! result files.

pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hetsim_core::simulation::{cell_radius, default_tilts};
use hetsim_core::{run_sweep, simulate, MetroAntenna, PowerMode, Scenario, SweepGrid};

use config::{load_config, load_str, ConfigError};
use output::{render_radius, render_results, Format, RadiusRow};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hetsim",
    version,
    about = "Two-tier macro/metro network simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scenario file (TOML). Omitted keys take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides simulation.master_seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Config override `section.key=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Jsonl => Format::Jsonl,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured scenario.
    Simulate,
    /// Run a metro antenna × downtilt grid on shared drops.
    Sweep(SweepArgs),
    /// Analytic metro cell radius for given antennas and tilts.
    Radius(RadiusArgs),
    /// Check the configuration and print the resolved scenario.
    Validate,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated metro antennas.
    #[arg(long, value_delimiter = ',', default_values_t = MetroAntenna::ALL.map(|a| a.name().to_string()))]
    pub patterns: Vec<String>,
    /// Comma-separated downtilts in degrees (default 0 to 40 in steps of 2).
    #[arg(long, value_delimiter = ',')]
    pub tilts: Option<Vec<f64>>,
    /// Comma-separated power modes (default: the configured one).
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    #[arg(long, value_delimiter = ',', default_values_t = ["dipole4".to_string(), "quasi_omni".to_string()])]
    pub patterns: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [10.0, 20.0, 30.0, 40.0])]
    pub tilts: Vec<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.message)
    }
}

impl From<hetsim_core::Error> for CliError {
    fn from(e: hetsim_core::Error) -> Self {
        match e {
            hetsim_core::Error::Degenerate(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

fn parse_list<T: std::str::FromStr<Err = hetsim_core::Error>>(
    items: &[String],
) -> Result<Vec<T>, CliError> {
    items
        .iter()
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|e: hetsim_core::Error| CliError::Config(e.to_string()))
        })
        .collect()
}

fn scenario(common: &CommonArgs) -> Result<Scenario, CliError> {
    let mut s = match &common.config {
        Some(path) => load_config(path, &common.overrides)?,
        None => load_str("", &common.overrides)?,
    };
    if let Some(seed) = common.seed {
        s.master_seed = seed;
    }
    Ok(s)
}

/// Executes a parsed command and returns the text it produces.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let common = &cli.common;
    let format = Format::from(common.format);
    if common.workers == 0 {
        return Err(CliError::Config("--workers must be at least 1".into()));
    }
    let s = scenario(common)?;
    match &cli.command {
        Command::Validate => Ok(config::scenario_to_toml(&s)),
        Command::Simulate => {
            let row = simulate(&s, common.workers)?;
            Ok(render_results(&[row], format))
        }
        Command::Sweep(args) => {
            let antennas: Vec<MetroAntenna> = parse_list(&args.patterns)?;
            let tilts = args.tilts.clone().unwrap_or_else(default_tilts);
            let modes: Vec<PowerMode> = match &args.modes {
                Some(m) => parse_list(m)?,
                None => vec![s.power_mode],
            };
            let grid = SweepGrid::new(&antennas, &tilts, &modes)?;
            let rows = run_sweep(&s, &grid, common.workers)?;
            Ok(render_results(&rows, format))
        }
        Command::Radius(args) => {
            let antennas: Vec<MetroAntenna> = parse_list(&args.patterns)?;
            let mut rows = Vec::new();
            for a in antennas {
                for &tilt in &args.tilts {
                    let r =
                        cell_radius(s.metro.height_m, s.user_height_m, tilt, a.vert_hpbw_deg())?;
                    let m = r.meters();
                    rows.push(RadiusRow {
                        pattern: a.name().to_string(),
                        height_m: s.metro.height_m,
                        downtilt_deg: tilt,
                        vert_hpbw_deg: a.vert_hpbw_deg(),
                        cell_radius_m: m,
                        cell_radius_display_m: m.map(|v| format!("{v:.1}")),
                    });
                }
            }
            Ok(render_radius(&rows, format))
        }
    }
}

/// Runs the command and writes its output. Returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|text| match &cli.common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
