//! Command-line front end for the two-particle grating simulations.
//!
//! Every subcommand starts from its own defaults, then applies an optional
//! `--config` file and finally the individual flags, so a flag always wins.

pub mod commands;
pub mod config;
pub mod output;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use config::{parse_range, Format, MomentumKind, Scenario, ScenarioConfig};
use output::Table;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] kapitza_dirac::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad input, 3 for numerical failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) => 2,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kdsim",
    version,
    about = "Two-particle diffraction by a standing light wave"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diffraction coefficients b_n with a Σ|b_n|² footer
    Coefficients(ScenarioArgs),
    /// Single-mode joint spatial pattern with one detector fixed at y
    Spatial(ScenarioArgs),
    /// Gaussian multi-mode joint spatial pattern
    Multimode(ScenarioArgs),
    /// Period-averaged pair correlation, closed form against quadrature
    Correlation(ScenarioArgs),
    /// Momentum probabilities: w-sweeps (--kind fig4|fig6) or a joint table
    Momentum(ScenarioArgs),
    /// Write the data and a gnuplot script for one of the standard figures
    Figure {
        #[arg(long)]
        id: u32,
        #[command(flatten)]
        args: ScenarioArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Grating strength
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<f64>,
    /// Laser wavenumber
    #[arg(long, allow_hyphen_values = true)]
    pub kl: Option<f64>,
    /// Axial wavenumber (or Gaussian center) of the first particle
    #[arg(long, allow_hyphen_values = true)]
    pub k0: Option<f64>,
    /// Axial wavenumber (or Gaussian center) of the second particle
    #[arg(long, allow_hyphen_values = true)]
    pub q0: Option<f64>,
    /// Transverse wavenumber of the first particle
    #[arg(long = "K0", allow_hyphen_values = true)]
    pub big_k0: Option<f64>,
    /// Transverse wavenumber of the second particle
    #[arg(long = "Q0", allow_hyphen_values = true)]
    pub big_q0: Option<f64>,
    /// Squared Gaussian width of the first particle
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Squared Gaussian width of the second particle
    #[arg(long)]
    pub mu2: Option<f64>,
    /// dis, boson or fermion
    #[arg(long)]
    pub stats: Option<String>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Scan range lo:hi
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Fixed detector position
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    /// Truncation order: auto or an integer
    #[arg(long)]
    pub nmax: Option<String>,
    /// Half-width of the momentum table window
    #[arg(long)]
    pub nrange: Option<usize>,
    /// fig4, fig6 or table
    #[arg(long)]
    pub kind: Option<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Output file (a directory for `figure`); standard output if absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat key = value file applied before the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ScenarioArgs {
    pub fn resolve(&self, mut cfg: ScenarioConfig) -> Result<ScenarioConfig, CliError> {
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_text(&text)?;
        }
        let reals = [
            (self.w, &mut cfg.w),
            (self.kl, &mut cfg.kl),
            (self.k0, &mut cfg.k0),
            (self.q0, &mut cfg.q0),
            (self.big_k0, &mut cfg.big_k0),
            (self.big_q0, &mut cfg.big_q0),
            (self.sigma2, &mut cfg.sigma2),
            (self.mu2, &mut cfg.mu2),
            (self.y, &mut cfg.y),
        ];
        for (flag, slot) in reals {
            if let Some(v) = flag {
                *slot = v;
            }
        }
        if let Some(s) = &self.stats {
            cfg.stats = s.parse()?;
        }
        if let Some(p) = self.points {
            cfg.points = p;
        }
        if let Some(r) = &self.range {
            cfg.range = Some(parse_range(r)?);
        }
        if let Some(n) = &self.nmax {
            cfg.nmax = n.parse()?;
        }
        if let Some(n) = self.nrange {
            cfg.nrange = n;
        }
        if let Some(k) = &self.kind {
            cfg.kind = k.parse()?;
        }
        if let Some(f) = &self.format {
            cfg.format = f.parse()?;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn build_table(scenario: Scenario, cfg: &ScenarioConfig) -> Result<Table, CliError> {
    match scenario {
        Scenario::Coefficients => commands::coefficients(cfg),
        Scenario::Spatial => commands::spatial(cfg),
        Scenario::Multimode => commands::multimode(cfg),
        Scenario::Correlation => commands::correlation(cfg),
        Scenario::Momentum => commands::momentum(cfg),
    }
}

/// Scenario, preset overrides and axis labels of a standard figure.
pub fn figure_preset(
    id: u32,
) -> Result<(Scenario, ScenarioConfig, &'static str, &'static str), CliError> {
    let preset = match id {
        2 => (
            Scenario::Spatial,
            ScenarioConfig::defaults(Scenario::Spatial),
            "x k_L",
            "joint density",
        ),
        3 => (
            Scenario::Multimode,
            ScenarioConfig::defaults(Scenario::Multimode),
            "x k_L",
            "joint density",
        ),
        4 | 6 => {
            let mut cfg = ScenarioConfig::defaults(Scenario::Momentum);
            cfg.kind = if id == 4 {
                MomentumKind::Fig4
            } else {
                MomentumKind::Fig6
            };
            (Scenario::Momentum, cfg, "w", "probability")
        }
        other => {
            return Err(CliError::Config(format!(
                "no figure {other}; expected 2, 3, 4 or 6"
            )))
        }
    };
    Ok(preset)
}

fn emit(table: &Table, cfg: &ScenarioConfig) -> Result<(), CliError> {
    let mut buf = Vec::new();
    table.write(cfg.format, &mut buf)?;
    match &cfg.out {
        Some(path) => fs::write(path, buf)?,
        None => io::stdout().lock().write_all(&buf)?,
    }
    Ok(())
}

/// Writes `fig<id>.csv` and `fig<id>.gp` into `dir` and returns both paths.
pub fn write_figure(
    id: u32,
    args: &ScenarioArgs,
    dir: &Path,
) -> Result<(PathBuf, PathBuf), CliError> {
    let (scenario, preset, xlabel, ylabel) = figure_preset(id)?;
    let mut args = args.clone();
    args.out = None;
    args.kind = None;
    let mut cfg = args.resolve(preset)?;
    cfg.format = Format::Csv;
    let table = build_table(scenario, &cfg)?;
    fs::create_dir_all(dir)?;
    let data_name = format!("fig{id}.csv");
    let data = dir.join(&data_name);
    let script = dir.join(format!("fig{id}.gp"));
    let mut buf = Vec::new();
    table.write(Format::Csv, &mut buf)?;
    fs::write(&data, buf)?;
    fs::write(
        &script,
        commands::plot_script(&data_name, &table, xlabel, ylabel),
    )?;
    Ok((data, script))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let (scenario, args) = match &cli.command {
        Command::Coefficients(a) => (Scenario::Coefficients, a),
        Command::Spatial(a) => (Scenario::Spatial, a),
        Command::Multimode(a) => (Scenario::Multimode, a),
        Command::Correlation(a) => (Scenario::Correlation, a),
        Command::Momentum(a) => (Scenario::Momentum, a),
        Command::Figure { id, args } => {
            let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let (data, script) = write_figure(*id, args, &dir)?;
            println!("{}", data.display());
            println!("{}", script.display());
            return Ok(());
        }
    };
    let cfg = args.resolve(ScenarioConfig::defaults(scenario))?;
    let table = build_table(scenario, &cfg)?;
    emit(&table, &cfg)
}
