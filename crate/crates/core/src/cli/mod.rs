//! The `lame-weyl` command line.
//!
//! Every command resolves an [`ExperimentConfig`] (flags over config file
//! over defaults), prints a table or, with `--json`, a JSON document that
//! embeds the effective config and its hash. JSON documents and CSV side
//! outputs are also written to the output directory.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 numerical
//! failure, 4 indecisive adjudication under `--require-decisive`.

mod commands;
mod config;

pub use commands::{scalar_controls, CommandOutput, ControlCheck, OperatorArg, SweepTarget, CONTROL_REL_TOL};
pub use config::{parse_domain, ExperimentConfig, Tolerances};

use crate::domain::{BoundaryCondition, DomainKind};
use crate::error::{Error, Result};
use crate::predictions::GammaPolicy;
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_INDECISIVE: u8 = 4;

/// Environment variable read when neither a flag nor the config file names
/// a cache directory.
pub const CACHE_DIR_ENV: &str = "WEYL_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "lame-weyl",
    version,
    about = "Two-term Weyl and heat-trace coefficients of the planar Lamé operator"
)]
pub struct Cli {
    /// JSON file with ExperimentConfig fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Spectrum cache directory [default: $WEYL_CACHE_DIR, then .weyl-cache].
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Where JSON and CSV outputs are written [default: weyl-out].
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Print the JSON document instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Exit with status 4 when an adjudication is not decisive.
    #[arg(long, global = true)]
    pub require_decisive: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides for the experiment config.
#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub ct2: Option<f64>,
    #[arg(long, conflicts_with = "alpha")]
    pub cl2: Option<f64>,
    /// Sets cl2 = ct2 / alpha.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// dir, free or neu.
    #[arg(long)]
    pub bc: Option<BoundaryCondition>,
    /// disk or rect:A,B.
    #[arg(long, value_parser = parse_domain)]
    pub domain: Option<DomainKind>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// unit, family or an explicit gamma.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<GammaPolicy>,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[arg(long)]
    pub refine_tol: Option<f64>,
    #[arg(long)]
    pub residual_gate: Option<f64>,
    /// Points per decade of the t grid.
    #[arg(long)]
    pub per_decade: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots of the Rayleigh sextic.
    Rayleigh {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
    },
    /// The boundary coefficient beta.
    Beta {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value = "dir")]
        bc: BoundaryCondition,
        /// unit, family or an explicit gamma (free condition).
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<GammaPolicy>,
    },
    /// Every source's two-term coefficients.
    Predict(ExperimentArgs),
    /// Compute (or load) a spectrum.
    Spectrum {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long, value_enum, default_value = "lame")]
        operator: OperatorArg,
        /// Copies of the scalar operator.
        #[arg(long, default_value_t = 1)]
        components: u32,
    },
    /// Fit the heat and counting coefficients of a spectrum.
    Fit {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long, value_enum, default_value = "lame")]
        operator: OperatorArg,
        #[arg(long, default_value_t = 1)]
        components: u32,
    },
    /// Compare the measured d with every prediction.
    Adjudicate(ExperimentArgs),
    /// Measured d_dir + d_free against the predicted sums.
    SumRule(ExperimentArgs),
    /// Tabulate targets over a list of alpha values.
    Sweep {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "beta")]
        targets: Vec<SweepTarget>,
    },
}

impl Command {
    fn experiment(&self) -> Option<&ExperimentArgs> {
        match self {
            Command::Rayleigh { .. } | Command::Beta { .. } => None,
            Command::Predict(e) | Command::Adjudicate(e) | Command::SumRule(e) => Some(e),
            Command::Spectrum { exp, .. } | Command::Fit { exp, .. } | Command::Sweep { exp, .. } => Some(exp),
        }
    }
}

/// Defaults (with `$WEYL_CACHE_DIR`), then the config file, then flags.
pub fn resolve_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(dir) = std::env::var_os(CACHE_DIR_ENV) {
        cfg.cache_dir = PathBuf::from(dir);
    }
    if let Some(path) = &cli.config {
        cfg = cfg.overlay_file(path)?;
    }
    if let Some(e) = cli.command.experiment() {
        apply(&mut cfg, e);
    }
    if let Some(d) = &cli.cache_dir {
        cfg.cache_dir = d.clone();
    }
    if let Some(d) = &cli.out_dir {
        cfg.out_dir = d.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn apply(cfg: &mut ExperimentConfig, e: &ExperimentArgs) {
    if let Some(x) = e.ct2 {
        cfg.ct2 = x;
    }
    if let Some(x) = e.cl2 {
        cfg.cl2 = x;
    }
    if let Some(a) = e.alpha {
        cfg.cl2 = cfg.ct2 / a;
    }
    if let Some(x) = e.bc {
        cfg.bc = x;
    }
    if let Some(x) = e.domain {
        cfg.domain = x;
    }
    if let Some(x) = e.tau_max {
        cfg.tau_max = x;
    }
    if let Some(x) = e.gamma {
        cfg.gamma_policy = x;
    }
    if let Some(x) = e.quad_tol {
        cfg.tolerances.quadrature = x;
    }
    if let Some(x) = e.refine_tol {
        cfg.tolerances.refinement = x;
    }
    if let Some(x) = e.residual_gate {
        cfg.tolerances.residual_gate = x;
    }
    if let Some(x) = e.per_decade {
        cfg.t_grid.per_decade = x;
    }
}

/// Runs one command and returns its output with the JSON envelope.
pub fn execute(cli: &Cli) -> Result<(CommandOutput, serde_json::Value, ExperimentConfig)> {
    let cfg = resolve_config(cli)?;
    let out = match &cli.command {
        Command::Rayleigh { alpha } => commands::rayleigh(*alpha)?,
        Command::Beta { alpha, bc, gamma } => commands::beta(
            *alpha,
            *bc,
            gamma.unwrap_or(cfg.gamma_policy),
            cfg.tolerances.quadrature,
        )?,
        Command::Predict(_) => commands::predict(&cfg)?,
        Command::Spectrum {
            operator, components, ..
        } => commands::spectrum(&cfg, *operator, *components)?,
        Command::Fit {
            operator, components, ..
        } => commands::fit(&cfg, *operator, *components)?,
        Command::Adjudicate(_) => commands::adjudicate(&cfg)?,
        Command::SumRule(_) => commands::sum_rule(&cfg)?,
        Command::Sweep { alphas, targets, .. } => commands::sweep(&cfg, alphas, targets)?,
    };
    let envelope = json!({
        "tool": "lame-weyl",
        "version": env!("CARGO_PKG_VERSION"),
        "command": out.command,
        "config": cfg,
        "config_hash": cfg.hash()?,
        "result": out.result,
    });
    Ok((out, envelope, cfg))
}

/// Writes `<command>-<hash prefix>.json` and one CSV per side output.
pub fn write_outputs(
    out: &CommandOutput,
    envelope: &serde_json::Value,
    cfg: &ExperimentConfig,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let stem = format!("{}-{}", out.command, &cfg.hash()?[..12]);
    let mut written = Vec::new();
    let path = cfg.out_dir.join(format!("{stem}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(envelope)? + "\n")?;
    written.push(path);
    for (suffix, body) in &out.csv {
        let path = cfg.out_dir.join(format!("{stem}-{suffix}.csv"));
        std::fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::Domain(_)
        | Error::InvalidMaterial(_)
        | Error::NoUnitRoot { .. }
        | Error::OutOfRange { .. }
        | Error::Json(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

/// Entry point of the binary.
pub fn main_with(cli: Cli) -> ExitCode {
    let result = execute(&cli).and_then(|(out, envelope, cfg)| {
        let written = write_outputs(&out, &envelope, &cfg)?;
        Ok((out, envelope, written))
    });
    match result {
        Ok((out, envelope, written)) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&envelope).expect("envelope serializes")
                );
            } else {
                print!("{}", out.text);
                for p in &written {
                    eprintln!("wrote {}", p.display());
                }
            }
            if cli.require_decisive && out.indecisive {
                eprintln!("error: the adjudication is not decisive");
                return ExitCode::from(EXIT_INDECISIVE);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
