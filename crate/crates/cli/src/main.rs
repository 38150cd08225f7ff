//! `rwde`: command-line front end for the rwde experiments.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rwde::Weights;
use serde_json::Value;

use commands::{Context, Failure};
use config::ExperimentConfig;
use output::Outputs;

#[derive(Parser)]
#[command(name = "rwde", version, about = "Random walks in Dirichlet environment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads. Affects speed only.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Weights as a comma-separated list of 2d values.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<f64>>,
    /// Dimension for `--alpha`; defaults to half its length.
    #[arg(long, global = true)]
    dim: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Print kappa, the mean drift and the predicted regime.
    Kappa,
    /// Sample an environment on a torus.
    SampleEnv,
    /// Invariant measure and density of one environment.
    Stationary,
    /// Time-reversal identity and the law of reversed environments.
    ReverseCheck,
    /// Empirical moments of the density across torus sizes.
    Moments,
    /// Build and verify the bounded flow on a torus.
    Flow,
    /// Truncated lattice min-cuts.
    Mincut,
    /// Velocity and range experiments.
    Walk,
    /// Tail index of the trap Green function.
    TrapTail,
    /// Exact annealed path probabilities by two formulas.
    AnnealedCheck,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Kappa => "kappa",
            Command::SampleEnv => "sample-env",
            Command::Stationary => "stationary",
            Command::ReverseCheck => "reverse-check",
            Command::Moments => "moments",
            Command::Flow => "flow",
            Command::Mincut => "mincut",
            Command::Walk => "walk",
            Command::TrapTail => "trap-tail",
            Command::AnnealedCheck => "annealed-check",
        }
    }
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path).map_err(Failure::Config)?,
        None => ExperimentConfig::new(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = Some(seed);
    }
    if let Some(alpha) = &cli.alpha {
        let dim = cli.dim.unwrap_or(alpha.len() / 2);
        cfg.weights = Some(Weights::new(dim, alpha.clone()).map_err(|e| Failure::Config(e.to_string()))?);
    } else if cli.dim.is_some() {
        return Err(Failure::Config("--dim needs --alpha".into()));
    }
    cfg.validate().map_err(Failure::Config)?;
    Ok(cfg)
}

fn run(cli: &Cli, cfg: &ExperimentConfig, out: &mut Outputs) -> commands::CommandResult {
    let mut ctx = Context { cfg, out };
    match cli.command {
        Command::Kappa => commands::kappa(&mut ctx),
        Command::SampleEnv => commands::sample_env(&mut ctx),
        Command::Stationary => commands::stationary(&mut ctx),
        Command::ReverseCheck => commands::reverse_check(&mut ctx),
        Command::Moments => commands::moments(&mut ctx),
        Command::Flow => commands::flow(&mut ctx),
        Command::Mincut => commands::mincut(&mut ctx),
        Command::Walk => commands::walk(&mut ctx),
        Command::TrapTail => commands::trap_tail(&mut ctx),
        Command::AnnealedCheck => commands::annealed_check(&mut ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rwde::par::configure_threads(t);
    }
    let mut out = match Outputs::new(&cli.out) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: cannot create {}: {e}", cli.out.display());
            return ExitCode::from(2);
        }
    };
    let (cfg, outcome) = match resolve(&cli) {
        Ok(cfg) => {
            let r = run(&cli, &cfg, &mut out);
            (serde_json::to_value(&cfg).unwrap_or(Value::Null), r)
        }
        Err(e) => (Value::Null, Err(e)),
    };
    let (status, results, code) = match outcome {
        Ok(results) => ("ok", results, 0),
        Err(e) => {
            eprintln!("error: {e}");
            (
                "error",
                serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() }),
                e.exit_code(),
            )
        }
    };
    if let Err(e) = out.finish(cli.command.name(), status, cfg, results) {
        eprintln!("error: cannot write summary: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
