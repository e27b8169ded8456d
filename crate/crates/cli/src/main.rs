use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use collabaudit_cli::{CliError, CliResult, Overrides, Pipeline, RunConfig, TrainRequest};
use collabaudit_core::Strategy;

#[derive(Parser)]
#[command(
    name = "collabaudit",
    version,
    about = "Memorization audits of collaboratively trained code models"
)]
struct Cli {
    #[arg(long, global = true, default_value = "collabaudit.toml")]
    config: PathBuf,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override any config key, e.g. `--set train.epochs=3`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Centralized,
    Fedavg,
    Fedyogi,
    Incremental,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Centralized => Strategy::Centralized,
            StrategyArg::Fedavg => Strategy::Fedavg,
            StrategyArg::Fedyogi => Strategy::Fedyogi,
            StrategyArg::Incremental => Strategy::Incremental,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Read every organization's source tree.
    Ingest,
    /// Quality filters, near-duplicate removal and the train/validation split.
    Dedup,
    /// Split sizes and per-megabyte metrics.
    Stats,
    /// Clone blocks inside each training corpus.
    Clones,
    /// Signature-and-docstring prompts, sampled per organization.
    Prompts,
    /// Train one model, or every model listed under `plan.models`.
    Train {
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Incremental order such as `A2B2C`.
        #[arg(long)]
        order: Option<String>,
    },
    /// Sample continuations of every prompt from each trained model.
    Generate {
        #[arg(long)]
        model: Option<String>,
    },
    /// Memorization ratios of the generations against each training corpus.
    Audit,
    /// Cross-organization clones and their recovery from prefixes.
    Crossorg,
    /// Validation perplexity and pass@k on held-out functions.
    Passk,
    /// Render the result tables.
    Report,
}

fn run(cli: Cli) -> CliResult<()> {
    let overrides = Overrides {
        seed: cli.seed,
        out_dir: cli.out,
        set: cli.set,
    };
    let cfg = RunConfig::load(&cli.config, &overrides)?;
    let config_dir = cli.config.parent().map(PathBuf::from).unwrap_or_default();
    let pipeline = Pipeline::new(cfg, &config_dir);
    match cli.command {
        Command::Ingest => pipeline.ingest(),
        Command::Dedup => pipeline.dedup(),
        Command::Stats => pipeline.stats(),
        Command::Clones => pipeline.clones(),
        Command::Prompts => pipeline.prompts(),
        Command::Train { strategy, order } => {
            let request = match (strategy, order) {
                (Some(s), order) => Some(TrainRequest {
                    strategy: s.into(),
                    order,
                }),
                (None, Some(_)) => {
                    return Err(CliError::Config(
                        "--order needs --strategy incremental".into(),
                    ))
                }
                (None, None) => None,
            };
            for name in pipeline.train(request.as_ref())? {
                println!("{name}");
            }
            Ok(())
        }
        Command::Generate { model } => pipeline.generate(model.as_deref()),
        Command::Audit => pipeline.audit(),
        Command::Crossorg => pipeline.crossorg(),
        Command::Passk => pipeline.passk(),
        Command::Report => {
            for f in pipeline.report()? {
                println!("{f}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::to_string(&e.record()).expect("error record serializes")
            );
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
