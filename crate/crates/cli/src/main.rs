//! `corpusmix`: run the curation, selection, and mixture pipeline from a TOML config.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corpusmix_core::pipeline::{Pipeline, PipelineConfig, Stage, StageStatus};
use corpusmix_core::Error;

const EXIT_STAGE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "corpusmix", version, about = "Build pretraining mixtures from multi-source corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the config and every referenced input file, then exit.
    Validate(Common),
    /// Deduplicate and filter the raw sources.
    Curate(Common),
    /// Importance-resample documents toward a target distribution.
    Select(Common),
    /// Compute mixture weights and the manifest from bucket statistics.
    Weights(Common),
    /// Partition documents into sampling buckets.
    Buckets(Common),
    /// Write attribute histograms and cross-tabulations.
    Analyze(Common),
    /// Emit the mixture described by the manifest.
    Sample(Common),
    /// Run every enabled stage in pipeline order.
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// Pipeline config file (TOML).
    #[arg(short, long)]
    config: PathBuf,
    /// Override the global seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory (relative to the working directory).
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    /// Override a config key, e.g. `--set select.rate=0.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Rerun stages even when their recorded inputs are unchanged.
    #[arg(long)]
    force: bool,
}

impl Common {
    fn load(&self) -> corpusmix_core::Result<PipelineConfig> {
        let mut overrides = self.overrides.clone();
        if let Some(seed) = self.seed {
            overrides.push(format!("seed={seed}"));
        }
        let mut cfg = PipelineConfig::load(&self.config, &overrides)?;
        if let Some(dir) = &self.output_dir {
            cfg.output_dir = absolute(dir);
        }
        Ok(cfg)
    }
}

fn absolute(p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        std::env::current_dir().map(|d| d.join(p)).unwrap_or_else(|_| p.to_path_buf())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_STAGE,
    }
}

fn execute(command: Command) -> corpusmix_core::Result<()> {
    let (common, stages) = match command {
        Command::Validate(c) => {
            let cfg = c.load()?;
            let enabled = Pipeline::new(cfg)?.enabled_stages();
            let names: Vec<_> = enabled.iter().map(|s| s.name()).collect();
            println!("config ok; enabled stages: {}", names.join(", "));
            return Ok(());
        }
        Command::Curate(c) => (c, vec![Stage::Curate]),
        Command::Select(c) => (c, vec![Stage::Select]),
        Command::Weights(c) => (c, vec![Stage::Weights]),
        Command::Buckets(c) => (c, vec![Stage::Buckets]),
        Command::Analyze(c) => (c, vec![Stage::Analyze]),
        Command::Sample(c) => (c, vec![Stage::Sample]),
        Command::Run(c) => (c, Vec::new()),
    };
    let cfg = common.load()?;
    let mut pipeline = Pipeline::new(cfg)?.force(common.force);
    for outcome in pipeline.run(&stages)? {
        let status = match outcome.status {
            StageStatus::Ran => "done",
            StageStatus::UpToDate => "up to date",
        };
        println!("{}: {status}", outcome.stage);
    }
    println!("index: {}", pipeline.output_dir().join(corpusmix_core::pipeline::RUN_INDEX).display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
