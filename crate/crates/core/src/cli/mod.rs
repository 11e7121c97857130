//! Command-line front end: `build-space`, `train`, `eval` and `score`.

mod commands;
pub mod config;

use std::fs;
use std::io::{self, BufReader};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{
    build_space, evaluate_checkpoint, load_bundle, run_training, score_stream, ResourceOverrides,
    SpaceStats, TrainRun,
};
pub use config::{ConfigError, RunConfig, ThresholdRule};

use crate::eval::TaskKind;
use crate::sparse::SpaceKind;

#[derive(Debug, Parser)]
#[command(name = "lexent", version, about = "Graded lexical entailment scoring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Window,
    Dependency,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TaskArg {
    Graded,
    Binary,
}

impl From<TaskArg> for TaskKind {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Graded => TaskKind::Graded,
            TaskArg::Binary => TaskKind::Binary,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count co-occurrences in a corpus and save a PPMI space.
    BuildSpace {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 3)]
        window: u32,
        /// Drop contexts seen fewer times than this.
        #[arg(long, default_value_t = 1)]
        min_count: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train one model per seed and report test results.
    ///
    /// Any config key can be overridden after the config path, e.g.
    /// `--seeds 1..3 --paths.output_dir runs/x --sdf`.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Evaluate a checkpoint on a labelled dataset.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        task: Option<TaskArg>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        window_space: Option<PathBuf>,
        #[arg(long)]
        dependency_space: Option<PathBuf>,
        /// Tune the binary threshold on this file.
        #[arg(long)]
        dev: Option<PathBuf>,
        #[arg(long)]
        threshold: Option<f64>,
        /// Refuse resource files that differ from those used in training.
        #[arg(long)]
        strict: bool,
        /// Where to write the JSON report (default: next to the checkpoint).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score word pairs read from a file or stdin.
    Score {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        window_space: Option<PathBuf>,
        #[arg(long)]
        dependency_space: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildSpace {
            corpus,
            kind,
            window,
            min_count,
            out,
        } => {
            let kind = match kind {
                KindArg::Window => SpaceKind::Window { window },
                KindArg::Dependency => SpaceKind::Dependency,
            };
            let stats = build_space(&corpus, kind, min_count, &out)?;
            println!(
                "words={}\tcontexts={}\tnonzero={}\ttotal={}",
                stats.words, stats.contexts, stats.nonzero, stats.total
            );
        }
        Command::Train { config, overrides } => {
            let mut run_config = RunConfig::load(&config)?;
            run_config.apply_overrides(&overrides)?;
            let outcome = run_training(&run_config)?;
            println!("{}", outcome.report.to_json());
            eprintln!("wrote {}", outcome.report_path.display());
        }
        Command::Eval {
            checkpoint,
            data,
            task,
            embeddings,
            window_space,
            dependency_space,
            dev,
            threshold,
            strict,
            out,
        } => {
            let overrides = ResourceOverrides {
                embeddings,
                window_space,
                dependency_space,
                strict,
            };
            let (bundle, meta) = load_bundle(&checkpoint, &overrides)?;
            let task = task.map(TaskKind::from).unwrap_or(meta.task);
            let report =
                evaluate_checkpoint(&bundle, &meta, &data, task, dev.as_deref(), threshold)?;
            let json = report.to_json();
            println!("{json}");
            let out = out.unwrap_or_else(|| {
                let mut p = checkpoint.clone().into_os_string();
                p.push(".eval.json");
                PathBuf::from(p)
            });
            fs::write(&out, json + "\n").with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Score {
            checkpoint,
            pairs,
            embeddings,
            window_space,
            dependency_space,
            strict,
        } => {
            let overrides = ResourceOverrides {
                embeddings,
                window_space,
                dependency_space,
                strict,
            };
            let (bundle, _) = load_bundle(&checkpoint, &overrides)?;
            let stdout = io::stdout().lock();
            match pairs {
                Some(path) => {
                    let file = fs::File::open(&path)
                        .with_context(|| format!("opening {}", path.display()))?;
                    score_stream(&bundle, BufReader::new(file), stdout)?;
                }
                None => {
                    score_stream(&bundle, io::stdin().lock(), stdout)?;
                }
            }
        }
    }
    Ok(())
}
