//! Losses, AdaDelta, lexicon pre-training and the supervised epoch loop.

mod adadelta;
mod config;
mod loss;
mod trainer;

use thiserror::Error;

pub use adadelta::{adadelta_scalar, AdaDelta, OptimizerState};
pub use config::TrainConfig;
pub use loss::{batch_mse, hinge_loss, mse_loss};
pub use trainer::{
    dev_metric, pretrain, train, train_epoch, EpochRecord, Example, Inputs, PretrainSummary,
    TrainOutcome, TrainingLog,
};

use crate::eval::{AggregateReport, EvalReport, TaskKind};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid training configuration: {0}")]
    Config(String),
    #[error("{0}")]
    EmptyData(String),
    #[error("non-finite loss or gradient in epoch {epoch}, batch {batch}")]
    NonFinite { epoch: u32, batch: usize },
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// Runs `run` once per seed and aggregates the reports.
pub fn multi_seed<F, E>(task: TaskKind, seeds: &[u64], mut run: F) -> Result<AggregateReport, E>
where
    F: FnMut(u64) -> Result<EvalReport, E>,
{
    let mut runs = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let mut report = run(seed)?;
        report.seed = Some(seed);
        runs.push(report);
    }
    Ok(AggregateReport::from_runs(task, runs))
}
