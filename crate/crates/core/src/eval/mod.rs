//! Datasets, lexicons, splits and metrics.

mod data;
mod lexicon;
mod metrics;
mod report;
mod split;

use thiserror::Error;

pub use data::{
    load_binary, load_graded, load_pairs, read_binary, read_graded, Gold, ScoredPair, TaskKind,
};
pub use lexicon::{
    cap_lexicon, load_lexicon, read_lexicon, Label, LexiconPair, DEFAULT_LEXICON_CAP,
};
pub use metrics::{
    binary_metrics, f1_score, fractional_ranks, mean_std, select_threshold, spearman,
    BinaryMetrics, MetricError, ThresholdPolicy,
};
pub use report::{
    binary_report, evaluate_binary, evaluate_graded, graded_report, predict, AggregateReport,
    EvalReport, Predictions,
};
pub use split::{
    load_split_dir, make_lexical_split, make_random_split, vocabulary, DatasetSplit, SplitKind,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{0}")]
    Split(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

impl EvalError {
    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        EvalError::Parse {
            line,
            reason: reason.into(),
        }
    }
}
