use serde::{Deserialize, Serialize};

use super::data::{Gold, ScoredPair, TaskKind};
use super::metrics::{binary_metrics, mean_std, spearman, MetricError, ThresholdPolicy};
use crate::model::ModelBundle;

/// Metrics for one evaluated dataset. Keys are fixed; fields that do not
/// apply to the task serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: TaskKind,
    pub rho: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub threshold: Option<f64>,
    pub n_scored: usize,
    pub n_skipped: usize,
    pub seed: Option<u64>,
}

impl EvalReport {
    /// The headline number: rho for graded tasks, F1 for binary ones.
    pub fn primary_metric(&self) -> Option<f64> {
        match self.task {
            TaskKind::Graded => self.rho,
            TaskKind::Binary => self.f1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Per-seed reports plus mean and standard deviation of the primary metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub task: TaskKind,
    pub metric: String,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub n_runs: usize,
    pub runs: Vec<EvalReport>,
}

impl AggregateReport {
    /// Aggregates over runs whose primary metric is defined.
    pub fn from_runs(task: TaskKind, runs: Vec<EvalReport>) -> Self {
        let values: Vec<f64> = runs.iter().filter_map(EvalReport::primary_metric).collect();
        let (mean, std) = if values.is_empty() {
            (None, None)
        } else {
            let (m, s) = mean_std(&values);
            (Some(m), Some(s))
        };
        AggregateReport {
            task,
            metric: match task {
                TaskKind::Graded => "rho".into(),
                TaskKind::Binary => "f1".into(),
            },
            mean,
            std,
            n_runs: runs.len(),
            runs,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Model scores for the in-vocabulary pairs of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictions {
    pub scores: Vec<f64>,
    pub gold: Vec<Gold>,
    pub skipped: usize,
}

pub fn predict(bundle: &ModelBundle, pairs: &[ScoredPair]) -> Predictions {
    let keys: Vec<(&str, &str)> = pairs
        .iter()
        .map(|p| (p.word1.as_str(), p.word2.as_str()))
        .collect();
    let scored = bundle.score_pairs(&keys);
    let mut out = Predictions {
        scores: Vec::with_capacity(pairs.len()),
        gold: Vec::with_capacity(pairs.len()),
        skipped: 0,
    };
    for (score, pair) in scored.into_iter().zip(pairs) {
        match score {
            Some(s) => {
                out.scores.push(s);
                out.gold.push(pair.gold);
            }
            None => out.skipped += 1,
        }
    }
    out
}

impl Predictions {
    pub fn gold_values(&self, max_score: f64) -> Vec<f64> {
        self.gold.iter().map(|g| g.target(max_score)).collect()
    }

    pub fn gold_labels(&self) -> Vec<bool> {
        self.gold
            .iter()
            .map(|g| match g {
                Gold::Binary(b) => *b,
                Gold::Graded(v) => *v > 0.0,
            })
            .collect()
    }

    /// Spearman's rho, `None` when it is undefined (fewer than two scored
    /// pairs or a constant side).
    pub fn rho(&self) -> Option<f64> {
        spearman(&self.scores, &self.gold_values(1.0)).ok()
    }
}

pub fn graded_report(preds: &Predictions) -> EvalReport {
    EvalReport {
        task: TaskKind::Graded,
        rho: preds.rho(),
        precision: None,
        recall: None,
        f1: None,
        threshold: None,
        n_scored: preds.scores.len(),
        n_skipped: preds.skipped,
        seed: None,
    }
}

pub fn binary_report(
    preds: &Predictions,
    policy: &ThresholdPolicy,
) -> Result<EvalReport, MetricError> {
    let threshold = policy.resolve()?;
    let m = binary_metrics(&preds.scores, &preds.gold_labels(), threshold)?;
    Ok(EvalReport {
        task: TaskKind::Binary,
        rho: None,
        precision: Some(m.precision),
        recall: Some(m.recall),
        f1: Some(m.f1),
        threshold: Some(threshold),
        n_scored: preds.scores.len(),
        n_skipped: preds.skipped,
        seed: None,
    })
}

pub fn evaluate_graded(bundle: &ModelBundle, pairs: &[ScoredPair]) -> EvalReport {
    graded_report(&predict(bundle, pairs))
}

/// Binary evaluation on `test`. With `TuneOnDev`, the dev predictions the
/// caller supplies fix the threshold before the test set is scored.
pub fn evaluate_binary(
    bundle: &ModelBundle,
    test: &[ScoredPair],
    policy: &ThresholdPolicy,
) -> Result<EvalReport, MetricError> {
    binary_report(&predict(bundle, test), policy)
}
