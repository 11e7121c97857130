use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use log::{info, warn};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::adadelta::OptimizerState;
use super::loss::{hinge_loss, mse_loss};
use super::{TrainConfig, TrainError};
use crate::embeddings::EmbeddingTable;
use crate::eval::{
    binary_metrics, select_threshold, spearman, Gold, Label, LexiconPair, ScoredPair, TaskKind,
};
use crate::model::{accumulate_gradients, forward, Mode, ModelParams};
use crate::sparse::{pair_features, SpacePair, FEATURE_COUNT};

const TRAIN_STREAM: u64 = 1;
const PRETRAIN_STREAM: u64 = 2;

/// The frozen resources a run reads word vectors and pair features from.
#[derive(Debug, Clone, Copy)]
pub struct Inputs<'a> {
    pub embeddings: &'a EmbeddingTable,
    pub spaces: Option<&'a SpacePair>,
}

/// A pair resolved to embedding rows, with features precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub left: usize,
    pub right: usize,
    pub features: Option<[f64; FEATURE_COUNT]>,
    pub gold: Gold,
}

impl<'a> Inputs<'a> {
    pub fn new(embeddings: &'a EmbeddingTable, spaces: Option<&'a SpacePair>) -> Self {
        Inputs { embeddings, spaces }
    }

    fn example(&self, w1: &str, w2: &str, gold: Gold) -> Option<Example> {
        let left = self.embeddings.index_of(w1)?;
        let right = self.embeddings.index_of(w2)?;
        let features = self.spaces.map(|s| pair_features(s, w1, w2).0);
        Some(Example {
            left,
            right,
            features,
            gold,
        })
    }

    /// Resolves pairs against the embedding table. Returns the usable
    /// examples and the number skipped for missing words.
    pub fn prepare(&self, pairs: &[ScoredPair]) -> (Vec<Example>, usize) {
        let examples: Vec<Example> = pairs
            .iter()
            .filter_map(|p| self.example(&p.word1, &p.word2, p.gold))
            .collect();
        let skipped = pairs.len() - examples.len();
        (examples, skipped)
    }

    pub fn prepare_lexicon(&self, pairs: &[LexiconPair]) -> (Vec<Example>, usize) {
        let examples: Vec<Example> = pairs
            .iter()
            .filter_map(|p| {
                self.example(&p.word1, &p.word2, Gold::Binary(p.label == Label::Positive))
            })
            .collect();
        let skipped = pairs.len() - examples.len();
        (examples, skipped)
    }

    fn run<R: Rng + ?Sized>(
        &self,
        params: &ModelParams,
        ex: &Example,
        mode: Mode,
        rng: &mut R,
    ) -> Result<crate::model::ForwardTrace, TrainError> {
        Ok(forward(
            params,
            self.embeddings.vector(ex.left),
            self.embeddings.vector(ex.right),
            ex.features.as_ref().map(|f| f.as_slice()),
            mode,
            rng,
        )?)
    }

    /// Eval-mode scores for a list of examples.
    pub fn predict(
        &self,
        params: &ModelParams,
        examples: &[Example],
    ) -> Result<Vec<f64>, TrainError> {
        let mut rng = rand::rngs::mock::StepRng::new(0, 0);
        examples
            .iter()
            .map(|ex| self.run(params, ex, Mode::Eval, &mut rng).map(|t| t.y))
            .collect()
    }
}

/// Dev metric: Spearman's rho for graded data, best-threshold F1 for binary
/// data. `None` when undefined. The second value is the tuned threshold.
pub fn dev_metric(
    task: TaskKind,
    scores: &[f64],
    examples: &[Example],
    max_score: f64,
) -> (Option<f64>, Option<f64>) {
    match task {
        TaskKind::Graded => {
            let gold: Vec<f64> = examples.iter().map(|e| e.gold.target(max_score)).collect();
            (spearman(scores, &gold).ok(), None)
        }
        TaskKind::Binary => {
            let gold: Vec<bool> = examples
                .iter()
                .map(|e| e.gold.target(max_score) > 0.0)
                .collect();
            match select_threshold(scores, &gold) {
                Ok(t) => (binary_metrics(scores, &gold, t).ok().map(|m| m.f1), Some(t)),
                Err(_) => (None, None),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: u32,
    /// Mean per-example training loss over the epoch (train mode).
    pub train_loss: f64,
    pub dev_metric: Option<f64>,
    pub improved: bool,
    pub timestamp: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingLog {
    pub header: Vec<String>,
    pub epochs: Vec<EpochRecord>,
}

impl TrainingLog {
    /// One `key=value` line per event, tab separated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.header {
            out.push_str(line);
            out.push('\n');
        }
        for r in &self.epochs {
            let dev = r.dev_metric.map_or("NA".to_string(), |v| v.to_string());
            let _ = write!(
                out,
                "epoch={}\ttrain_loss={}\tdev_metric={}\timproved={}",
                r.epoch, r.train_loss, dev, r.improved
            );
            if let Some(ts) = r.timestamp {
                let _ = write!(out, "\ttimestamp={ts}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    /// Parameters from the epoch with the best dev metric.
    pub params: ModelParams,
    pub best_epoch: u32,
    pub best_dev_metric: Option<f64>,
    /// Threshold tuned on dev at the best epoch (binary tasks).
    pub dev_threshold: Option<f64>,
    pub log: TrainingLog,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// One shuffled pass over `examples` with one AdaDelta step per batch.
/// `loss` maps `(y, target)` to `(loss, dL/dy)`. Returns the summed loss.
#[allow(clippy::too_many_arguments)]
pub fn train_epoch<L>(
    params: &mut ModelParams,
    state: &mut OptimizerState,
    inputs: &Inputs,
    examples: &[Example],
    config: &TrainConfig,
    rng: &mut ChaCha8Rng,
    epoch: u32,
    loss: L,
) -> Result<f64, TrainError>
where
    L: Fn(f64, f64) -> (f64, f64),
{
    let optimizer = config.optimizer();
    let mode = Mode::Train {
        keep: config.dropout_keep,
    };
    let mut order: Vec<usize> = (0..examples.len()).collect();
    order.shuffle(rng);

    let mut grads = params.zeros_like();
    let mut total = 0.0;
    for (batch, chunk) in order.chunks(config.batch_size).enumerate() {
        grads.fill_zero();
        let mut batch_loss = 0.0;
        for &i in chunk {
            let ex = &examples[i];
            let trace = inputs.run(params, ex, mode, rng)?;
            let (l, dl_dy) = loss(trace.y, ex.gold.target(params.max_score));
            batch_loss += l;
            accumulate_gradients(params, &trace, dl_dy, &mut grads);
        }
        if !batch_loss.is_finite() || !grads.is_finite() {
            return Err(TrainError::NonFinite {
                epoch,
                batch: batch + 1,
            });
        }
        optimizer.step(params, &grads, state);
        total += batch_loss;
    }
    Ok(total)
}

/// Supervised training with the squared-error loss and early stopping on the
/// dev metric. The parameters of the best dev epoch are returned.
pub fn train(
    initial: ModelParams,
    inputs: &Inputs,
    train_set: &[Example],
    dev_set: &[Example],
    task: TaskKind,
    config: &TrainConfig,
    seed: u64,
) -> Result<TrainOutcome, TrainError> {
    config.validate()?;
    if train_set.is_empty() || dev_set.is_empty() {
        return Err(TrainError::EmptyData(
            "training and dev sets must be nonempty".into(),
        ));
    }
    for ex in train_set.iter().chain(dev_set) {
        let target = ex.gold.target(config.max_score);
        if !(0.0..=config.max_score).contains(&target) {
            return Err(TrainError::EmptyData(format!(
                "gold score {target} outside [0, {}]",
                config.max_score
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(TRAIN_STREAM);
    let mut params = initial;
    let mut state = OptimizerState::new(&params);
    let mut log = TrainingLog::default();

    let mut best: Option<(ModelParams, u32, Option<f64>, Option<f64>)> = None;
    let mut best_metric = f64::NEG_INFINITY;
    let mut since_best = 0u32;

    for epoch in 1..=config.max_epochs {
        let loss_sum = train_epoch(
            &mut params,
            &mut state,
            inputs,
            train_set,
            config,
            &mut rng,
            epoch,
            mse_loss,
        )?;
        let dev_scores = inputs.predict(&params, dev_set)?;
        let (metric, threshold) = dev_metric(task, &dev_scores, dev_set, config.max_score);

        let improved = match (&best, metric) {
            (None, _) => true,
            (Some(_), Some(m)) => m > best_metric,
            (Some(_), None) => false,
        };
        if improved {
            best_metric = metric.unwrap_or(f64::NEG_INFINITY);
            best = Some((params.clone(), epoch, metric, threshold));
            since_best = 0;
        } else {
            since_best += 1;
        }
        log.epochs.push(EpochRecord {
            epoch,
            train_loss: loss_sum / train_set.len() as f64,
            dev_metric: metric,
            improved,
            timestamp: config.log_timestamps.then(now),
        });
        if since_best >= config.patience {
            info!("early stop at epoch {epoch}");
            break;
        }
    }

    let (params, best_epoch, best_dev_metric, dev_threshold) =
        best.expect("at least one epoch runs");
    Ok(TrainOutcome {
        params,
        best_epoch,
        best_dev_metric,
        dev_threshold,
        log,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PretrainSummary {
    pub used: usize,
    pub skipped_oov: usize,
    /// Mean hinge loss over the pass (train mode).
    pub mean_loss: f64,
}

/// One shuffled pass over binary lexicon pairs with the margin hinge loss.
/// Positives target `S`, negatives `0`. Pairs with a word missing from the
/// embeddings are skipped.
pub fn pretrain(
    params: &mut ModelParams,
    inputs: &Inputs,
    lexicon: &[LexiconPair],
    config: &TrainConfig,
    seed: u64,
) -> Result<PretrainSummary, TrainError> {
    config.validate()?;
    let (examples, skipped_oov) = inputs.prepare_lexicon(lexicon);
    if skipped_oov > 0 {
        info!("pre-training skipped {skipped_oov} lexicon pairs with unknown words");
    }
    if examples.is_empty() {
        warn!("no usable lexicon pairs; skipping pre-training");
        return Ok(PretrainSummary {
            used: 0,
            skipped_oov,
            mean_loss: 0.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(PRETRAIN_STREAM);
    let mut state = OptimizerState::new(params);
    let (s, r) = (config.max_score, config.margin);
    let total = train_epoch(
        params,
        &mut state,
        inputs,
        &examples,
        config,
        &mut rng,
        0,
        |y, gold| hinge_loss(y, gold, s, r),
    )?;
    Ok(PretrainSummary {
        used: examples.len(),
        skipped_oov,
        mean_loss: total / examples.len() as f64,
    })
}
