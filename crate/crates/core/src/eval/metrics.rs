use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("prediction and gold lists differ in length ({pred} vs {gold})")]
    LengthMismatch { pred: usize, gold: usize },
    #[error("need at least 2 items, got {0}")]
    TooShort(usize),
    #[error("correlation undefined: {0} values are constant")]
    Constant(&'static str),
}

/// 1-based ranks with ties sharing the average of the positions they span.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64, MetricError> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 {
        return Err(MetricError::Constant("predicted"));
    }
    if syy == 0.0 {
        return Err(MetricError::Constant("gold"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman's rho: Pearson correlation of tie-averaged ranks.
pub fn spearman(pred: &[f64], gold: &[f64]) -> Result<f64, MetricError> {
    if pred.len() != gold.len() {
        return Err(MetricError::LengthMismatch {
            pred: pred.len(),
            gold: gold.len(),
        });
    }
    if pred.len() < 2 {
        return Err(MetricError::TooShort(pred.len()));
    }
    pearson(&fractional_ranks(pred), &fractional_ranks(gold))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub threshold: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

/// Precision, recall and F1 when `score >= threshold` predicts positive.
/// Precision is 0 with no positive predictions and recall is 0 with no gold
/// positives.
pub fn binary_metrics(
    pred: &[f64],
    gold: &[bool],
    threshold: f64,
) -> Result<BinaryMetrics, MetricError> {
    if pred.len() != gold.len() {
        return Err(MetricError::LengthMismatch {
            pred: pred.len(),
            gold: gold.len(),
        });
    }
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (&score, &label) in pred.iter().zip(gold) {
        match (score >= threshold, label) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let precision = if tp + fp > 0 {
        tp as f64 / (tp + fp) as f64
    } else {
        0.0
    };
    let recall = if tp + fn_ > 0 {
        tp as f64 / (tp + fn_) as f64
    } else {
        0.0
    };
    Ok(BinaryMetrics {
        precision,
        recall,
        f1: f1_score(precision, recall),
        threshold,
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
    })
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// Threshold maximizing F1 on dev scores. Candidates are the lowest score
/// (everything positive) and the midpoints between consecutive distinct
/// scores; ties go to the lowest threshold.
pub fn select_threshold(dev_pred: &[f64], dev_gold: &[bool]) -> Result<f64, MetricError> {
    if dev_pred.len() != dev_gold.len() {
        return Err(MetricError::LengthMismatch {
            pred: dev_pred.len(),
            gold: dev_gold.len(),
        });
    }
    if dev_pred.is_empty() {
        return Err(MetricError::TooShort(0));
    }
    let mut sorted = dev_pred.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut candidates = vec![sorted[0]];
    candidates.extend(sorted.windows(2).map(|w| (w[0] + w[1]) / 2.0));

    let mut best = (f64::NEG_INFINITY, candidates[0]);
    for t in candidates {
        let f1 = binary_metrics(dev_pred, dev_gold, t)?.f1;
        if f1 > best.0 {
            best = (f1, t);
        }
    }
    Ok(best.1)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdPolicy {
    /// Pick the F1-maximizing threshold on these dev predictions.
    TuneOnDev {
        scores: Vec<f64>,
        gold: Vec<bool>,
    },
    Fixed(f64),
}

impl ThresholdPolicy {
    pub fn resolve(&self) -> Result<f64, MetricError> {
        match self {
            ThresholdPolicy::TuneOnDev { scores, gold } => select_threshold(scores, gold),
            ThresholdPolicy::Fixed(t) => Ok(*t),
        }
    }
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
