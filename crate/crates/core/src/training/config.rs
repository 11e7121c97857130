use super::adadelta::AdaDelta;
use super::TrainError;

/// Optimization settings for one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub adadelta_rho: f64,
    pub adadelta_eps: f64,
    /// Probability of keeping an embedding component under dropout.
    pub dropout_keep: f64,
    /// Margin `R` of the pre-training hinge loss.
    pub margin: f64,
    pub max_epochs: u32,
    /// Epochs without a dev improvement before training stops.
    pub patience: u32,
    pub batch_size: usize,
    pub seeds: Vec<u64>,
    /// Top of the score scale, `S`.
    pub max_score: f64,
    /// Add a wall-clock timestamp to each log line. Off by default so logs
    /// are reproducible byte for byte.
    pub log_timestamps: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1.0,
            adadelta_rho: 0.95,
            adadelta_eps: 1e-6,
            dropout_keep: 0.5,
            margin: 1.0,
            max_epochs: 300,
            patience: 10,
            batch_size: 32,
            seeds: (1..=10).collect(),
            max_score: 10.0,
            log_timestamps: false,
        }
    }
}

impl TrainConfig {
    pub fn optimizer(&self) -> AdaDelta {
        AdaDelta {
            learning_rate: self.learning_rate,
            rho: self.adadelta_rho,
            eps: self.adadelta_eps,
        }
    }

    /// Every violated constraint, not just the first. Comparisons are
    /// written negated so NaN fails them too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.dropout_keep > 0.0 && self.dropout_keep <= 1.0) {
            out.push(format!(
                "dropout_keep must be in (0, 1], got {}",
                self.dropout_keep
            ));
        }
        if !(self.max_score > 0.0 && self.max_score.is_finite()) {
            out.push(format!(
                "max_score must be positive, got {}",
                self.max_score
            ));
        }
        if !(self.margin < self.max_score / 2.0) {
            out.push(format!(
                "margin {} must be below half the max score ({})",
                self.margin,
                self.max_score / 2.0
            ));
        }
        if self.patience < 1 {
            out.push("patience must be at least 1".into());
        }
        if self.max_epochs < 1 {
            out.push("max_epochs must be at least 1".into());
        }
        if self.batch_size < 1 {
            out.push("batch_size must be at least 1".into());
        }
        if self.seeds.is_empty() {
            out.push("at least one seed is required".into());
        }
        if !(0.0..1.0).contains(&self.adadelta_rho) {
            out.push(format!(
                "adadelta_rho must be in [0, 1), got {}",
                self.adadelta_rho
            ));
        }
        if !(self.adadelta_eps > 0.0) {
            out.push(format!(
                "adadelta_eps must be positive, got {}",
                self.adadelta_eps
            ));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            out.push(format!(
                "learning_rate must be nonnegative, got {}",
                self.learning_rate
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<(), TrainError> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(TrainError::Config(problems.join("; ")))
        }
    }
}
