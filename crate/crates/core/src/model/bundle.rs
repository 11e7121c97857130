use rand::rngs::mock::StepRng;
use rayon::prelude::*;

use super::{forward, Mode, ModelError, ModelParams};
use crate::embeddings::EmbeddingTable;
use crate::sparse::{pair_features, SpacePair};

/// A trained network together with the resources it reads at scoring time.
#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub params: ModelParams,
    pub embeddings: EmbeddingTable,
    pub spaces: Option<SpacePair>,
}

impl ModelBundle {
    pub fn new(
        params: ModelParams,
        embeddings: EmbeddingTable,
        spaces: Option<SpacePair>,
    ) -> Result<Self, ModelError> {
        if embeddings.dim() != params.dims.input {
            return Err(ModelError::Shape(format!(
                "embeddings have {} components, model expects {}",
                embeddings.dim(),
                params.dims.input
            )));
        }
        match (params.dims.sdf, spaces.is_some()) {
            (true, false) => {
                return Err(ModelError::Shape(
                    "model needs sparse spaces for pair features".into(),
                ))
            }
            (false, true) => {
                return Err(ModelError::Shape(
                    "model was trained without pair features".into(),
                ))
            }
            _ => {}
        }
        Ok(ModelBundle {
            params,
            embeddings,
            spaces,
        })
    }

    pub fn max_score(&self) -> f64 {
        self.params.max_score
    }

    /// Eval-mode score in `(0, S)`, or `None` when either word has no
    /// embedding.
    pub fn score_pair(&self, word1: &str, word2: &str) -> Option<f64> {
        let e1 = self.embeddings.lookup(word1)?;
        let e2 = self.embeddings.lookup(word2)?;
        let features = self.spaces.as_ref().map(|s| pair_features(s, word1, word2));
        // eval mode never draws from the rng
        let mut rng = StepRng::new(0, 0);
        let trace = forward(
            &self.params,
            e1,
            e2,
            features.as_ref().map(|f| f.as_slice()),
            Mode::Eval,
            &mut rng,
        )
        .expect("bundle shapes are validated at construction");
        Some(trace.y)
    }

    /// Scores many pairs in parallel; output order matches input order.
    pub fn score_pairs<S: AsRef<str> + Sync>(&self, pairs: &[(S, S)]) -> Vec<Option<f64>> {
        pairs
            .par_iter()
            .map(|(a, b)| self.score_pair(a.as_ref(), b.as_ref()))
            .collect()
    }
}
