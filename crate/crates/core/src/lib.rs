//! Graded lexical entailment scoring.
//!
//! A small supervised network reads frozen general-purpose word embeddings
//! for a pair `(hyponym, hypernym)` and predicts how strongly the first word
//! is a type of the second, on a bounded `[0, S]` scale. The pieces:
//!
//! - [`embeddings`]: loading and serving the frozen embedding table.
//! - [`sparse`]: PPMI co-occurrence spaces (window and dependency contexts)
//!   and the ten directional pair features fed to the hidden layer.
//! - [`model`]: parameters, the gated forward pass, analytic gradients and
//!   checkpoints.
//! - [`training`]: squared-error and margin hinge losses, AdaDelta, the
//!   one-pass lexicon pre-training, and the early-stopped epoch loop.
//! - [`eval`]: dataset and lexicon loaders, splits, Spearman's rho and
//!   precision/recall/F1 with dev-tuned thresholds.
//! - [`cli`]: run configuration and the commands behind the `lexent` binary.
//!
//! See `examples/` for one runnable program per capability.

pub mod archive;
pub mod cli;
pub mod embeddings;
pub mod eval;
pub mod model;
pub mod sparse;
pub mod training;

pub use embeddings::{EmbeddingTable, LoadOptions};
pub use eval::{EvalReport, ScoredPair};
pub use model::{ForwardTrace, Mode, ModelBundle, ModelParams};
pub use sparse::{PairFeatures, SparseSpace};
pub use training::TrainConfig;

/// SHA-256 of a file's bytes, hex encoded.
pub fn fingerprint_file(path: &std::path::Path) -> std::io::Result<String> {
    use sha2::{Digest, Sha256};
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
