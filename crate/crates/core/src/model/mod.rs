//! The gated directional similarity network.
//!
//! For a pair `(w1, w2)` of frozen embeddings:
//!
//! ```text
//! g1 = σ(W_g1 w1 + b_g1)          g2 = σ(W_g2 w2 + b_g2)
//! w̃1 = w1 ⊙ g2                     w̃2 = w2 ⊙ g1
//! m1 = tanh(W_m1 w̃1 + b_m1)       m2 = tanh(W_m2 w̃2 + b_m2)
//! d  = m1 ⊙ m2
//! h  = tanh(W_h d [+ W_x x] + b_h)
//! y  = S · σ(a (W_y h + b_y))
//! ```
//!
//! `x` is the optional 10-vector of corpus features and `S` the top of the
//! score scale. Separate mapping matrices for the two positions let the
//! score differ when the words are swapped.

mod backward;
mod bundle;
mod checkpoint;
mod forward;
mod matrix;
mod params;

use thiserror::Error;

pub use backward::{accumulate_gradients, backward};
pub use bundle::ModelBundle;
pub use checkpoint::{Checkpoint, CheckpointMeta, FileRef, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use forward::{forward, ForwardTrace};
pub use matrix::{dot, Matrix};
pub use params::{Dense, Dims, Gradients, ModelParams};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Checkpoint(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Inverted dropout on both embeddings with the given keep probability.
    Train {
        keep: f64,
    },
    Eval,
}

/// Logistic function, evaluated without overflow for large `|x|`.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}
