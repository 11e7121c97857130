use rand::Rng;

use super::params::ModelParams;
use super::{sigmoid, Mode, ModelError};
use crate::sparse::FEATURE_COUNT;

/// Smallest and largest values the output sigmoid may take, so that the
/// scaled score stays strictly inside `(0, S)` even when the sigmoid
/// saturates in floating point.
const SIGMOID_FLOOR: f64 = f64::MIN_POSITIVE;
const SIGMOID_CEIL: f64 = 1.0 - f64::EPSILON / 2.0;

/// Every intermediate activation of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace {
    /// Inverted-dropout scales applied to each input (`0` or `1/keep`);
    /// `None` in eval mode.
    pub mask1: Option<Vec<f64>>,
    pub mask2: Option<Vec<f64>>,
    /// Embeddings after dropout.
    pub input1: Vec<f64>,
    pub input2: Vec<f64>,
    pub gate1: Vec<f64>,
    pub gate2: Vec<f64>,
    /// `input1 ⊙ gate2` and `input2 ⊙ gate1`.
    pub gated1: Vec<f64>,
    pub gated2: Vec<f64>,
    pub mapped1: Vec<f64>,
    pub mapped2: Vec<f64>,
    pub product: Vec<f64>,
    pub features: Option<Vec<f64>>,
    pub hidden: Vec<f64>,
    /// `W_y h + b_y`, before the slope.
    pub logit: f64,
    /// `slope * logit`
    pub z: f64,
    pub sigma: f64,
    pub y: f64,
}

fn dropout<R: Rng + ?Sized>(x: &[f64], keep: f64, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let scale = 1.0 / keep;
    let mask: Vec<f64> = x
        .iter()
        .map(|_| if rng.gen::<f64>() < keep { scale } else { 0.0 })
        .collect();
    let out = x.iter().zip(&mask).map(|(v, m)| v * m).collect();
    (out, mask)
}

fn affine(layer: &super::params::Dense, x: &[f64]) -> Vec<f64> {
    let mut out = layer.bias.clone();
    layer.weight.matvec_add(x, &mut out);
    out
}

/// Runs the network on one embedding pair.
///
/// In [`Mode::Train`] each input gets an independent inverted-dropout mask
/// before anything else; gates are computed from the dropped inputs. Eval
/// mode never touches `rng`.
pub fn forward<R: Rng + ?Sized>(
    params: &ModelParams,
    w1: &[f64],
    w2: &[f64],
    features: Option<&[f64]>,
    mode: Mode,
    rng: &mut R,
) -> Result<ForwardTrace, ModelError> {
    let dims = params.dims;
    for w in [w1, w2] {
        if w.len() != dims.input {
            return Err(ModelError::Shape(format!(
                "embedding has {} components, model expects {}",
                w.len(),
                dims.input
            )));
        }
    }
    match (dims.sdf, features) {
        (true, None) => return Err(ModelError::Shape("model expects pair features".into())),
        (false, Some(_)) => {
            return Err(ModelError::Shape(
                "model was built without pair features".into(),
            ))
        }
        (true, Some(x)) if x.len() != FEATURE_COUNT => {
            return Err(ModelError::Shape(format!(
                "expected {FEATURE_COUNT} pair features, got {}",
                x.len()
            )))
        }
        _ => {}
    }

    let (input1, input2, mask1, mask2) = match mode {
        Mode::Eval => (w1.to_vec(), w2.to_vec(), None, None),
        Mode::Train { keep } => {
            if !(keep > 0.0 && keep <= 1.0) {
                return Err(ModelError::Shape(format!(
                    "dropout keep probability {keep} outside (0, 1]"
                )));
            }
            let (a, ma) = dropout(w1, keep, rng);
            let (b, mb) = dropout(w2, keep, rng);
            (a, b, Some(ma), Some(mb))
        }
    };

    let gate1: Vec<f64> = affine(&params.gate1, &input1)
        .into_iter()
        .map(sigmoid)
        .collect();
    let gate2: Vec<f64> = affine(&params.gate2, &input2)
        .into_iter()
        .map(sigmoid)
        .collect();
    let gated1: Vec<f64> = input1.iter().zip(&gate2).map(|(a, g)| a * g).collect();
    let gated2: Vec<f64> = input2.iter().zip(&gate1).map(|(a, g)| a * g).collect();

    let mapped1: Vec<f64> = affine(&params.map1, &gated1)
        .into_iter()
        .map(f64::tanh)
        .collect();
    let mapped2: Vec<f64> = affine(&params.map2, &gated2)
        .into_iter()
        .map(f64::tanh)
        .collect();
    let product: Vec<f64> = mapped1.iter().zip(&mapped2).map(|(a, b)| a * b).collect();

    let mut pre_hidden = affine(&params.compose, &product);
    if let (Some(w_x), Some(x)) = (&params.feature_weight, features) {
        w_x.matvec_add(x, &mut pre_hidden);
    }
    let hidden: Vec<f64> = pre_hidden.into_iter().map(f64::tanh).collect();

    let logit = super::matrix::dot(&params.output_weight, &hidden) + params.output_bias;
    let z = params.slope * logit;
    let sigma = sigmoid(z).clamp(SIGMOID_FLOOR, SIGMOID_CEIL);
    let y = params.max_score * sigma;

    Ok(ForwardTrace {
        mask1,
        mask2,
        input1,
        input2,
        gate1,
        gate2,
        gated1,
        gated2,
        mapped1,
        mapped2,
        product,
        features: features.map(<[f64]>::to_vec),
        hidden,
        logit,
        z,
        sigma,
        y,
    })
}
