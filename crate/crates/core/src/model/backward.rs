use super::forward::ForwardTrace;
use super::params::{Gradients, ModelParams};

/// Adds the gradient of a scalar loss with respect to every trainable
/// parameter into `grads`, given `dL/dy` for the pass recorded in `trace`.
///
/// The inputs are frozen embeddings and receive no gradient. Gates are
/// differentiated with respect to the dropped inputs actually used.
pub fn accumulate_gradients(
    params: &ModelParams,
    trace: &ForwardTrace,
    dl_dy: f64,
    grads: &mut Gradients,
) {
    if dl_dy == 0.0 {
        return;
    }
    let s = trace.sigma;
    let dl_dz = dl_dy * params.max_score * s * (1.0 - s);
    grads.slope += dl_dz * trace.logit;
    let dl_dlogit = dl_dz * params.slope;
    grads.output_bias += dl_dlogit;

    // hidden = tanh(W_h d + W_x x + b_h)
    let d_pre_hidden: Vec<f64> = trace
        .hidden
        .iter()
        .zip(&params.output_weight)
        .map(|(h, w)| dl_dlogit * w * (1.0 - h * h))
        .collect();
    for (g, h) in grads.output_weight.iter_mut().zip(&trace.hidden) {
        *g += dl_dlogit * h;
    }
    grads
        .compose
        .weight
        .add_outer(&d_pre_hidden, &trace.product);
    for (g, d) in grads.compose.bias.iter_mut().zip(&d_pre_hidden) {
        *g += d;
    }
    if let (Some(gw), Some(x)) = (&mut grads.feature_weight, &trace.features) {
        gw.add_outer(&d_pre_hidden, x);
    }

    let mut d_product = vec![0.0; trace.product.len()];
    params
        .compose
        .weight
        .transpose_matvec_add(&d_pre_hidden, &mut d_product);

    // product = mapped1 ⊙ mapped2, mapped_i = tanh(W_mi gated_i + b_mi)
    let d_pre_map1: Vec<f64> = d_product
        .iter()
        .zip(trace.mapped1.iter().zip(&trace.mapped2))
        .map(|(dp, (m1, m2))| dp * m2 * (1.0 - m1 * m1))
        .collect();
    let d_pre_map2: Vec<f64> = d_product
        .iter()
        .zip(trace.mapped1.iter().zip(&trace.mapped2))
        .map(|(dp, (m1, m2))| dp * m1 * (1.0 - m2 * m2))
        .collect();
    grads.map1.weight.add_outer(&d_pre_map1, &trace.gated1);
    grads.map2.weight.add_outer(&d_pre_map2, &trace.gated2);
    for (g, d) in grads.map1.bias.iter_mut().zip(&d_pre_map1) {
        *g += d;
    }
    for (g, d) in grads.map2.bias.iter_mut().zip(&d_pre_map2) {
        *g += d;
    }

    let n = trace.input1.len();
    let mut d_gated1 = vec![0.0; n];
    let mut d_gated2 = vec![0.0; n];
    params
        .map1
        .weight
        .transpose_matvec_add(&d_pre_map1, &mut d_gated1);
    params
        .map2
        .weight
        .transpose_matvec_add(&d_pre_map2, &mut d_gated2);

    // gated1 = input1 ⊙ gate2, gated2 = input2 ⊙ gate1, gate_i = σ(W_gi input_i + b_gi)
    let d_pre_gate2: Vec<f64> = (0..n)
        .map(|k| d_gated1[k] * trace.input1[k] * trace.gate2[k] * (1.0 - trace.gate2[k]))
        .collect();
    let d_pre_gate1: Vec<f64> = (0..n)
        .map(|k| d_gated2[k] * trace.input2[k] * trace.gate1[k] * (1.0 - trace.gate1[k]))
        .collect();
    grads.gate1.weight.add_outer(&d_pre_gate1, &trace.input1);
    grads.gate2.weight.add_outer(&d_pre_gate2, &trace.input2);
    for (g, d) in grads.gate1.bias.iter_mut().zip(&d_pre_gate1) {
        *g += d;
    }
    for (g, d) in grads.gate2.bias.iter_mut().zip(&d_pre_gate2) {
        *g += d;
    }
}

/// Gradients of a single pass, in a fresh buffer.
pub fn backward(params: &ModelParams, trace: &ForwardTrace, dl_dy: f64) -> Gradients {
    let mut grads = params.zeros_like();
    accumulate_gradients(params, trace, dl_dy, &mut grads);
    grads
}
