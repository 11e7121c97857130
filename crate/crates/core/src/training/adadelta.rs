use crate::model::{Gradients, ModelParams};

/// Running averages kept by AdaDelta, one buffer per parameter tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    /// E[g²]
    pub sq_grad: ModelParams,
    /// E[Δ²]
    pub sq_update: ModelParams,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaDelta {
    pub learning_rate: f64,
    pub rho: f64,
    pub eps: f64,
}

impl Default for AdaDelta {
    fn default() -> Self {
        AdaDelta {
            learning_rate: 1.0,
            rho: 0.95,
            eps: 1e-6,
        }
    }
}

impl OptimizerState {
    pub fn new(params: &ModelParams) -> Self {
        OptimizerState {
            sq_grad: params.zeros_like(),
            sq_update: params.zeros_like(),
        }
    }
}

/// One AdaDelta update of a single coordinate. Returns the new
/// `(theta, E[g²], E[Δ²])`.
#[inline]
pub fn adadelta_scalar(
    opt: &AdaDelta,
    theta: f64,
    g: f64,
    sq_grad: f64,
    sq_update: f64,
) -> (f64, f64, f64) {
    let sq_grad = opt.rho * sq_grad + (1.0 - opt.rho) * g * g;
    let delta = -((sq_update + opt.eps).sqrt() / (sq_grad + opt.eps).sqrt()) * g;
    let sq_update = opt.rho * sq_update + (1.0 - opt.rho) * delta * delta;
    (theta + opt.learning_rate * delta, sq_grad, sq_update)
}

impl AdaDelta {
    pub fn step(&self, params: &mut ModelParams, grads: &Gradients, state: &mut OptimizerState) {
        let p = params.tensors_mut();
        let g = grads.tensors();
        let eg = state.sq_grad.tensors_mut();
        let ed = state.sq_update.tensors_mut();
        for ((((_, p), (_, g)), (_, eg)), (_, ed)) in p.into_iter().zip(g).zip(eg).zip(ed) {
            for i in 0..p.len() {
                let (theta, sg, su) = adadelta_scalar(self, p[i], g[i], eg[i], ed[i]);
                p[i] = theta;
                eg[i] = sg;
                ed[i] = su;
            }
        }
    }
}
