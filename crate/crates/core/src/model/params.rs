use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::matrix::Matrix;
use crate::sparse::FEATURE_COUNT;

/// Layer sizes of a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    /// Embedding width.
    pub input: usize,
    /// Width of the two mapping layers.
    pub mapped: usize,
    /// Width of the composition (hidden) layer.
    pub hidden: usize,
    /// Whether the hidden layer also reads the 10 corpus features.
    pub sdf: bool,
}

impl Dims {
    pub fn new(input: usize, mapped: usize, hidden: usize, sdf: bool) -> Self {
        Dims {
            input,
            mapped,
            hidden,
            sdf,
        }
    }
}

/// Affine layer `W x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub weight: Matrix,
    pub bias: Vec<f64>,
}

impl Dense {
    fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            weight: Matrix::zeros(rows, cols),
            bias: vec![0.0; rows],
        }
    }
}

/// Every trainable weight of the network, plus the fixed output scale.
///
/// `gate1` reads word 1 and masks word 2; `gate2` reads word 2 and masks
/// word 1. The same layout doubles as a gradient buffer (see
/// [`ModelParams::zeros_like`]); the `max_score` of a gradient buffer is
/// carried along but never read.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub dims: Dims,
    pub max_score: f64,
    pub gate1: Dense,
    pub gate2: Dense,
    pub map1: Dense,
    pub map2: Dense,
    pub compose: Dense,
    pub feature_weight: Option<Matrix>,
    pub output_weight: Vec<f64>,
    pub output_bias: f64,
    pub slope: f64,
}

/// Gradient buffer with the same shape as [`ModelParams`].
pub type Gradients = ModelParams;

impl ModelParams {
    /// All-zero parameters (slope included). Mostly useful for tests.
    pub fn zeros(dims: Dims, max_score: f64) -> Self {
        ModelParams {
            dims,
            max_score,
            gate1: Dense::zeros(dims.input, dims.input),
            gate2: Dense::zeros(dims.input, dims.input),
            map1: Dense::zeros(dims.mapped, dims.input),
            map2: Dense::zeros(dims.mapped, dims.input),
            compose: Dense::zeros(dims.hidden, dims.mapped),
            feature_weight: dims.sdf.then(|| Matrix::zeros(dims.hidden, FEATURE_COUNT)),
            output_weight: vec![0.0; dims.hidden],
            output_bias: 0.0,
            slope: 0.0,
        }
    }

    /// Glorot-uniform weights, zero biases, slope 1. Deterministic in `seed`.
    pub fn init(dims: Dims, max_score: f64, seed: u64) -> Self {
        assert!(
            max_score > 0.0 && max_score.is_finite(),
            "max score must be positive"
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = Self::zeros(dims, max_score);
        p.gate1.weight = Matrix::glorot(dims.input, dims.input, &mut rng);
        p.gate2.weight = Matrix::glorot(dims.input, dims.input, &mut rng);
        p.map1.weight = Matrix::glorot(dims.mapped, dims.input, &mut rng);
        p.map2.weight = Matrix::glorot(dims.mapped, dims.input, &mut rng);
        p.compose.weight = Matrix::glorot(dims.hidden, dims.mapped, &mut rng);
        if dims.sdf {
            p.feature_weight = Some(Matrix::glorot(dims.hidden, FEATURE_COUNT, &mut rng));
        }
        p.output_weight = Matrix::glorot(1, dims.hidden, &mut rng).as_slice().to_vec();
        p.slope = 1.0;
        p
    }

    /// A zeroed buffer of the same shape.
    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.dims, self.max_score)
    }

    /// Named views of every trainable tensor, in a fixed order.
    pub fn tensors(&self) -> Vec<(&'static str, &[f64])> {
        let mut out: Vec<(&'static str, &[f64])> = vec![
            ("gate1.weight", self.gate1.weight.as_slice()),
            ("gate1.bias", &self.gate1.bias),
            ("gate2.weight", self.gate2.weight.as_slice()),
            ("gate2.bias", &self.gate2.bias),
            ("map1.weight", self.map1.weight.as_slice()),
            ("map1.bias", &self.map1.bias),
            ("map2.weight", self.map2.weight.as_slice()),
            ("map2.bias", &self.map2.bias),
            ("compose.weight", self.compose.weight.as_slice()),
            ("compose.bias", &self.compose.bias),
        ];
        if let Some(w) = &self.feature_weight {
            out.push(("features.weight", w.as_slice()));
        }
        out.push(("output.weight", &self.output_weight));
        out.push(("output.bias", std::slice::from_ref(&self.output_bias)));
        out.push(("output.slope", std::slice::from_ref(&self.slope)));
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<(&'static str, &mut [f64])> {
        let mut out: Vec<(&'static str, &mut [f64])> = vec![
            ("gate1.weight", self.gate1.weight.as_mut_slice()),
            ("gate1.bias", &mut self.gate1.bias),
            ("gate2.weight", self.gate2.weight.as_mut_slice()),
            ("gate2.bias", &mut self.gate2.bias),
            ("map1.weight", self.map1.weight.as_mut_slice()),
            ("map1.bias", &mut self.map1.bias),
            ("map2.weight", self.map2.weight.as_mut_slice()),
            ("map2.bias", &mut self.map2.bias),
            ("compose.weight", self.compose.weight.as_mut_slice()),
            ("compose.bias", &mut self.compose.bias),
        ];
        if let Some(w) = &mut self.feature_weight {
            out.push(("features.weight", w.as_mut_slice()));
        }
        out.push(("output.weight", &mut self.output_weight));
        out.push(("output.bias", std::slice::from_mut(&mut self.output_bias)));
        out.push(("output.slope", std::slice::from_mut(&mut self.slope)));
        out
    }

    pub fn num_trainable(&self) -> usize {
        self.tensors().iter().map(|(_, t)| t.len()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.tensors()
            .iter()
            .all(|(_, t)| t.iter().all(|v| v.is_finite()))
    }

    /// Sets every trainable entry to zero, keeping shapes.
    pub fn fill_zero(&mut self) {
        for (_, t) in self.tensors_mut() {
            t.fill(0.0);
        }
    }

    /// `self += other`, tensor by tensor.
    pub fn add_assign(&mut self, other: &ModelParams) {
        for ((_, dst), (_, src)) in self.tensors_mut().into_iter().zip(other.tensors()) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s;
            }
        }
    }
}
