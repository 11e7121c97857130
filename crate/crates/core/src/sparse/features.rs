use super::{SparseSpace, SparseVector};

pub const FEATURES_PER_SPACE: usize = 5;
pub const FEATURE_COUNT: usize = 2 * FEATURES_PER_SPACE;

/// The window space and the dependency space, in feature order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacePair {
    pub window: SparseSpace,
    pub dependency: SparseSpace,
}

/// Corpus features for a word pair `(w1, w2)`.
///
/// Layout, repeated for the window space (0..5) then the dependency space
/// (5..10): cosine, weighted cosine w1→w2, weighted cosine w2→w1, shared
/// context proportion w1→w2, shared context proportion w2→w1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairFeatures(pub [f64; FEATURE_COUNT]);

impl PairFeatures {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

fn sparse_dot(a: &SparseVector, b: &SparseVector) -> f64 {
    let (mut i, mut j, mut sum) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                sum += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

pub fn cosine(a: &SparseVector, b: &SparseVector) -> f64 {
    let na = sparse_dot(a, a).sqrt();
    let nb = sparse_dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (sparse_dot(a, b) / (na * nb)).clamp(0.0, 1.0)
}

/// Linear rank weights over the entries of `broad`: contexts sorted by
/// descending weight (ties by id) get `1 - (rank - 1) / |broad|`. Returned in
/// the same order as `broad`.
pub fn rank_weights(broad: &SparseVector) -> Vec<f64> {
    let n = broad.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        broad[y]
            .1
            .total_cmp(&broad[x].1)
            .then(broad[x].0.cmp(&broad[y].0))
    });
    let mut z = vec![0.0; n];
    for (rank0, &pos) in order.iter().enumerate() {
        z[pos] = 1.0 - rank0 as f64 / n as f64;
    }
    z
}

/// Directional cosine that only looks at the contexts of the broader term,
/// weighting each by its rank there.
pub fn weighted_cosine(narrow: &SparseVector, broad: &SparseVector) -> f64 {
    let z = rank_weights(broad);
    let (mut num, mut nn, mut nb) = (0.0, 0.0, 0.0);
    let mut i = 0;
    for (k, &(id, b)) in broad.iter().enumerate() {
        nb += z[k] * b * b;
        while i < narrow.len() && narrow[i].0 < id {
            i += 1;
        }
        if i < narrow.len() && narrow[i].0 == id {
            let a = narrow[i].1;
            num += z[k] * a * b;
            nn += z[k] * a * a;
        }
    }
    if nn == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (num / (nn.sqrt() * nb.sqrt())).clamp(0.0, 1.0)
}

/// `|C1 ∩ C2| / |C1|` over sorted context-id sets, 0 for an empty `C1`.
pub fn shared_context_proportion(c1: &[u32], c2: &[u32]) -> f64 {
    if c1.is_empty() {
        return 0.0;
    }
    let (mut i, mut j, mut shared) = (0, 0, 0usize);
    while i < c1.len() && j < c2.len() {
        match c1[i].cmp(&c2[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                shared += 1;
                i += 1;
                j += 1;
            }
        }
    }
    shared as f64 / c1.len() as f64
}

/// The five features of one space. A word missing from the space zeroes all
/// five.
pub fn space_features(space: &SparseSpace, w1: &str, w2: &str) -> [f64; FEATURES_PER_SPACE] {
    let (Some(v1), Some(v2), Some(c1), Some(c2)) = (
        space.vector(w1),
        space.vector(w2),
        space.context_set(w1),
        space.context_set(w2),
    ) else {
        return [0.0; FEATURES_PER_SPACE];
    };
    [
        cosine(v1, v2),
        weighted_cosine(v1, v2),
        weighted_cosine(v2, v1),
        shared_context_proportion(c1, c2),
        shared_context_proportion(c2, c1),
    ]
}

pub fn pair_features(spaces: &SpacePair, w1: &str, w2: &str) -> PairFeatures {
    let mut x = [0.0; FEATURE_COUNT];
    x[..FEATURES_PER_SPACE].copy_from_slice(&space_features(&spaces.window, w1, w2));
    x[FEATURES_PER_SPACE..].copy_from_slice(&space_features(&spaces.dependency, w1, w2));
    PairFeatures(x)
}
