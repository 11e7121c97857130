use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::data::{load_pairs, ScoredPair, TaskKind};
use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    Random,
    Lexical,
}

impl SplitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitKind::Random => "random",
            SplitKind::Lexical => "lexical",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSplit {
    pub train: Vec<ScoredPair>,
    pub dev: Vec<ScoredPair>,
    pub test: Vec<ScoredPair>,
    pub kind: SplitKind,
    /// Pairs dropped because their words fell into different subsets.
    pub discarded: usize,
}

fn check_ratios(ratios: [f64; 3]) -> Result<(), EvalError> {
    let sum: f64 = ratios.iter().sum();
    if ratios.iter().any(|r| !(0.0..=1.0).contains(r)) || (sum - 1.0).abs() > 1e-9 {
        return Err(EvalError::Split(format!(
            "split ratios {ratios:?} must be in [0, 1] and sum to 1"
        )));
    }
    Ok(())
}

/// Sizes of the three parts of `n` items; rounding leftovers go to test.
fn part_sizes(n: usize, ratios: [f64; 3]) -> [usize; 3] {
    let train = ((ratios[0] * n as f64).round() as usize).min(n);
    let dev = ((ratios[1] * n as f64).round() as usize).min(n - train);
    [train, dev, n - train - dev]
}

fn non_empty(split: DatasetSplit, seed: Option<u64>) -> Result<DatasetSplit, EvalError> {
    for (name, part) in [
        ("train", &split.train),
        ("dev", &split.dev),
        ("test", &split.test),
    ] {
        if part.is_empty() {
            return Err(EvalError::Split(match seed {
                Some(seed) => format!(
                    "{} split with seed {seed} left the {name} subset empty; try different ratios or another seed",
                    split.kind.as_str()
                ),
                None => format!("the {name} subset is empty"),
            }));
        }
    }
    Ok(split)
}

/// Shuffles pairs with `seed` and cuts them by `ratios` (train, dev, test).
pub fn make_random_split(
    pairs: &[ScoredPair],
    ratios: [f64; 3],
    seed: u64,
) -> Result<DatasetSplit, EvalError> {
    check_ratios(ratios)?;
    let mut shuffled = pairs.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let [n_train, n_dev, _] = part_sizes(shuffled.len(), ratios);
    let test = shuffled.split_off(n_train + n_dev);
    let dev = shuffled.split_off(n_train);
    non_empty(
        DatasetSplit {
            train: shuffled,
            dev,
            test,
            kind: SplitKind::Random,
            discarded: 0,
        },
        Some(seed),
    )
}

/// Partitions the vocabulary (not the pairs) by `ratios`, then keeps a pair
/// only when both its words landed in the same subset. Train and test never
/// share a word.
pub fn make_lexical_split(
    pairs: &[ScoredPair],
    ratios: [f64; 3],
    seed: u64,
) -> Result<DatasetSplit, EvalError> {
    check_ratios(ratios)?;
    let vocab: BTreeSet<&str> = pairs
        .iter()
        .flat_map(|p| [p.word1.as_str(), p.word2.as_str()])
        .collect();
    let mut words: Vec<&str> = vocab.into_iter().collect();
    words.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let [n_train, n_dev, _] = part_sizes(words.len(), ratios);
    let subset: HashMap<&str, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let part = if i < n_train {
                0
            } else if i < n_train + n_dev {
                1
            } else {
                2
            };
            (*w, part)
        })
        .collect();

    let mut parts: [Vec<ScoredPair>; 3] = Default::default();
    let mut discarded = 0;
    for pair in pairs {
        let a = subset[pair.word1.as_str()];
        let b = subset[pair.word2.as_str()];
        if a == b {
            parts[a].push(pair.clone());
        } else {
            discarded += 1;
        }
    }
    let [train, dev, test] = parts;
    non_empty(
        DatasetSplit {
            train,
            dev,
            test,
            kind: SplitKind::Lexical,
            discarded,
        },
        Some(seed),
    )
}

/// Loads `train.tsv`, `dev.tsv` and `test.tsv` from a directory of published
/// split files.
pub fn load_split_dir(
    dir: impl AsRef<Path>,
    task: TaskKind,
    max_score: f64,
    kind: SplitKind,
) -> Result<DatasetSplit, EvalError> {
    let dir = dir.as_ref();
    let load = |name: &str| load_pairs(dir.join(name), task, max_score);
    non_empty(
        DatasetSplit {
            train: load("train.tsv")?,
            dev: load("dev.tsv")?,
            test: load("test.tsv")?,
            kind,
            discarded: 0,
        },
        None,
    )
}

pub fn vocabulary(pairs: &[ScoredPair]) -> BTreeSet<&str> {
    pairs
        .iter()
        .flat_map(|p| [p.word1.as_str(), p.word2.as_str()])
        .collect()
}
