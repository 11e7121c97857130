//! Tiny synthetic data shared by the examples.
#![allow(dead_code)]

use lexent::eval::{Label, LexiconPair, ScoredPair};
use lexent::EmbeddingTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DIM: usize = 8;

/// Words `w0..w{n}` with random vectors, plus a hidden direction. A pair
/// scores high when the first word sits further along it than the second.
pub struct Toy {
    pub table: EmbeddingTable,
    proj: Vec<f64>,
    rng: ChaCha8Rng,
}

impl Toy {
    pub fn new(words: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vec = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..DIM).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        let rows: Vec<(String, Vec<f64>)> = (0..words)
            .map(|i| (format!("w{i}"), vec(&mut rng)))
            .collect();
        let dir = vec(&mut rng);
        let proj = rows
            .iter()
            .map(|(_, v)| v.iter().zip(&dir).map(|(a, b)| a * b).sum())
            .collect();
        let table = EmbeddingTable::from_rows(DIM, rows).expect("valid rows");
        Toy { table, proj, rng }
    }

    pub fn word(&self, i: usize) -> &str {
        &self.table.words()[i]
    }

    fn gold(&self, a: usize, b: usize) -> f64 {
        (5.0 + 3.0 * (self.proj[a] - self.proj[b])).clamp(0.0, 10.0)
    }

    fn random_pair(&mut self) -> (usize, usize) {
        let n = self.table.len();
        loop {
            let (a, b) = (self.rng.gen_range(0..n), self.rng.gen_range(0..n));
            if a != b {
                return (a, b);
            }
        }
    }

    pub fn graded(&mut self, n: usize) -> Vec<ScoredPair> {
        (0..n)
            .map(|_| {
                let (a, b) = self.random_pair();
                ScoredPair::graded(self.word(a), self.word(b), self.gold(a, b))
            })
            .collect()
    }

    pub fn binary(&mut self, n: usize) -> Vec<ScoredPair> {
        (0..n)
            .map(|_| {
                let (a, b) = self.random_pair();
                ScoredPair::binary(self.word(a), self.word(b), self.gold(a, b) > 5.5)
            })
            .collect()
    }

    pub fn lexicon(&mut self, n: usize) -> Vec<LexiconPair> {
        (0..n)
            .map(|_| {
                let (a, b) = self.random_pair();
                LexiconPair {
                    word1: self.word(a).to_string(),
                    word2: self.word(b).to_string(),
                    label: if self.proj[a] > self.proj[b] {
                        Label::Positive
                    } else {
                        Label::Negative
                    },
                }
            })
            .collect()
    }

    /// Random sentences over the vocabulary, one per line.
    pub fn corpus(&mut self, lines: usize) -> Vec<String> {
        let n = self.table.len();
        (0..lines)
            .map(|_| {
                let len = self.rng.gen_range(3..10);
                (0..len)
                    .map(|_| format!("w{}", self.rng.gen_range(0..n)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }
}
