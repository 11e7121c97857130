//! Sparse distributional spaces and the directional pair features.
//!
//! A [`SparseSpace`] holds PPMI-weighted context vectors for every word seen
//! in a corpus, plus the set of contexts each word was observed with. Two
//! spaces are used together: one with symmetric window contexts and one with
//! dependency-arc contexts. [`pair_features`] computes five features per
//! space for a word pair, giving the fixed 10-vector fed to the network.

mod counts;
mod features;
mod io;

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use thiserror::Error;

pub use counts::{CooccurrenceCounts, INVERSE_MARKER};
pub use features::{
    cosine, pair_features, rank_weights, shared_context_proportion, space_features,
    weighted_cosine, PairFeatures, SpacePair, FEATURES_PER_SPACE, FEATURE_COUNT,
};
pub use io::{SPACE_FORMAT_VERSION, SPACE_MAGIC};

#[derive(Debug, Error)]
pub enum SparseError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("corpus contains no tokens")]
    EmptyCorpus,
    #[error("row {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("not a sparse space archive")]
    NotAnArchive,
    #[error("unsupported space archive version {found} (supported: {supported})")]
    Version { found: u32, supported: u32 },
    #[error("space archive is truncated")]
    Truncated,
    #[error("space archive is corrupt: {0}")]
    Corrupt(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Window { window: u32 },
    Dependency,
}

/// Sorted `(context id, weight)` entries with strictly positive weights.
pub type SparseVector = Vec<(u32, f64)>;

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// Contexts whose total count is below this are dropped before weighting.
    /// `1` keeps everything.
    pub min_context_count: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            min_context_count: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseSpace {
    kind: SpaceKind,
    contexts: Vec<String>,
    context_totals: Vec<u64>,
    words: Vec<String>,
    word_index: HashMap<String, usize>,
    word_totals: Vec<u64>,
    vectors: Vec<SparseVector>,
    context_sets: Vec<Vec<u32>>,
    total: u64,
}

/// `max(0, ln(N · n(w,c) / (n(w) · n(c))))`, and 0 when any count is zero.
pub fn ppmi_weight(joint: u64, word_total: u64, context_total: u64, total: u64) -> f64 {
    if joint == 0 || word_total == 0 || context_total == 0 || total == 0 {
        return 0.0;
    }
    let pmi =
        ((total as f64) * (joint as f64) / ((word_total as f64) * (context_total as f64))).ln();
    pmi.max(0.0)
}

impl SparseSpace {
    /// Weights raw counts with PPMI. Words and contexts are interned in
    /// lexicographic order so ids do not depend on corpus order.
    pub fn from_counts(
        kind: SpaceKind,
        counts: &CooccurrenceCounts,
        options: BuildOptions,
    ) -> Self {
        let mut context_totals: HashMap<&str, u64> = HashMap::new();
        for (_, row) in counts.rows() {
            for (ctx, &n) in row {
                *context_totals.entry(ctx.as_str()).or_insert(0) += n;
            }
        }
        context_totals.retain(|_, n| *n >= options.min_context_count && *n > 0);

        let mut contexts: Vec<&str> = context_totals.keys().copied().collect();
        contexts.sort_unstable();
        let context_ids: HashMap<&str, u32> = contexts
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, i as u32))
            .collect();

        let mut rows: Vec<(&str, Vec<(u32, u64)>)> = counts
            .rows()
            .map(|(word, row)| {
                let mut cells: Vec<(u32, u64)> = row
                    .iter()
                    .filter_map(|(ctx, &n)| context_ids.get(ctx.as_str()).map(|&id| (id, n)))
                    .filter(|&(_, n)| n > 0)
                    .collect();
                cells.sort_unstable();
                (word, cells)
            })
            .filter(|(_, cells)| !cells.is_empty())
            .collect();
        rows.sort_unstable_by(|a, b| a.0.cmp(b.0));

        let word_totals: Vec<u64> = rows
            .iter()
            .map(|(_, cells)| cells.iter().map(|c| c.1).sum())
            .collect();
        let total: u64 = word_totals.iter().sum();
        let ctx_totals: Vec<u64> = contexts.iter().map(|c| context_totals[c]).collect();

        let mut vectors = Vec::with_capacity(rows.len());
        let mut context_sets = Vec::with_capacity(rows.len());
        for ((_, cells), &word_total) in rows.iter().zip(&word_totals) {
            let vector: SparseVector = cells
                .iter()
                .map(|&(id, n)| {
                    (
                        id,
                        ppmi_weight(n, word_total, ctx_totals[id as usize], total),
                    )
                })
                .filter(|&(_, w)| w > 0.0)
                .collect();
            vectors.push(vector);
            context_sets.push(cells.iter().map(|&(id, _)| id).collect());
        }

        let words: Vec<String> = rows.iter().map(|(w, _)| w.to_string()).collect();
        let word_index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        SparseSpace {
            kind,
            contexts: contexts.into_iter().map(str::to_string).collect(),
            context_totals: ctx_totals,
            words,
            word_index,
            word_totals,
            vectors,
            context_sets,
            total,
        }
    }

    /// Builds a window space from a file holding one tokenized sentence per
    /// line.
    pub fn build_window(
        path: impl AsRef<Path>,
        window: usize,
        options: BuildOptions,
    ) -> Result<Self, SparseError> {
        let reader = BufReader::new(File::open(path)?);
        let lines = reader.lines().collect::<Result<Vec<_>, _>>()?;
        Self::build_window_from_lines(&lines, window, options)
    }

    pub fn build_window_from_lines(
        lines: &[String],
        window: usize,
        options: BuildOptions,
    ) -> Result<Self, SparseError> {
        if lines.iter().all(|l| l.split_whitespace().next().is_none()) {
            return Err(SparseError::EmptyCorpus);
        }
        let counts = CooccurrenceCounts::from_window_lines(lines, window);
        Ok(Self::from_counts(
            SpaceKind::Window {
                window: window as u32,
            },
            &counts,
            options,
        ))
    }

    /// Builds a dependency space from a CoNLL-X or CoNLL-U file.
    pub fn build_dependency(
        path: impl AsRef<Path>,
        options: BuildOptions,
    ) -> Result<Self, SparseError> {
        let reader = BufReader::new(File::open(path)?);
        Self::build_dependency_from_reader(reader, options)
    }

    pub fn build_dependency_from_reader<R: BufRead>(
        reader: R,
        options: BuildOptions,
    ) -> Result<Self, SparseError> {
        let counts = CooccurrenceCounts::from_conll(reader)?;
        Ok(Self::from_counts(SpaceKind::Dependency, &counts, options))
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn contexts(&self) -> &[String] {
        &self.contexts
    }

    pub fn context_id(&self, context: &str) -> Option<u32> {
        self.contexts
            .binary_search_by(|c| c.as_str().cmp(context))
            .ok()
            .map(|i| i as u32)
    }

    /// Total co-occurrence mass N.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn word_total(&self, word: &str) -> Option<u64> {
        self.word_index.get(word).map(|&i| self.word_totals[i])
    }

    pub fn context_total(&self, context: &str) -> Option<u64> {
        self.context_id(context)
            .map(|id| self.context_totals[id as usize])
    }

    pub fn vector(&self, word: &str) -> Option<&SparseVector> {
        self.word_index.get(word).map(|&i| &self.vectors[i])
    }

    pub fn context_set(&self, word: &str) -> Option<&[u32]> {
        self.word_index
            .get(word)
            .map(|&i| self.context_sets[i].as_slice())
    }

    /// PPMI weight of `context` for `word`, 0 when absent.
    pub fn weight(&self, word: &str, context: &str) -> f64 {
        let (Some(v), Some(id)) = (self.vector(word), self.context_id(context)) else {
            return 0.0;
        };
        v.binary_search_by_key(&id, |e| e.0)
            .map(|i| v[i].1)
            .unwrap_or(0.0)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.word_index.contains_key(word)
    }

    pub fn num_nonzero(&self) -> usize {
        self.vectors.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_observation_has_zero_weight() {
        let mut c = CooccurrenceCounts::new();
        c.add("a", "b", 1);
        let s = SparseSpace::from_counts(SpaceKind::Dependency, &c, BuildOptions::default());
        assert_eq!(s.total(), 1);
        assert!(s.vector("a").unwrap().is_empty());
        assert_eq!(s.context_set("a").unwrap(), &[s.context_id("b").unwrap()]);
    }

    #[test]
    fn uniform_table_is_independent() {
        let mut c = CooccurrenceCounts::new();
        for w in ["a", "b"] {
            for ctx in ["x", "y"] {
                c.add(w, ctx, 1);
            }
        }
        let s = SparseSpace::from_counts(SpaceKind::Dependency, &c, BuildOptions::default());
        assert_eq!(s.num_nonzero(), 0);
        assert_eq!(s.context_set("b").unwrap().len(), 2);
    }

    #[test]
    fn min_count_prunes_contexts() {
        let mut c = CooccurrenceCounts::new();
        c.add("a", "rare", 1);
        c.add("a", "common", 3);
        c.add("b", "common", 1);
        let s = SparseSpace::from_counts(
            SpaceKind::Dependency,
            &c,
            BuildOptions {
                min_context_count: 2,
            },
        );
        assert_eq!(s.contexts(), &["common".to_string()]);
        assert_eq!(s.total(), 4);
    }

    #[test]
    fn empty_window_corpus() {
        let lines = vec![String::new(), "   ".to_string()];
        assert!(matches!(
            SparseSpace::build_window_from_lines(&lines, 3, BuildOptions::default()),
            Err(SparseError::EmptyCorpus)
        ));
    }

    #[test]
    fn ppmi_clips_negative() {
        assert_eq!(ppmi_weight(1, 10, 10, 10), 0.0);
        assert!((ppmi_weight(2, 2, 2, 8) - 4f64.ln()).abs() < 1e-15);
        assert_eq!(ppmi_weight(0, 1, 1, 1), 0.0);
    }
}
