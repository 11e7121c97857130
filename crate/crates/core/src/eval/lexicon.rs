use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::data::split_columns;
use super::EvalError;

/// Default number of kept pairs any single word may take part in.
pub const DEFAULT_LEXICON_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Positive,
    Negative,
}

/// A binary relation pair extracted from a lexical resource.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexiconPair {
    pub word1: String,
    pub word2: String,
    pub label: Label,
}

/// Reads `word1 TAB word2 TAB {pos|neg}` lines without capping.
pub fn read_lexicon<R: BufRead>(reader: R) -> Result<Vec<LexiconPair>, EvalError> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cols = split_columns(line);
        if cols.len() < 3 || cols[0].is_empty() || cols[1].is_empty() {
            return Err(EvalError::parse(
                line_no,
                "expected word1, word2 and label columns",
            ));
        }
        let label = match cols[2] {
            "pos" => Label::Positive,
            "neg" => Label::Negative,
            other => {
                return Err(EvalError::parse(
                    line_no,
                    format!("unknown label {other:?} (expected pos or neg)"),
                ))
            }
        };
        pairs.push(LexiconPair {
            word1: cols[0].to_string(),
            word2: cols[1].to_string(),
            label,
        });
    }
    Ok(pairs)
}

/// Shuffles with `seed`, then keeps a pair only if each of its words is in
/// fewer than `cap` already-kept pairs.
pub fn cap_lexicon(mut pairs: Vec<LexiconPair>, cap: usize, seed: u64) -> Vec<LexiconPair> {
    pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut uses: HashMap<String, usize> = HashMap::new();
    let mut kept = Vec::new();
    for pair in pairs {
        let n1 = uses.get(&pair.word1).copied().unwrap_or(0);
        let n2 = uses.get(&pair.word2).copied().unwrap_or(0);
        if n1 >= cap || n2 >= cap {
            continue;
        }
        *uses.entry(pair.word1.clone()).or_insert(0) += 1;
        if pair.word2 != pair.word1 {
            *uses.entry(pair.word2.clone()).or_insert(0) += 1;
        }
        kept.push(pair);
    }
    kept
}

pub fn load_lexicon(
    path: impl AsRef<Path>,
    cap: usize,
    seed: u64,
) -> Result<Vec<LexiconPair>, EvalError> {
    let pairs = read_lexicon(BufReader::new(File::open(path)?))?;
    Ok(cap_lexicon(pairs, cap, seed))
}
