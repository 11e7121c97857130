use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    /// Continuous scores in `[0, S]`, evaluated with Spearman's rho.
    Graded,
    /// Yes/no labels, evaluated with precision, recall and F1.
    Binary,
}

impl TaskKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::Graded => "graded",
            TaskKind::Binary => "binary",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "graded" => Some(TaskKind::Graded),
            "binary" => Some(TaskKind::Binary),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gold {
    Graded(f64),
    Binary(bool),
}

impl Gold {
    /// Regression target on a `[0, max_score]` scale; binary labels map to
    /// the two ends.
    pub fn target(self, max_score: f64) -> f64 {
        match self {
            Gold::Graded(v) => v,
            Gold::Binary(true) => max_score,
            Gold::Binary(false) => 0.0,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Gold::Binary(b) => Some(b),
            Gold::Graded(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPair {
    pub word1: String,
    pub word2: String,
    pub gold: Gold,
}

impl ScoredPair {
    pub fn graded(word1: impl Into<String>, word2: impl Into<String>, score: f64) -> Self {
        ScoredPair {
            word1: word1.into(),
            word2: word2.into(),
            gold: Gold::Graded(score),
        }
    }

    pub fn binary(word1: impl Into<String>, word2: impl Into<String>, label: bool) -> Self {
        ScoredPair {
            word1: word1.into(),
            word2: word2.into(),
            gold: Gold::Binary(label),
        }
    }
}

pub(crate) fn split_columns(line: &str) -> Vec<&str> {
    line.split('\t').map(str::trim).collect()
}

/// Reads `word1 TAB word2 TAB score` lines. A first line whose score column
/// is not numeric is taken as a header; extra columns are ignored.
pub fn read_graded<R: BufRead>(reader: R, max_score: f64) -> Result<Vec<ScoredPair>, EvalError> {
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
                "expected word1, word2 and score columns",
            ));
        }
        let score = match cols[2].parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ if line_no == 1 => continue,
            _ => {
                return Err(EvalError::parse(
                    line_no,
                    format!("score {:?} is not a number", cols[2]),
                ))
            }
        };
        if !(0.0..=max_score).contains(&score) {
            return Err(EvalError::parse(
                line_no,
                format!("score {score} outside [0, {max_score}]"),
            ));
        }
        pairs.push(ScoredPair::graded(cols[0], cols[1], score));
    }
    Ok(pairs)
}

pub fn load_graded(path: impl AsRef<Path>, max_score: f64) -> Result<Vec<ScoredPair>, EvalError> {
    read_graded(BufReader::new(File::open(path)?), max_score)
}

fn parse_label(token: &str) -> Option<bool> {
    match token {
        "True" | "true" => Some(true),
        "False" | "false" => Some(false),
        _ => None,
    }
}

/// Reads `word1 TAB word2 TAB {True|False}` lines.
pub fn read_binary<R: BufRead>(reader: R) -> Result<Vec<ScoredPair>, EvalError> {
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
        let label = parse_label(cols[2]).ok_or_else(|| {
            EvalError::parse(
                line_no,
                format!("unknown label {:?} (expected True or False)", cols[2]),
            )
        })?;
        pairs.push(ScoredPair::binary(cols[0], cols[1], label));
    }
    Ok(pairs)
}

pub fn load_binary(path: impl AsRef<Path>) -> Result<Vec<ScoredPair>, EvalError> {
    read_binary(BufReader::new(File::open(path)?))
}

pub fn load_pairs(
    path: impl AsRef<Path>,
    task: TaskKind,
    max_score: f64,
) -> Result<Vec<ScoredPair>, EvalError> {
    match task {
        TaskKind::Graded => load_graded(path, max_score),
        TaskKind::Binary => load_binary(path),
    }
}
