//! Frozen word embeddings read from the common word2vec/GloVe text layout.
//!
//! One word per line followed by its space-separated components. An optional
//! first line holding exactly two integers (`count dim`) is treated as a
//! header. The table is immutable after loading.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use log::warn;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("cannot read embeddings: {0}")]
    Io(#[from] std::io::Error),
    #[error("embedding file contains no vectors")]
    Empty,
    #[error("line {line}: expected {expected} components, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: component {token:?} is not a finite number")]
    BadComponent { line: usize, token: String },
    #[error("line {line}: word has no components")]
    MissingVector { line: usize },
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Reject the file unless every vector has this many components.
    pub expected_dim: Option<usize>,
    /// Fold stored words and queries to lowercase; the first collision wins.
    pub lowercase: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f64>,
    lowercase: bool,
    duplicates: usize,
}

impl EmbeddingTable {
    /// Builds a table from in-memory rows. Duplicate words keep their first
    /// vector.
    pub fn from_rows<I, S>(dim: usize, rows: I) -> Result<Self, EmbeddingError>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut table = EmbeddingTable::empty(dim, false);
        for (i, (word, vector)) in rows.into_iter().enumerate() {
            if vector.len() != dim {
                return Err(EmbeddingError::DimensionMismatch {
                    line: i + 1,
                    expected: dim,
                    found: vector.len(),
                });
            }
            if let Some(bad) = vector.iter().find(|v| !v.is_finite()) {
                return Err(EmbeddingError::BadComponent {
                    line: i + 1,
                    token: bad.to_string(),
                });
            }
            table.insert(word.into(), &vector);
        }
        if table.is_empty() {
            return Err(EmbeddingError::Empty);
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Self, EmbeddingError> {
        let reader = BufReader::new(File::open(path.as_ref())?);
        Self::read(reader, options)
    }

    pub fn read<R: BufRead>(reader: R, options: &LoadOptions) -> Result<Self, EmbeddingError> {
        let mut table: Option<EmbeddingTable> = None;
        let mut header_dim: Option<usize> = None;
        let mut row = Vec::new();

        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let line = line.trim_end_matches('\r');
            let mut tokens = line.split_whitespace();
            let Some(word) = tokens.next() else {
                continue;
            };
            let rest: Vec<&str> = tokens.collect();

            if line_no == 1 && rest.len() == 1 {
                if let (Ok(_count), Ok(dim)) = (word.parse::<u64>(), rest[0].parse::<usize>()) {
                    header_dim = Some(dim);
                    continue;
                }
            }
            if rest.is_empty() {
                return Err(EmbeddingError::MissingVector { line: line_no });
            }

            let expected = match &table {
                Some(t) => Some(t.dim),
                None => header_dim.or(options.expected_dim),
            };
            if let Some(expected) = expected {
                if rest.len() != expected {
                    return Err(EmbeddingError::DimensionMismatch {
                        line: line_no,
                        expected,
                        found: rest.len(),
                    });
                }
            }

            row.clear();
            for tok in &rest {
                match tok.parse::<f64>() {
                    Ok(v) if v.is_finite() => row.push(v),
                    _ => {
                        return Err(EmbeddingError::BadComponent {
                            line: line_no,
                            token: (*tok).to_string(),
                        })
                    }
                }
            }

            let table =
                table.get_or_insert_with(|| EmbeddingTable::empty(rest.len(), options.lowercase));
            let key = if options.lowercase {
                word.to_lowercase()
            } else {
                word.to_string()
            };
            table.insert(key, &row);
        }

        let table = table.ok_or(EmbeddingError::Empty)?;
        if let Some(expected) = options.expected_dim {
            if expected != table.dim {
                return Err(EmbeddingError::DimensionMismatch {
                    line: 1,
                    expected,
                    found: table.dim,
                });
            }
        }
        if table.duplicates > 0 {
            warn!(
                "{} duplicate embedding entries ignored (first occurrence kept)",
                table.duplicates
            );
        }
        Ok(table)
    }

    fn empty(dim: usize, lowercase: bool) -> Self {
        EmbeddingTable {
            dim,
            words: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
            lowercase,
            duplicates: 0,
        }
    }

    fn insert(&mut self, word: String, vector: &[f64]) {
        if self.index.contains_key(&word) {
            self.duplicates += 1;
            return;
        }
        self.index.insert(word.clone(), self.words.len());
        self.words.push(word);
        self.data.extend_from_slice(vector);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Number of entries dropped because their word was already stored.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn is_lowercased(&self) -> bool {
        self.lowercase
    }

    /// Words in load order.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        if self.lowercase {
            self.index.get(&word.to_lowercase()).copied()
        } else {
            self.index.get(word).copied()
        }
    }

    pub fn vector(&self, index: usize) -> &[f64] {
        &self.data[index * self.dim..(index + 1) * self.dim]
    }

    /// The stored vector for `word`, or `None` when it is out of vocabulary.
    pub fn lookup(&self, word: &str) -> Option<&[f64]> {
        self.index_of(word).map(|i| self.vector(i))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index_of(word).is_some()
    }
}
