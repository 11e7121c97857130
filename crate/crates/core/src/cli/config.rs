//! Run configuration: a TOML file of flat dotted keys, overridable per key
//! from the command line.
//!
//! ```toml
//! paths.embeddings = "deps.300d.txt"
//! paths.data = "hyperlex.tsv"
//! task.split = "lexical"
//! train.seeds = "1..10"
//! features.sdf = true
//! ```
//!
//! Every key may also be given as a flag of the same name
//! (`--train.learning_rate 0.5`), or by its last segment when that is
//! unambiguous (`--seeds 1..10`, `--sdf`). Flags win over the file.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::eval::{SplitKind, TaskKind, DEFAULT_LEXICON_CAP};
use crate::training::TrainConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config is not valid TOML: {0}")]
    Syntax(String),
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdRule {
    /// Maximize F1 on the dev set.
    DevF1,
    /// Half the score scale.
    HalfScale,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub embeddings: Option<PathBuf>,
    pub lowercase: bool,
    pub window_corpus: Option<PathBuf>,
    pub dependency_corpus: Option<PathBuf>,
    pub window_space: Option<PathBuf>,
    pub dependency_space: Option<PathBuf>,
    pub window_size: usize,
    pub min_context_count: u64,
    /// A single dataset to split.
    pub data: Option<PathBuf>,
    /// Published split files; take precedence over `data`.
    pub train_split: Option<PathBuf>,
    pub dev_split: Option<PathBuf>,
    pub test_split: Option<PathBuf>,
    pub splits_dir: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub lexicon_cap: usize,
    pub output_dir: PathBuf,
    pub mapped_dim: usize,
    pub hidden_dim: usize,
    pub sdf: bool,
    pub additional_supervision: bool,
    pub task: TaskKind,
    pub split: SplitKind,
    pub ratios: [f64; 3],
    pub split_seed: u64,
    pub threshold: ThresholdRule,
    pub train: TrainConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            embeddings: None,
            lowercase: false,
            window_corpus: None,
            dependency_corpus: None,
            window_space: None,
            dependency_space: None,
            window_size: 3,
            min_context_count: 1,
            data: None,
            train_split: None,
            dev_split: None,
            test_split: None,
            splits_dir: None,
            lexicon: None,
            lexicon_cap: DEFAULT_LEXICON_CAP,
            output_dir: PathBuf::from("runs"),
            mapped_dim: 300,
            hidden_dim: 100,
            sdf: false,
            additional_supervision: false,
            task: TaskKind::Graded,
            split: SplitKind::Random,
            ratios: [0.7, 0.05, 0.25],
            split_seed: 0,
            threshold: ThresholdRule::DevF1,
            train: TrainConfig::default(),
        }
    }
}

/// Every recognized key.
pub const KEYS: &[&str] = &[
    "paths.embeddings",
    "paths.window_corpus",
    "paths.dependency_corpus",
    "paths.window_space",
    "paths.dependency_space",
    "paths.data",
    "paths.train",
    "paths.dev",
    "paths.test",
    "paths.splits_dir",
    "paths.lexicon",
    "paths.output_dir",
    "embeddings.lowercase",
    "sparse.window",
    "sparse.min_count",
    "model.mapped_dim",
    "model.hidden_dim",
    "features.sdf",
    "features.as",
    "lexicon.cap",
    "task.kind",
    "task.split",
    "task.ratios",
    "task.split_seed",
    "task.threshold",
    "train.learning_rate",
    "train.adadelta_rho",
    "train.adadelta_eps",
    "train.dropout_keep",
    "train.margin",
    "train.max_epochs",
    "train.patience",
    "train.batch_size",
    "train.seeds",
    "train.max_score",
    "train.log_timestamps",
];

const BOOL_KEYS: &[&str] = &[
    "embeddings.lowercase",
    "features.sdf",
    "features.as",
    "train.log_timestamps",
];

/// Parses seed lists: `"1..10"` (inclusive), `"1,2,3"`, a single integer,
/// or a TOML integer array.
pub fn parse_seeds(value: &toml::Value) -> Result<Vec<u64>, String> {
    let from_str = |s: &str| -> Result<Vec<u64>, String> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once("..") {
            let a: u64 = a
                .trim()
                .parse()
                .map_err(|_| format!("bad seed range {s:?}"))?;
            let b: u64 = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| format!("bad seed range {s:?}"))?;
            if b < a {
                return Err(format!("empty seed range {s:?}"));
            }
            return Ok((a..=b).collect());
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("bad seed {t:?}"))
            })
            .collect()
    };
    match value {
        toml::Value::Integer(i) if *i >= 0 => Ok(vec![*i as u64]),
        toml::Value::String(s) => from_str(s),
        toml::Value::Array(items) => items
            .iter()
            .map(|v| match v {
                toml::Value::Integer(i) if *i >= 0 => Ok(*i as u64),
                other => Err(format!("bad seed {other}")),
            })
            .collect(),
        other => Err(format!("bad seeds value {other}")),
    }
}

fn as_f64(v: &toml::Value) -> Result<f64, String> {
    match v {
        toml::Value::Float(f) => Ok(*f),
        toml::Value::Integer(i) => Ok(*i as f64),
        toml::Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("expected a number, got {s:?}")),
        other => Err(format!("expected a number, got {other}")),
    }
}

fn as_u64(v: &toml::Value) -> Result<u64, String> {
    match v {
        toml::Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        toml::Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("expected a nonnegative integer, got {s:?}")),
        other => Err(format!("expected a nonnegative integer, got {other}")),
    }
}

fn as_bool(v: &toml::Value) -> Result<bool, String> {
    match v {
        toml::Value::Boolean(b) => Ok(*b),
        toml::Value::String(s) => match s.as_str() {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            _ => Err(format!("expected true or false, got {s:?}")),
        },
        other => Err(format!("expected true or false, got {other}")),
    }
}

fn as_string(v: &toml::Value) -> Result<String, String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(_) | toml::Value::Float(_) | toml::Value::Boolean(_) => {
            Ok(v.to_string())
        }
        other => Err(format!("expected a string, got {other}")),
    }
}

fn as_path(v: &toml::Value) -> Result<Option<PathBuf>, String> {
    let s = as_string(v)?;
    Ok((!s.is_empty()).then(|| PathBuf::from(s)))
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut Vec<(String, toml::Value)>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            toml::Value::Table(t) => flatten(&key, t, out),
            other => out.push((key, other.clone())),
        }
    }
}

/// Resolves a flag name to a config key: exact match, or a unique match on
/// the last segment. Hyphens count as underscores.
pub fn resolve_key(flag: &str) -> Option<&'static str> {
    let flag = flag.replace('-', "_");
    if let Some(k) = KEYS.iter().find(|k| **k == flag) {
        return Some(k);
    }
    let mut hits = KEYS
        .iter()
        .filter(|k| k.rsplit('.').next() == Some(flag.as_str()));
    match (hits.next(), hits.next()) {
        (Some(k), None) => Some(k),
        _ => None,
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<Self, ConfigError> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
        let mut entries = Vec::new();
        flatten("", &table, &mut entries);
        let mut config = RunConfig::default();
        let mut problems = Vec::new();
        for (key, value) in entries {
            let value = match (base_dir, key.starts_with("paths."), &value) {
                (Some(dir), true, toml::Value::String(s))
                    if !s.is_empty() && Path::new(s).is_relative() =>
                {
                    toml::Value::String(dir.join(s).to_string_lossy().into_owned())
                }
                _ => value,
            };
            if let Err(e) = config.set(&key, &value) {
                problems.push(e);
            }
        }
        if problems.is_empty() {
            Ok(config)
        } else {
            Err(ConfigError::Invalid(problems))
        }
    }

    /// Reads a config file. Relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, path.parent())
    }

    /// Sets one dotted key.
    pub fn set(&mut self, key: &str, value: &toml::Value) -> Result<(), String> {
        let err = |e: String| format!("{key}: {e}");
        match key {
            "paths.embeddings" => self.embeddings = as_path(value).map_err(err)?,
            "paths.window_corpus" => self.window_corpus = as_path(value).map_err(err)?,
            "paths.dependency_corpus" => self.dependency_corpus = as_path(value).map_err(err)?,
            "paths.window_space" => self.window_space = as_path(value).map_err(err)?,
            "paths.dependency_space" => self.dependency_space = as_path(value).map_err(err)?,
            "paths.data" => self.data = as_path(value).map_err(err)?,
            "paths.train" => self.train_split = as_path(value).map_err(err)?,
            "paths.dev" => self.dev_split = as_path(value).map_err(err)?,
            "paths.test" => self.test_split = as_path(value).map_err(err)?,
            "paths.splits_dir" => self.splits_dir = as_path(value).map_err(err)?,
            "paths.lexicon" => self.lexicon = as_path(value).map_err(err)?,
            "paths.output_dir" => {
                self.output_dir = as_path(value)
                    .map_err(err)?
                    .ok_or_else(|| err("must not be empty".into()))?
            }
            "embeddings.lowercase" => self.lowercase = as_bool(value).map_err(err)?,
            "sparse.window" => self.window_size = as_u64(value).map_err(err)? as usize,
            "sparse.min_count" => self.min_context_count = as_u64(value).map_err(err)?,
            "model.mapped_dim" => self.mapped_dim = as_u64(value).map_err(err)? as usize,
            "model.hidden_dim" => self.hidden_dim = as_u64(value).map_err(err)? as usize,
            "features.sdf" => self.sdf = as_bool(value).map_err(err)?,
            "features.as" => self.additional_supervision = as_bool(value).map_err(err)?,
            "lexicon.cap" => self.lexicon_cap = as_u64(value).map_err(err)? as usize,
            "task.kind" => {
                self.task = TaskKind::parse(&as_string(value).map_err(err)?)
                    .ok_or_else(|| err("expected graded or binary".into()))?
            }
            "task.split" => {
                self.split = match as_string(value).map_err(err)?.as_str() {
                    "random" => SplitKind::Random,
                    "lexical" => SplitKind::Lexical,
                    _ => return Err(err("expected random or lexical".into())),
                }
            }
            "task.ratios" => {
                let values: Vec<f64> = match value {
                    toml::Value::Array(items) => items.iter().map(as_f64).collect::<Result<_, _>>(),
                    other => as_string(other).and_then(|s| {
                        s.split(',')
                            .map(|t| as_f64(&toml::Value::String(t.to_string())))
                            .collect()
                    }),
                }
                .map_err(err)?;
                self.ratios = values
                    .try_into()
                    .map_err(|_| err("expected three ratios (train, dev, test)".into()))?;
            }
            "task.split_seed" => self.split_seed = as_u64(value).map_err(err)?,
            "task.threshold" => {
                self.threshold = match as_string(value).map_err(err)?.as_str() {
                    "dev-f1" | "dev_f1" => ThresholdRule::DevF1,
                    "half-scale" | "half_scale" => ThresholdRule::HalfScale,
                    _ => return Err(err("expected dev-f1 or half-scale".into())),
                }
            }
            "train.learning_rate" => self.train.learning_rate = as_f64(value).map_err(err)?,
            "train.adadelta_rho" => self.train.adadelta_rho = as_f64(value).map_err(err)?,
            "train.adadelta_eps" => self.train.adadelta_eps = as_f64(value).map_err(err)?,
            "train.dropout_keep" => self.train.dropout_keep = as_f64(value).map_err(err)?,
            "train.margin" => self.train.margin = as_f64(value).map_err(err)?,
            "train.max_epochs" => self.train.max_epochs = as_u64(value).map_err(err)? as u32,
            "train.patience" => self.train.patience = as_u64(value).map_err(err)? as u32,
            "train.batch_size" => self.train.batch_size = as_u64(value).map_err(err)? as usize,
            "train.seeds" => self.train.seeds = parse_seeds(value).map_err(err)?,
            "train.max_score" => self.train.max_score = as_f64(value).map_err(err)?,
            "train.log_timestamps" => self.train.log_timestamps = as_bool(value).map_err(err)?,
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Applies `--key value`, `--key=value` and bare boolean `--key` flags.
    pub fn apply_overrides(&mut self, args: &[String]) -> Result<(), ConfigError> {
        let mut problems = Vec::new();
        let mut i = 0;
        while i < args.len() {
            let arg = &args[i];
            i += 1;
            let Some(flag) = arg.strip_prefix("--") else {
                problems.push(format!("unexpected argument {arg:?}"));
                continue;
            };
            let (name, inline) = match flag.split_once('=') {
                Some((n, v)) => (n, Some(v.to_string())),
                None => (flag, None),
            };
            let Some(key) = resolve_key(name) else {
                problems.push(format!("unknown or ambiguous option --{name}"));
                continue;
            };
            let raw = match inline {
                Some(v) => v,
                None if BOOL_KEYS.contains(&key)
                    && (i >= args.len() || args[i].starts_with("--")) =>
                {
                    "true".into()
                }
                None if i < args.len() => {
                    i += 1;
                    args[i - 1].clone()
                }
                None => {
                    problems.push(format!("--{name} needs a value"));
                    continue;
                }
            };
            let value = parse_flag_value(&raw);
            if let Err(e) = self.set(key, &value) {
                problems.push(e);
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(problems))
        }
    }

    /// Checks the whole configuration, collecting every problem.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut problems = self.train.problems();
        let mut need_file = |label: &str, path: &Option<PathBuf>, required: bool| match path {
            Some(p) if !p.exists() => {
                problems.push(format!("{label} {} does not exist", p.display()))
            }
            None if required => problems.push(format!("{label} is required")),
            _ => {}
        };

        need_file("paths.embeddings", &self.embeddings, true);
        need_file("paths.window_space", &self.window_space, false);
        need_file("paths.dependency_space", &self.dependency_space, false);
        need_file("paths.window_corpus", &self.window_corpus, false);
        need_file("paths.dependency_corpus", &self.dependency_corpus, false);
        need_file("paths.lexicon", &self.lexicon, self.additional_supervision);
        need_file("paths.data", &self.data, false);
        need_file("paths.train", &self.train_split, false);
        need_file("paths.dev", &self.dev_split, false);
        need_file("paths.test", &self.test_split, false);
        need_file("paths.splits_dir", &self.splits_dir, false);

        if self.sdf {
            if self.window_space.is_none() && self.window_corpus.is_none() {
                problems
                    .push("features.sdf needs paths.window_space or paths.window_corpus".into());
            }
            if self.dependency_space.is_none() && self.dependency_corpus.is_none() {
                problems.push(
                    "features.sdf needs paths.dependency_space or paths.dependency_corpus".into(),
                );
            }
        }
        let explicit = [&self.train_split, &self.dev_split, &self.test_split];
        let n_explicit = explicit.iter().filter(|p| p.is_some()).count();
        if n_explicit != 0 && n_explicit != 3 {
            problems.push("paths.train, paths.dev and paths.test must be given together".into());
        }
        if n_explicit == 0 && self.splits_dir.is_none() && self.data.is_none() {
            problems.push(
                "no dataset: set paths.data, paths.splits_dir, or paths.train/dev/test".into(),
            );
        }
        let sum: f64 = self.ratios.iter().sum();
        if self.ratios.iter().any(|r| *r < 0.0) || (sum - 1.0).abs() > 1e-9 {
            problems.push(format!(
                "task.ratios {:?} must be nonnegative and sum to 1",
                self.ratios
            ));
        }
        if self.window_size == 0 {
            problems.push("sparse.window must be positive".into());
        }
        if self.mapped_dim == 0 || self.hidden_dim == 0 {
            problems.push("model.mapped_dim and model.hidden_dim must be positive".into());
        }
        if self.lexicon_cap == 0 {
            problems.push("lexicon.cap must be positive".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(problems))
        }
    }
}

/// Interprets a flag value as a TOML scalar when it parses as one, otherwise
/// as a plain string.
fn parse_flag_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
