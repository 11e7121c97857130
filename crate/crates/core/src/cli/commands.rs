use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use log::{info, warn};

use super::config::{RunConfig, ThresholdRule};
use crate::embeddings::{EmbeddingTable, LoadOptions};
use crate::eval::{
    binary_report, cap_lexicon, graded_report, load_pairs, load_split_dir, make_lexical_split,
    make_random_split, read_lexicon, AggregateReport, DatasetSplit, EvalReport, Predictions,
    SplitKind, TaskKind, ThresholdPolicy,
};
use crate::fingerprint_file;
use crate::model::{Checkpoint, CheckpointMeta, Dims, FileRef, ModelBundle, ModelParams};
use crate::sparse::{BuildOptions, SpaceKind, SpacePair, SparseSpace};
use crate::training::{multi_seed, pretrain, train, Example, Inputs};

fn file_ref(path: &Path) -> Result<FileRef> {
    Ok(FileRef {
        path: path.to_string_lossy().into_owned(),
        sha256: fingerprint_file(path)
            .with_context(|| format!("cannot fingerprint {}", path.display()))?,
    })
}

/// Summary printed by `build-space`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceStats {
    pub words: usize,
    pub contexts: usize,
    pub nonzero: usize,
    pub total: u64,
}

pub fn build_space(
    corpus: &Path,
    kind: SpaceKind,
    min_count: u64,
    out: &Path,
) -> Result<SpaceStats> {
    let options = BuildOptions {
        min_context_count: min_count,
    };
    let space = match kind {
        SpaceKind::Window { window } => SparseSpace::build_window(corpus, window as usize, options),
        SpaceKind::Dependency => SparseSpace::build_dependency(corpus, options),
    }
    .with_context(|| format!("building space from {}", corpus.display()))?;
    space
        .save(out)
        .with_context(|| format!("writing {}", out.display()))?;
    Ok(SpaceStats {
        words: space.words().len(),
        contexts: space.contexts().len(),
        nonzero: space.num_nonzero(),
        total: space.total(),
    })
}

/// Loads a saved space, or builds one from its corpus when no archive path
/// is configured. Returns the space and the file it was read from.
/// Loads the configured archive, or builds the space from its corpus and
/// saves it to `save_to` so checkpoints can point at a loadable file.
fn obtain_space(
    archive: &Option<PathBuf>,
    corpus: &Option<PathBuf>,
    kind: SpaceKind,
    min_count: u64,
    save_to: &Path,
) -> Result<(SparseSpace, PathBuf)> {
    if let Some(path) = archive {
        let space =
            SparseSpace::load(path).with_context(|| format!("loading space {}", path.display()))?;
        return Ok((space, path.clone()));
    }
    let corpus = corpus
        .as_ref()
        .ok_or_else(|| anyhow!("no space or corpus configured"))?;
    let options = BuildOptions {
        min_context_count: min_count,
    };
    let space = match kind {
        SpaceKind::Window { window } => SparseSpace::build_window(corpus, window as usize, options),
        SpaceKind::Dependency => SparseSpace::build_dependency(corpus, options),
    }
    .with_context(|| format!("building space from {}", corpus.display()))?;
    space
        .save(save_to)
        .with_context(|| format!("writing {}", save_to.display()))?;
    Ok((space, save_to.to_path_buf()))
}

fn load_dataset(config: &RunConfig) -> Result<DatasetSplit> {
    let s = config.train.max_score;
    if let (Some(tr), Some(dv), Some(te)) =
        (&config.train_split, &config.dev_split, &config.test_split)
    {
        return Ok(DatasetSplit {
            train: load_pairs(tr, config.task, s)
                .with_context(|| format!("reading {}", tr.display()))?,
            dev: load_pairs(dv, config.task, s)
                .with_context(|| format!("reading {}", dv.display()))?,
            test: load_pairs(te, config.task, s)
                .with_context(|| format!("reading {}", te.display()))?,
            kind: config.split,
            discarded: 0,
        });
    }
    if let Some(dir) = &config.splits_dir {
        return Ok(load_split_dir(dir, config.task, s, config.split)?);
    }
    let data = config
        .data
        .as_ref()
        .ok_or_else(|| anyhow!("no dataset configured"))?;
    let pairs =
        load_pairs(data, config.task, s).with_context(|| format!("reading {}", data.display()))?;
    let split = match config.split {
        SplitKind::Random => make_random_split(&pairs, config.ratios, config.split_seed)?,
        SplitKind::Lexical => make_lexical_split(&pairs, config.ratios, config.split_seed)?,
    };
    if split.discarded > 0 {
        info!(
            "lexical split discarded {} cross-subset pairs",
            split.discarded
        );
    }
    Ok(split)
}

fn predictions(
    inputs: &Inputs,
    params: &ModelParams,
    examples: &[Example],
    skipped: usize,
) -> Result<Predictions> {
    Ok(Predictions {
        scores: inputs.predict(params, examples)?,
        gold: examples.iter().map(|e| e.gold).collect(),
        skipped,
    })
}

/// Outcome of `train`: where things were written and the aggregate report.
#[derive(Debug, Clone)]
pub struct TrainRun {
    pub report: AggregateReport,
    pub checkpoints: Vec<PathBuf>,
    pub logs: Vec<PathBuf>,
    pub report_path: PathBuf,
}

/// The full pipeline: optional lexicon pre-training, supervised training and
/// test evaluation for every configured seed. Writes one checkpoint, log and
/// report per seed plus an aggregate `report.json` into the output
/// directory.
pub fn run_training(config: &RunConfig) -> Result<TrainRun> {
    config.validate()?;
    let emb_path = config.embeddings.as_ref().expect("validated");
    let embeddings = EmbeddingTable::load(
        emb_path,
        &LoadOptions {
            expected_dim: None,
            lowercase: config.lowercase,
        },
    )
    .with_context(|| format!("loading embeddings {}", emb_path.display()))?;

    let out_dir = &config.output_dir;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;

    let spaces = if config.sdf {
        let (window, wpath) = obtain_space(
            &config.window_space,
            &config.window_corpus,
            SpaceKind::Window {
                window: config.window_size as u32,
            },
            config.min_context_count,
            &out_dir.join("window.space"),
        )?;
        let (dependency, dpath) = obtain_space(
            &config.dependency_space,
            &config.dependency_corpus,
            SpaceKind::Dependency,
            config.min_context_count,
            &out_dir.join("dependency.space"),
        )?;
        Some((SpacePair { window, dependency }, wpath, dpath))
    } else {
        None
    };

    let split = load_dataset(config)?;
    let lexicon = if config.additional_supervision {
        let path = config.lexicon.as_ref().expect("validated");
        let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        Some(read_lexicon(std::io::BufReader::new(file))?)
    } else {
        None
    };

    let inputs = Inputs::new(&embeddings, spaces.as_ref().map(|s| &s.0));
    let (train_set, train_skipped) = inputs.prepare(&split.train);
    let (dev_set, dev_skipped) = inputs.prepare(&split.dev);
    let (test_set, test_skipped) = inputs.prepare(&split.test);
    for (name, n) in [
        ("train", train_skipped),
        ("dev", dev_skipped),
        ("test", test_skipped),
    ] {
        if n > 0 {
            warn!("{n} {name} pairs skipped: word not in embeddings");
        }
    }

    // spaces saved into the run directory are recorded by file name so the
    // directory can be moved
    let space_ref = |path: &Path| -> Result<FileRef> {
        let mut r = file_ref(path)?;
        if path.parent() == Some(out_dir.as_path()) {
            if let Some(name) = path.file_name() {
                r.path = name.to_string_lossy().into_owned();
            }
        }
        Ok(r)
    };
    let meta_base = CheckpointMeta {
        embeddings: Some(file_ref(emb_path)?),
        lowercase: config.lowercase,
        window_space: spaces.as_ref().map(|s| space_ref(&s.1)).transpose()?,
        dependency_space: spaces.as_ref().map(|s| space_ref(&s.2)).transpose()?,
        task: config.task,
        ..Default::default()
    };
    let dims = Dims::new(
        embeddings.dim(),
        config.mapped_dim,
        config.hidden_dim,
        config.sdf,
    );

    let mut checkpoints = Vec::new();
    let mut logs = Vec::new();
    let report = multi_seed(
        config.task,
        &config.train.seeds,
        |seed| -> Result<EvalReport> {
            let mut params = ModelParams::init(dims, config.train.max_score, seed);
            let mut header = vec![
            format!("seed={seed}"),
            format!(
                "train_pairs={}\ttrain_skipped={}\tdev_pairs={}\tdev_skipped={}\ttest_pairs={}\ttest_skipped={}",
                train_set.len(),
                train_skipped,
                dev_set.len(),
                dev_skipped,
                test_set.len(),
                test_skipped
            ),
        ];
            if let Some(lexicon) = &lexicon {
                let capped = cap_lexicon(lexicon.clone(), config.lexicon_cap, seed);
                let summary = pretrain(&mut params, &inputs, &capped, &config.train, seed)?;
                header.push(format!(
                    "pretrain_pairs={}\tpretrain_skipped={}\tpretrain_loss={}",
                    summary.used, summary.skipped_oov, summary.mean_loss
                ));
            }

            let mut outcome = train(
                params,
                &inputs,
                &train_set,
                &dev_set,
                config.task,
                &config.train,
                seed,
            )?;
            header.push(format!("best_epoch={}", outcome.best_epoch));
            outcome.log.header = header;

            let test_preds = predictions(&inputs, &outcome.params, &test_set, test_skipped)?;
            let (mut report, threshold) = match config.task {
                TaskKind::Graded => (graded_report(&test_preds), None),
                TaskKind::Binary => {
                    let policy = match config.threshold {
                        ThresholdRule::DevF1 => {
                            let dev_preds =
                                predictions(&inputs, &outcome.params, &dev_set, dev_skipped)?;
                            ThresholdPolicy::TuneOnDev {
                                gold: dev_preds.gold_labels(),
                                scores: dev_preds.scores,
                            }
                        }
                        ThresholdRule::HalfScale => {
                            ThresholdPolicy::Fixed(config.train.max_score / 2.0)
                        }
                    };
                    let r = binary_report(&test_preds, &policy)?;
                    let t = r.threshold;
                    (r, t)
                }
            };
            report.seed = Some(seed);

            let checkpoint = Checkpoint {
                params: outcome.params,
                meta: CheckpointMeta {
                    threshold,
                    seed,
                    best_epoch: outcome.best_epoch,
                    ..meta_base.clone()
                },
            };
            let ck_path = out_dir.join(format!("seed-{seed}.ckpt"));
            checkpoint.save(&ck_path)?;
            let log_path = out_dir.join(format!("seed-{seed}.log"));
            fs::write(&log_path, outcome.log.to_text())?;
            fs::write(
                out_dir.join(format!("seed-{seed}.report.json")),
                report.to_json() + "\n",
            )?;
            checkpoints.push(ck_path);
            logs.push(log_path);
            Ok(report)
        },
    )?;

    let report_path = out_dir.join("report.json");
    fs::write(&report_path, report.to_json() + "\n")?;
    Ok(TrainRun {
        report,
        checkpoints,
        logs,
        report_path,
    })
}

/// Paths that override those recorded in a checkpoint.
#[derive(Debug, Clone, Default)]
pub struct ResourceOverrides {
    pub embeddings: Option<PathBuf>,
    pub window_space: Option<PathBuf>,
    pub dependency_space: Option<PathBuf>,
    /// Fail instead of warning when a file's fingerprint differs from the
    /// one recorded at train time.
    pub strict: bool,
}

fn check_fingerprint(
    label: &str,
    recorded: Option<&FileRef>,
    used: &Path,
    strict: bool,
) -> Result<()> {
    let Some(recorded) = recorded else {
        return Ok(());
    };
    let actual =
        fingerprint_file(used).with_context(|| format!("cannot read {}", used.display()))?;
    if actual != recorded.sha256 {
        let msg = format!(
            "{label} {} differs from the file used in training ({})",
            used.display(),
            recorded.path
        );
        if strict {
            bail!(msg);
        }
        warn!("{msg}");
    }
    Ok(())
}

/// Rebuilds a scoring bundle from a checkpoint and its resource files.
pub fn load_bundle(
    checkpoint: &Path,
    overrides: &ResourceOverrides,
) -> Result<(ModelBundle, CheckpointMeta)> {
    let Checkpoint { params, meta } = Checkpoint::load(checkpoint)
        .with_context(|| format!("loading checkpoint {}", checkpoint.display()))?;

    // relative recorded paths are looked up next to the checkpoint first
    let ckpt_dir = checkpoint.parent().unwrap_or(Path::new(""));
    let resolve = |recorded: &str| -> PathBuf {
        let p = PathBuf::from(recorded);
        if p.is_relative() && ckpt_dir.join(&p).exists() {
            ckpt_dir.join(p)
        } else {
            p
        }
    };
    let pick =
        |over: &Option<PathBuf>, recorded: &Option<FileRef>, label: &str| -> Result<PathBuf> {
            over.clone()
                .or_else(|| recorded.as_ref().map(|r| resolve(&r.path)))
                .ok_or_else(|| anyhow!("no {label} given and none recorded in the checkpoint"))
        };

    let emb_path = pick(&overrides.embeddings, &meta.embeddings, "embeddings")?;
    check_fingerprint(
        "embeddings",
        meta.embeddings.as_ref(),
        &emb_path,
        overrides.strict,
    )?;
    let embeddings = EmbeddingTable::load(
        &emb_path,
        &LoadOptions {
            expected_dim: Some(params.dims.input),
            lowercase: meta.lowercase,
        },
    )
    .with_context(|| format!("loading embeddings {}", emb_path.display()))?;

    let spaces = if params.dims.sdf {
        let wpath = pick(&overrides.window_space, &meta.window_space, "window space")?;
        let dpath = pick(
            &overrides.dependency_space,
            &meta.dependency_space,
            "dependency space",
        )?;
        check_fingerprint(
            "window space",
            meta.window_space.as_ref(),
            &wpath,
            overrides.strict,
        )?;
        check_fingerprint(
            "dependency space",
            meta.dependency_space.as_ref(),
            &dpath,
            overrides.strict,
        )?;
        let load = |p: &Path| -> Result<SparseSpace> {
            match SparseSpace::load(p) {
                Ok(s) => Ok(s),
                Err(crate::sparse::SparseError::NotAnArchive) => Err(anyhow!(
                    "{} is not a space archive; build one with `lexent build-space`",
                    p.display()
                )),
                Err(e) => Err(e.into()),
            }
        };
        Some(SpacePair {
            window: load(&wpath)?,
            dependency: load(&dpath)?,
        })
    } else {
        None
    };
    Ok((ModelBundle::new(params, embeddings, spaces)?, meta))
}

/// Evaluates a checkpoint on a dataset. For binary data the threshold is,
/// in order of preference: `threshold`, tuned on `dev`, the one stored in
/// the checkpoint, or half the scale.
pub fn evaluate_checkpoint(
    bundle: &ModelBundle,
    meta: &CheckpointMeta,
    data: &Path,
    task: TaskKind,
    dev: Option<&Path>,
    threshold: Option<f64>,
) -> Result<EvalReport> {
    let s = bundle.max_score();
    let pairs = load_pairs(data, task, s).with_context(|| format!("reading {}", data.display()))?;
    let preds = crate::eval::predict(bundle, &pairs);
    let mut report = match task {
        TaskKind::Graded => graded_report(&preds),
        TaskKind::Binary => {
            let policy = if let Some(t) = threshold {
                ThresholdPolicy::Fixed(t)
            } else if let Some(dev) = dev {
                let dev_pairs = load_pairs(dev, task, s)?;
                let dev_preds = crate::eval::predict(bundle, &dev_pairs);
                ThresholdPolicy::TuneOnDev {
                    gold: dev_preds.gold_labels(),
                    scores: dev_preds.scores,
                }
            } else {
                ThresholdPolicy::Fixed(meta.threshold.unwrap_or(s / 2.0))
            };
            binary_report(&preds, &policy)?
        }
    };
    report.seed = Some(meta.seed);
    Ok(report)
}

/// Scores `word1 TAB word2` lines, writing `word1 TAB word2 TAB score`.
/// Pairs that cannot be scored get `NA` and a reason column.
pub fn score_stream<R: BufRead, W: Write>(
    bundle: &ModelBundle,
    input: R,
    mut out: W,
) -> Result<usize> {
    let mut n = 0;
    for line in input.lines() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if cols.len() < 2 || cols[0].is_empty() || cols[1].is_empty() {
            writeln!(out, "{line}\tNA\tmalformed")?;
            continue;
        }
        let (w1, w2) = (cols[0], cols[1]);
        match bundle.score_pair(w1, w2) {
            Some(score) => writeln!(out, "{w1}\t{w2}\t{score}")?,
            None => {
                let missing: Vec<&str> = [w1, w2]
                    .into_iter()
                    .filter(|w| !bundle.embeddings.contains(w))
                    .collect();
                writeln!(out, "{w1}\t{w2}\tNA\toov:{}", missing.join(","))?;
            }
        }
        n += 1;
    }
    out.flush()?;
    Ok(n)
}
