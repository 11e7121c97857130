//! Versioned binary checkpoints.
//!
//! Layout: magic, version, dims, max score, every trainable tensor (name and
//! raw `f64` bits), then the metadata describing which files the model was
//! trained against.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::params::{Dims, ModelParams};
use super::ModelError;
use crate::archive::{is_truncation, ArchiveReader, ArchiveWriter};
use crate::eval::TaskKind;

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"LXMODEL\0";
pub const CHECKPOINT_VERSION: u32 = 1;

/// A file used at train time and its SHA-256.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileRef {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointMeta {
    pub embeddings: Option<FileRef>,
    pub lowercase: bool,
    pub window_space: Option<FileRef>,
    pub dependency_space: Option<FileRef>,
    pub task: TaskKind,
    /// Decision threshold tuned on dev data, for binary tasks.
    pub threshold: Option<f64>,
    pub seed: u64,
    pub best_epoch: u32,
}

impl Default for CheckpointMeta {
    fn default() -> Self {
        CheckpointMeta {
            embeddings: None,
            lowercase: false,
            window_space: None,
            dependency_space: None,
            task: TaskKind::Graded,
            threshold: None,
            seed: 0,
            best_epoch: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub params: ModelParams,
    pub meta: CheckpointMeta,
}

fn io_err(e: std::io::Error) -> ModelError {
    if is_truncation(&e) {
        ModelError::Checkpoint("checkpoint is truncated".into())
    } else if e.kind() == std::io::ErrorKind::InvalidData {
        ModelError::Checkpoint(e.to_string())
    } else {
        ModelError::Io(e)
    }
}

fn write_file_ref<W: Write>(w: &mut ArchiveWriter<W>, r: &Option<FileRef>) -> std::io::Result<()> {
    match r {
        Some(r) => {
            w.u8(1)?;
            w.str(&r.path)?;
            w.str(&r.sha256)
        }
        None => w.u8(0),
    }
}

fn read_file_ref<R: Read>(r: &mut ArchiveReader<R>) -> std::io::Result<Option<FileRef>> {
    if r.bool()? {
        Ok(Some(FileRef {
            path: r.str()?,
            sha256: r.str()?,
        }))
    } else {
        Ok(None)
    }
}

impl Checkpoint {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        let file = BufWriter::new(File::create(path)?);
        self.write_to(file)?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.write_to(Vec::new())
            .expect("writing to memory cannot fail")
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<W, ModelError> {
        let p = &self.params;
        let mut w = ArchiveWriter::new(out);
        w.bytes(CHECKPOINT_MAGIC)?;
        w.u32(CHECKPOINT_VERSION)?;
        w.len(p.dims.input)?;
        w.len(p.dims.mapped)?;
        w.len(p.dims.hidden)?;
        w.u8(p.dims.sdf as u8)?;
        w.f64(p.max_score)?;
        let tensors = p.tensors();
        w.len(tensors.len())?;
        for (name, values) in tensors {
            w.str(name)?;
            w.f64s(values)?;
        }

        let m = &self.meta;
        write_file_ref(&mut w, &m.embeddings)?;
        w.u8(m.lowercase as u8)?;
        write_file_ref(&mut w, &m.window_space)?;
        write_file_ref(&mut w, &m.dependency_space)?;
        w.str(m.task.as_str())?;
        match m.threshold {
            Some(t) => {
                w.u8(1)?;
                w.f64(t)?;
            }
            None => w.u8(0)?,
        }
        w.u64(m.seed)?;
        w.u32(m.best_epoch)?;
        Ok(w.finish()?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        let file = BufReader::new(File::open(path)?);
        Self::read_from(file)
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self, ModelError> {
        let mut r = ArchiveReader::new(input);
        let magic: [u8; 8] = r.array().map_err(io_err)?;
        if &magic != CHECKPOINT_MAGIC {
            return Err(ModelError::Checkpoint("not a model checkpoint".into()));
        }
        let version = r.u32().map_err(io_err)?;
        if version != CHECKPOINT_VERSION {
            return Err(ModelError::Checkpoint(format!(
                "unsupported checkpoint version {version} (supported: {CHECKPOINT_VERSION})"
            )));
        }
        let checkpoint = Self::read_body(&mut r).map_err(io_err)?;
        r.finish().map_err(io_err)?;
        checkpoint
    }

    fn read_body<R: Read>(r: &mut ArchiveReader<R>) -> std::io::Result<Result<Self, ModelError>> {
        const LIMIT: usize = 1 << 24;
        let input = r.len(LIMIT)?;
        let mapped = r.len(LIMIT)?;
        let hidden = r.len(LIMIT)?;
        let sdf = r.bool()?;
        let max_score = r.f64()?;
        if !(max_score > 0.0 && max_score.is_finite()) {
            return Ok(Err(ModelError::Checkpoint(format!(
                "invalid max score {max_score}"
            ))));
        }
        let mut params = ModelParams::zeros(Dims::new(input, mapped, hidden, sdf), max_score);
        let n_tensors = r.len(64)?;
        let mut tensors = params.tensors_mut();
        if n_tensors != tensors.len() {
            return Ok(Err(ModelError::Checkpoint(format!(
                "expected {} tensors, found {n_tensors}",
                tensors.len()
            ))));
        }
        for (name, dst) in tensors.iter_mut() {
            let stored = r.str()?;
            if stored != *name {
                return Ok(Err(ModelError::Checkpoint(format!(
                    "expected tensor {name}, found {stored}"
                ))));
            }
            let values = r.f64s(dst.len())?;
            dst.copy_from_slice(&values);
        }
        drop(tensors);

        let embeddings = read_file_ref(r)?;
        let lowercase = r.bool()?;
        let window_space = read_file_ref(r)?;
        let dependency_space = read_file_ref(r)?;
        let task = match TaskKind::parse(&r.str()?) {
            Some(t) => t,
            None => return Ok(Err(ModelError::Checkpoint("unknown task kind".into()))),
        };
        let threshold = if r.bool()? { Some(r.f64()?) } else { None };
        let seed = r.u64()?;
        let best_epoch = r.u32()?;
        if !params.is_finite() {
            return Ok(Err(ModelError::Checkpoint("non-finite parameter".into())));
        }
        Ok(Ok(Checkpoint {
            params,
            meta: CheckpointMeta {
                embeddings,
                lowercase,
                window_space,
                dependency_space,
                task,
                threshold,
                seed,
                best_epoch,
            },
        }))
    }
}
