use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{SpaceKind, SparseError, SparseSpace};
use crate::archive::{is_truncation, ArchiveReader, ArchiveWriter};

pub const SPACE_MAGIC: &[u8; 8] = b"LXSPACE\0";
pub const SPACE_FORMAT_VERSION: u32 = 1;

const MAX_ENTRIES: usize = 1 << 40;

fn io_err(e: std::io::Error) -> SparseError {
    if is_truncation(&e) {
        SparseError::Truncated
    } else if e.kind() == std::io::ErrorKind::InvalidData {
        SparseError::Corrupt(e.to_string())
    } else {
        SparseError::Io(e)
    }
}

impl SparseSpace {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SparseError> {
        let file = BufWriter::new(File::create(path)?);
        self.write_to(file)?;
        Ok(())
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<W, SparseError> {
        let mut w = ArchiveWriter::new(out);
        w.bytes(SPACE_MAGIC)?;
        w.u32(SPACE_FORMAT_VERSION)?;
        match self.kind {
            SpaceKind::Window { window } => {
                w.u8(0)?;
                w.u32(window)?;
            }
            SpaceKind::Dependency => w.u8(1)?,
        }
        w.u64(self.total)?;
        w.len(self.contexts.len())?;
        for (ctx, &n) in self.contexts.iter().zip(&self.context_totals) {
            w.str(ctx)?;
            w.u64(n)?;
        }
        w.len(self.words.len())?;
        for i in 0..self.words.len() {
            w.str(&self.words[i])?;
            w.u64(self.word_totals[i])?;
            w.len(self.context_sets[i].len())?;
            for &id in &self.context_sets[i] {
                w.u32(id)?;
            }
            w.len(self.vectors[i].len())?;
            for &(id, weight) in &self.vectors[i] {
                w.u32(id)?;
                w.f64(weight)?;
            }
        }
        Ok(w.finish()?)
    }

    /// Loads an archive written by [`SparseSpace::save`]. Nothing is returned
    /// unless the whole archive parses.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, SparseError> {
        let file = BufReader::new(File::open(path)?);
        Self::read_from(file)
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self, SparseError> {
        let mut r = ArchiveReader::new(input);
        let magic: [u8; 8] = r.array().map_err(io_err)?;
        if &magic != SPACE_MAGIC {
            return Err(SparseError::NotAnArchive);
        }
        let version = r.u32().map_err(io_err)?;
        if version != SPACE_FORMAT_VERSION {
            return Err(SparseError::Version {
                found: version,
                supported: SPACE_FORMAT_VERSION,
            });
        }
        Self::read_body(&mut r).and_then(|space| {
            r.finish().map_err(io_err)?;
            Ok(space)
        })
    }

    fn read_body<R: Read>(r: &mut ArchiveReader<R>) -> Result<Self, SparseError> {
        let kind = match r.u8().map_err(io_err)? {
            0 => SpaceKind::Window {
                window: r.u32().map_err(io_err)?,
            },
            1 => SpaceKind::Dependency,
            other => return Err(SparseError::Corrupt(format!("unknown space kind {other}"))),
        };
        let total = r.u64().map_err(io_err)?;
        let n_contexts = r.len(MAX_ENTRIES).map_err(io_err)?;
        let mut contexts = Vec::new();
        let mut context_totals = Vec::new();
        for _ in 0..n_contexts {
            contexts.push(r.str().map_err(io_err)?);
            context_totals.push(r.u64().map_err(io_err)?);
        }
        let check_id = |id: u32| -> Result<u32, SparseError> {
            if (id as usize) < n_contexts {
                Ok(id)
            } else {
                Err(SparseError::Corrupt(format!(
                    "context id {id} out of range"
                )))
            }
        };

        let n_words = r.len(MAX_ENTRIES).map_err(io_err)?;
        let mut words = Vec::new();
        let mut word_totals = Vec::new();
        let mut context_sets = Vec::new();
        let mut vectors = Vec::new();
        for _ in 0..n_words {
            words.push(r.str().map_err(io_err)?);
            word_totals.push(r.u64().map_err(io_err)?);
            let n_set = r.len(n_contexts).map_err(io_err)?;
            let mut set = Vec::with_capacity(n_set);
            for _ in 0..n_set {
                set.push(check_id(r.u32().map_err(io_err)?)?);
            }
            let n_vec = r.len(n_contexts).map_err(io_err)?;
            let mut vector = Vec::with_capacity(n_vec);
            for _ in 0..n_vec {
                let id = check_id(r.u32().map_err(io_err)?)?;
                vector.push((id, r.f64().map_err(io_err)?));
            }
            context_sets.push(set);
            vectors.push(vector);
        }
        let word_index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(SparseSpace {
            kind,
            contexts,
            context_totals,
            words,
            word_index,
            word_totals,
            vectors,
            context_sets,
            total,
        })
    }
}
