//! Little-endian primitives shared by the space and checkpoint archives.
//!
//! Every archive starts with an 8-byte magic tag and a `u32` format version
//! and ends with the [`END_MARKER`]. Floats are stored as raw IEEE-754 bits so
//! a save/load round trip is bit-exact.

use std::io::{self, Read, Write};

pub const END_MARKER: &[u8; 4] = b"END\n";

pub struct ArchiveWriter<W: Write> {
    inner: W,
}

impl<W: Write> ArchiveWriter<W> {
    pub fn new(inner: W) -> Self {
        ArchiveWriter { inner }
    }

    pub fn bytes(&mut self, bytes: &[u8]) -> io::Result<()> {
        self.inner.write_all(bytes)
    }

    pub fn u8(&mut self, v: u8) -> io::Result<()> {
        self.inner.write_all(&[v])
    }

    pub fn u32(&mut self, v: u32) -> io::Result<()> {
        self.inner.write_all(&v.to_le_bytes())
    }

    pub fn u64(&mut self, v: u64) -> io::Result<()> {
        self.inner.write_all(&v.to_le_bytes())
    }

    pub fn f64(&mut self, v: f64) -> io::Result<()> {
        self.inner.write_all(&v.to_le_bytes())
    }

    pub fn len(&mut self, n: usize) -> io::Result<()> {
        self.u64(n as u64)
    }

    pub fn str(&mut self, s: &str) -> io::Result<()> {
        self.len(s.len())?;
        self.inner.write_all(s.as_bytes())
    }

    pub fn opt_str(&mut self, s: Option<&str>) -> io::Result<()> {
        match s {
            Some(s) => {
                self.u8(1)?;
                self.str(s)
            }
            None => self.u8(0),
        }
    }

    pub fn f64s(&mut self, values: &[f64]) -> io::Result<()> {
        self.len(values.len())?;
        for &v in values {
            self.f64(v)?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.inner.write_all(END_MARKER)?;
        self.inner.flush()?;
        Ok(self.inner)
    }
}

pub struct ArchiveReader<R: Read> {
    inner: R,
}

fn corrupt(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

impl<R: Read> ArchiveReader<R> {
    pub fn new(inner: R) -> Self {
        ArchiveReader { inner }
    }

    pub fn array<const N: usize>(&mut self) -> io::Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner.read_exact(&mut buf)?;
        Ok(buf)
    }

    pub fn u8(&mut self) -> io::Result<u8> {
        Ok(self.array::<1>()?[0])
    }

    pub fn bool(&mut self) -> io::Result<bool> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(corrupt(format!("invalid flag byte {other}"))),
        }
    }

    pub fn u32(&mut self) -> io::Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }

    pub fn u64(&mut self) -> io::Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }

    pub fn f64(&mut self) -> io::Result<f64> {
        Ok(f64::from_le_bytes(self.array()?))
    }

    /// Reads a length prefix, rejecting values larger than `limit`.
    pub fn len(&mut self, limit: usize) -> io::Result<usize> {
        let n = self.u64()?;
        if n > limit as u64 {
            return Err(corrupt(format!("length {n} exceeds limit {limit}")));
        }
        Ok(n as usize)
    }

    pub fn str(&mut self) -> io::Result<String> {
        let n = self.len(1 << 20)?;
        let mut buf = vec![0u8; n];
        self.inner.read_exact(&mut buf)?;
        String::from_utf8(buf).map_err(|e| corrupt(e.to_string()))
    }

    pub fn opt_str(&mut self) -> io::Result<Option<String>> {
        if self.bool()? {
            Ok(Some(self.str()?))
        } else {
            Ok(None)
        }
    }

    pub fn f64s(&mut self, expected: usize) -> io::Result<Vec<f64>> {
        let n = self.len(usize::MAX)?;
        if n != expected {
            return Err(corrupt(format!("expected {expected} values, found {n}")));
        }
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.f64()?);
        }
        Ok(out)
    }

    /// Consumes the end marker and checks that nothing follows it.
    pub fn finish(mut self) -> io::Result<()> {
        let marker: [u8; 4] = self.array()?;
        if &marker != END_MARKER {
            return Err(corrupt("missing end marker"));
        }
        let mut rest = [0u8; 1];
        match self.inner.read(&mut rest)? {
            0 => Ok(()),
            _ => Err(corrupt("trailing bytes after end marker")),
        }
    }
}

/// Maps an unexpected EOF to a "truncated" message; other errors pass through.
pub fn is_truncation(err: &io::Error) -> bool {
    err.kind() == io::ErrorKind::UnexpectedEof
}
