use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use super::{reduce_parameter_capped, ReductionCertificate};
use crate::cubic_core::CubicParams;
use crate::embeddings::PRECISION_CAP;
use crate::error::{Error, Result};

/// Parameters per parallel batch; each batch is written in ascending order.
const CHUNK: i64 = 512;

/// Append-only JSONL sink. Appends are serialized through a mutex.
pub struct CertificateSink {
    inner: Mutex<Box<dyn Write + Send>>,
    path: Option<PathBuf>,
}

impl CertificateSink {
    /// Appends to `path`, creating it if needed. A trailing partial line
    /// left by an interrupted run is cut off first.
    pub fn append_to(path: impl AsRef<Path>) -> Result<Self> {
        drop_partial_line(path.as_ref())?;
        let file = OpenOptions::new().create(true).append(true).open(path.as_ref())?;
        Ok(Self {
            inner: Mutex::new(Box::new(BufWriter::new(file))),
            path: Some(path.as_ref().to_path_buf()),
        })
    }

    pub fn from_writer(w: impl Write + Send + 'static) -> Self {
        Self {
            inner: Mutex::new(Box::new(w)),
            path: None,
        }
    }

    /// Discards everything.
    pub fn null() -> Self {
        Self::from_writer(std::io::sink())
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn write_all(&self, certs: &[ReductionCertificate]) -> Result<()> {
        let mut w = self.inner.lock().expect("sink lock poisoned");
        for c in certs {
            serde_json::to_writer(&mut *w, c)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }
}

fn drop_partial_line(path: &Path) -> Result<()> {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(()),
        Err(e) => return Err(e.into()),
    };
    if bytes.last().is_none_or(|&b| b == b'\n') {
        return Ok(());
    }
    let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
    OpenOptions::new().write(true).open(path)?.set_len(keep as u64)?;
    Ok(())
}

/// Parameters already present in a certificate file. A truncated last line
/// is ignored.
pub fn completed_parameters(path: impl AsRef<Path>) -> Result<BTreeSet<i64>> {
    let mut done = BTreeSet::new();
    let file = match File::open(path.as_ref()) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(e.into()),
    };
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(c) = serde_json::from_str::<ReductionCertificate>(&line) {
            if let Some(a) = c.a.to_i64() {
                done.insert(a);
            }
        }
    }
    Ok(done)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepSummary {
    pub from: i64,
    pub to: i64,
    pub certificates: usize,
    pub contradictions: usize,
    pub skipped: usize,
    /// Parameters whose certificate has `contradiction = false`.
    pub no_contradiction: Vec<i64>,
    /// Parameters where the reduction itself failed, with the reason.
    pub failures: Vec<(i64, String)>,
}

impl SweepSummary {
    /// Every parameter in range has a certificate with a contradiction.
    pub fn all_contradictions(&self) -> bool {
        self.failures.is_empty()
            && self.no_contradiction.is_empty()
            && (self.contradictions + self.skipped) as i64 == self.to - self.from + 1
    }
}

/// Reduces every `a` in `[from, to]` except those in `skip`, writing
/// certificates to `sink`. Per-parameter errors are collected, never fatal.
pub fn sweep(
    from: i64,
    to: i64,
    skip: &BTreeSet<i64>,
    precision_cap: Option<u32>,
    sink: &CertificateSink,
) -> Result<SweepSummary> {
    if from <= 100 || to < from {
        return Err(Error::Domain(format!("sweep range must satisfy 100 < from <= to, got {from}..{to}")));
    }
    let cap = precision_cap.unwrap_or(PRECISION_CAP);
    let mut summary = SweepSummary {
        from,
        to,
        ..Default::default()
    };
    let mut start = from;
    while start <= to {
        let end = (start + CHUNK - 1).min(to);
        let todo: Vec<i64> = (start..=end).filter(|a| !skip.contains(a)).collect();
        summary.skipped += (end - start + 1) as usize - todo.len();
        let results: Vec<(i64, Result<ReductionCertificate>)> = todo
            .par_iter()
            .map(|&a| (a, reduce_parameter_capped(&CubicParams::new(BigInt::from(a)), cap)))
            .collect();
        let mut certs = Vec::with_capacity(results.len());
        for (a, r) in results {
            match r {
                Ok(c) => {
                    if c.contradiction {
                        summary.contradictions += 1;
                    } else {
                        summary.no_contradiction.push(a);
                    }
                    certs.push(c);
                }
                Err(e) => summary.failures.push((a, e.to_string())),
            }
        }
        summary.certificates += certs.len();
        sink.write_all(&certs)?;
        start = end + 1;
    }
    Ok(summary)
}
