//! Probability-vector ingestion formats.
//!
//! JSONL: one record per spectrum, `{"id": string, "probs": [4096 floats]}`.
//! Binary FPV1: magic "FPV1", little-endian u32 record count, then
//! count x 4096 float32 payloads preceded per record by a u16 id length and
//! the UTF-8 id bytes.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const PROB_VECTOR_LEN: usize = 4096;
const MAGIC: &[u8; 4] = b"FPV1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbabilityVector {
    pub id: String,
    pub probs: Vec<f32>,
}

impl ProbabilityVector {
    pub fn new(id: impl Into<String>, probs: Vec<f32>) -> Self {
        ProbabilityVector { id: id.into(), probs }
    }

    pub fn is_well_formed(&self) -> bool {
        self.probs.len() == PROB_VECTOR_LEN
            && self.probs.iter().all(|p| p.is_finite() && (0.0..=1.0).contains(p))
    }
}

#[derive(Debug, Error)]
pub enum ProbFileError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes; expected FPV1")]
    BadMagic,
    #[error("truncated record {0}")]
    Truncated(usize),
}

/// Read JSONL records; malformed lines are skipped and counted.
pub fn read_probs_jsonl(path: &Path) -> Result<(Vec<ProbabilityVector>, usize), ProbFileError> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    let mut skipped = 0usize;
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ProbabilityVector>(&line) {
            Ok(pv) if pv.is_well_formed() => out.push(pv),
            _ => skipped += 1,
        }
    }
    Ok((out, skipped))
}

pub fn write_probs_jsonl(path: &Path, records: &[ProbabilityVector]) -> Result<(), ProbFileError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(std::io::Error::other)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_probs_binary(path: &Path) -> Result<Vec<ProbabilityVector>, ProbFileError> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(ProbFileError::BadMagic);
    }
    let mut count_buf = [0u8; 4];
    r.read_exact(&mut count_buf)?;
    let count = u32::from_le_bytes(count_buf) as usize;
    let mut out = Vec::with_capacity(count);
    for rec in 0..count {
        let mut len_buf = [0u8; 2];
        r.read_exact(&mut len_buf).map_err(|_| ProbFileError::Truncated(rec))?;
        let id_len = u16::from_le_bytes(len_buf) as usize;
        let mut id_bytes = vec![0u8; id_len];
        r.read_exact(&mut id_bytes).map_err(|_| ProbFileError::Truncated(rec))?;
        let id = String::from_utf8(id_bytes).map_err(|_| ProbFileError::Truncated(rec))?;
        let mut payload = vec![0u8; PROB_VECTOR_LEN * 4];
        r.read_exact(&mut payload).map_err(|_| ProbFileError::Truncated(rec))?;
        let probs: Vec<f32> = payload
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        out.push(ProbabilityVector { id, probs });
    }
    Ok(out)
}

pub fn write_probs_binary(path: &Path, records: &[ProbabilityVector]) -> Result<(), ProbFileError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(records.len() as u32).to_le_bytes())?;
    for r in records {
        assert_eq!(r.probs.len(), PROB_VECTOR_LEN, "record width");
        w.write_all(&(r.id.len() as u16).to_le_bytes())?;
        w.write_all(r.id.as_bytes())?;
        for p in &r.probs {
            w.write_all(&p.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Dispatch on the file header: FPV1 magic means binary, anything else is
/// treated as JSONL. Returns records plus a skipped-record count.
pub fn read_prob_file(path: &Path) -> Result<(Vec<ProbabilityVector>, usize), ProbFileError> {
    let mut head = [0u8; 4];
    {
        let mut f = std::fs::File::open(path)?;
        let n = f.read(&mut head)?;
        if n < 4 {
            return Ok((Vec::new(), 0));
        }
    }
    if &head == MAGIC {
        Ok((read_probs_binary(path)?, 0))
    } else {
        read_probs_jsonl(path)
    }
}
