//! Line-oriented trace files.
//!
//! One JSON object per line, fields in this fixed order:
//!
//! ```text
//! {"epoch":1,"metrics":[24 values],"selections":{"dqn":..,"ahp":..,"saw":..,"wpm":..,"topsis":..,"oracle":..},"dqn_reward":..,"epsilon":..}
//! ```
//!
//! `metrics` is RAT-major (5G, 4G, WiFi, LEO) with B, L, J, P, U, C per RAT.
//! Selections are network names (`5G`, `4G`, `WiFi`, `LEO`). Floats use the
//! shortest representation that parses back to the same value.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::env::{EnvState, RatId, STATE_DIM};
use crate::error::{Error, Result};

use super::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Selections {
    pub dqn: RatId,
    pub ahp: RatId,
    pub saw: RatId,
    pub wpm: RatId,
    pub topsis: RatId,
    pub oracle: RatId,
}

impl Selections {
    pub fn get(&self, method: Method) -> RatId {
        match method {
            Method::Dqn => self.dqn,
            Method::Ahp => self.ahp,
            Method::Saw => self.saw,
            Method::Wpm => self.wpm,
            Method::Topsis => self.topsis,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpochRecord {
    pub epoch: u64,
    pub metrics: Vec<f64>,
    pub selections: Selections,
    pub dqn_reward: f64,
    pub epsilon: f64,
}

impl EpochRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("epoch record serializes")
    }

    pub fn from_line(line: &str) -> Result<Self> {
        let rec: EpochRecord = serde_json::from_str(line).map_err(|e| Error::parse("trace record", e))?;
        if rec.metrics.len() != STATE_DIM {
            return Err(Error::Dimension {
                expected: STATE_DIM,
                actual: rec.metrics.len(),
            });
        }
        Ok(rec)
    }

    /// Rebuild the sampled environment of this epoch.
    pub fn state(&self) -> Result<EnvState> {
        EnvState::from_raw_vector(&self.metrics)
    }
}

/// Appends records one line at a time and flushes after each, so a crash
/// leaves every completed epoch readable.
pub struct TraceWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl TraceWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        Ok(TraceWriter {
            path: path.to_path_buf(),
            out: BufWriter::new(file),
        })
    }

    pub fn append(&mut self, rec: &EpochRecord) -> Result<()> {
        let path = &self.path;
        writeln!(self.out, "{}", rec.to_line())
            .and_then(|_| self.out.flush())
            .map_err(|e| Error::io(path, e))
    }
}

pub fn write_trace(path: &Path, records: &[EpochRecord]) -> Result<()> {
    let mut w = TraceWriter::create(path)?;
    records.iter().try_for_each(|r| w.append(r))
}

pub fn read_trace(path: &Path) -> Result<Vec<EpochRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records: Vec<EpochRecord> = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = EpochRecord::from_line(&line).map_err(|e| {
            Error::parse(format!("{}:{}", path.display(), n + 1), e)
        })?;
        if let Some(prev) = records.last() {
            if rec.epoch <= prev.epoch {
                return Err(Error::Validation(format!(
                    "{}:{}: epoch {} does not follow {}",
                    path.display(),
                    n + 1,
                    rec.epoch,
                    prev.epoch
                )));
            }
        }
        records.push(rec);
    }
    Ok(records)
}
