//! Plot-ready export of interval summaries.
//!
//! CSV header (column order is stable):
//!
//! ```text
//! interval,dqn,ahp,saw,wpm,topsis,dqn_oracle,ahp_oracle,saw_oracle,wpm_oracle,topsis_oracle,kind,first_epoch,last_epoch,epochs
//! ```
//!
//! The first six columns are the 5G-selection percentages; the `_oracle`
//! columns are oracle-agreement percentages. JSONL carries the same fields,
//! one object per summary row.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::summary::{IntervalKind, IntervalSummary, PerMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "jsonl" => Ok(ExportFormat::Jsonl),
            other => Err(Error::parse("export format", format!("expected csv or jsonl, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Row {
    interval: String,
    dqn: f64,
    ahp: f64,
    saw: f64,
    wpm: f64,
    topsis: f64,
    dqn_oracle: f64,
    ahp_oracle: f64,
    saw_oracle: f64,
    wpm_oracle: f64,
    topsis_oracle: f64,
    kind: IntervalKind,
    first_epoch: u64,
    last_epoch: u64,
    epochs: usize,
}

impl From<&IntervalSummary> for Row {
    fn from(s: &IntervalSummary) -> Self {
        Row {
            interval: s.label.clone(),
            dqn: s.five_g.dqn,
            ahp: s.five_g.ahp,
            saw: s.five_g.saw,
            wpm: s.five_g.wpm,
            topsis: s.five_g.topsis,
            dqn_oracle: s.oracle_agreement.dqn,
            ahp_oracle: s.oracle_agreement.ahp,
            saw_oracle: s.oracle_agreement.saw,
            wpm_oracle: s.oracle_agreement.wpm,
            topsis_oracle: s.oracle_agreement.topsis,
            kind: s.kind,
            first_epoch: s.first_epoch,
            last_epoch: s.last_epoch,
            epochs: s.epochs,
        }
    }
}

impl From<Row> for IntervalSummary {
    fn from(r: Row) -> Self {
        IntervalSummary {
            label: r.interval,
            kind: r.kind,
            first_epoch: r.first_epoch,
            last_epoch: r.last_epoch,
            epochs: r.epochs,
            five_g: PerMethod {
                dqn: r.dqn,
                ahp: r.ahp,
                saw: r.saw,
                wpm: r.wpm,
                topsis: r.topsis,
            },
            oracle_agreement: PerMethod {
                dqn: r.dqn_oracle,
                ahp: r.ahp_oracle,
                saw: r.saw_oracle,
                wpm: r.wpm_oracle,
                topsis: r.topsis_oracle,
            },
        }
    }
}

pub fn write_summaries<W: Write>(summaries: &[IntervalSummary], format: ExportFormat, out: W) -> Result<()> {
    match format {
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for s in summaries {
                w.serialize(Row::from(s)).map_err(|e| Error::parse("csv export", e))?;
            }
            w.flush().map_err(|e| Error::parse("csv export", e))
        }
        ExportFormat::Jsonl => {
            let mut out = out;
            for s in summaries {
                let line = serde_json::to_string(&Row::from(s)).map_err(|e| Error::parse("jsonl export", e))?;
                writeln!(out, "{line}").map_err(|e| Error::parse("jsonl export", e))?;
            }
            Ok(())
        }
    }
}

pub fn export(summaries: &[IntervalSummary], format: ExportFormat, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_summaries(summaries, format, &mut out)?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_summaries(path: &Path, format: ExportFormat) -> Result<Vec<IntervalSummary>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let ctx = || path.display().to_string();
    match format {
        ExportFormat::Csv => csv::Reader::from_reader(file)
            .deserialize::<Row>()
            .map(|r| r.map(IntervalSummary::from).map_err(|e| Error::parse(ctx(), e)))
            .collect(),
        ExportFormat::Jsonl => BufReader::new(file)
            .lines()
            .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()))
            .map(|l| {
                let l = l.map_err(|e| Error::io(path, e))?;
                serde_json::from_str::<Row>(&l)
                    .map(IntervalSummary::from)
                    .map_err(|e| Error::parse(ctx(), e))
            })
            .collect(),
    }
}
