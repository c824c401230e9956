//! Interval statistics over a trace: how often each method picked 5G, and
//! how often it agreed with the reward oracle.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::env::RatId;
use crate::error::{Error, Result};

use super::trace::EpochRecord;
use super::Method;

/// Width of the trailing window reported in addition to the regular intervals.
pub const TAIL_WINDOW: usize = 100;

/// One value per method, in (dqn, ahp, saw, wpm, topsis) order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerMethod {
    pub dqn: f64,
    pub ahp: f64,
    pub saw: f64,
    pub wpm: f64,
    pub topsis: f64,
}

impl PerMethod {
    pub fn get(&self, m: Method) -> f64 {
        match m {
            Method::Dqn => self.dqn,
            Method::Ahp => self.ahp,
            Method::Saw => self.saw,
            Method::Wpm => self.wpm,
            Method::Topsis => self.topsis,
        }
    }

    fn from_fn(mut f: impl FnMut(Method) -> f64) -> Self {
        PerMethod {
            dqn: f(Method::Dqn),
            ahp: f(Method::Ahp),
            saw: f(Method::Saw),
            wpm: f(Method::Wpm),
            topsis: f(Method::Topsis),
        }
    }

    /// Largest value among the four MADM baselines.
    pub fn best_baseline(&self) -> (Method, f64) {
        Method::BASELINES
            .iter()
            .map(|&m| (m, self.get(m)))
            .fold((Method::Ahp, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalKind {
    Interval,
    Tail,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSummary {
    pub label: String,
    pub kind: IntervalKind,
    pub first_epoch: u64,
    pub last_epoch: u64,
    pub epochs: usize,
    /// Percentage of epochs on which each method selected 5G.
    pub five_g: PerMethod,
    /// Percentage of epochs on which each method matched the oracle.
    pub oracle_agreement: PerMethod,
}

fn percent(count: usize, total: usize) -> f64 {
    100.0 * count as f64 / total as f64
}

fn summarize_slice(records: &[EpochRecord], kind: IntervalKind) -> IntervalSummary {
    let n = records.len();
    let first = records[0].epoch;
    let last = records[n - 1].epoch;
    let count = |pred: &dyn Fn(&EpochRecord) -> bool| records.iter().filter(|r| pred(r)).count();
    IntervalSummary {
        label: format!("{first}-{last}"),
        kind,
        first_epoch: first,
        last_epoch: last,
        epochs: n,
        five_g: PerMethod::from_fn(|m| percent(count(&|r| r.selections.get(m) == RatId::FiveG), n)),
        oracle_agreement: PerMethod::from_fn(|m| {
            percent(count(&|r| r.selections.get(m) == r.selections.oracle), n)
        }),
    }
}

/// Consecutive `width`-epoch intervals, then a final-100 tail row when the
/// trace spans several intervals wider than the tail, then an all-epochs row.
pub fn summarize(trace: &[EpochRecord], width: usize) -> Result<Vec<IntervalSummary>> {
    if trace.is_empty() {
        return Err(Error::Validation("cannot summarize an empty trace".into()));
    }
    if width == 0 {
        return Err(Error::Validation("interval width must be >= 1".into()));
    }
    let mut out: Vec<IntervalSummary> = trace
        .chunks(width)
        .map(|c| summarize_slice(c, IntervalKind::Interval))
        .collect();
    if trace.len() > width && width > TAIL_WINDOW {
        out.push(summarize_slice(&trace[trace.len() - TAIL_WINDOW..], IntervalKind::Tail));
    }
    out.push(summarize_slice(trace, IntervalKind::All));
    Ok(out)
}

/// Summary rows restricted to an arbitrary epoch window (inclusive).
pub fn summarize_window(trace: &[EpochRecord], first: u64, last: u64) -> Result<IntervalSummary> {
    let slice: Vec<EpochRecord> = trace
        .iter()
        .filter(|r| r.epoch >= first && r.epoch <= last)
        .cloned()
        .collect();
    if slice.is_empty() {
        return Err(Error::Validation(format!("no epochs in {first}-{last}")));
    }
    Ok(summarize_slice(&slice, IntervalKind::Interval))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub intervals: Vec<IntervalSummary>,
    /// DQN agreement over the last regular interval.
    pub headline: f64,
    pub headline_label: String,
}

pub fn oracle_check(trace: &[EpochRecord], width: usize) -> Result<OracleReport> {
    let intervals = summarize(trace, width)?;
    let last = intervals
        .iter()
        .rev()
        .find(|s| s.kind == IntervalKind::Interval)
        .expect("at least one interval");
    Ok(OracleReport {
        headline: last.oracle_agreement.dqn,
        headline_label: last.label.clone(),
        intervals,
    })
}

fn table(rows: &[IntervalSummary], title: &str, pick: impl Fn(&IntervalSummary) -> PerMethod) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{title}");
    let _ = write!(s, "{:<12}", "epochs");
    for m in Method::ALL {
        let _ = write!(s, "{:>9}", m.column_title());
    }
    s.push('\n');
    for r in rows {
        let _ = write!(s, "{:<12}", r.label);
        let v = pick(r);
        for m in Method::ALL {
            let _ = write!(s, "{:>9.2}", v.get(m));
        }
        s.push('\n');
    }
    s
}

/// Percentage of 5G selections per interval, one column per method.
pub fn format_five_g_table(rows: &[IntervalSummary]) -> String {
    table(rows, "5G selection (%)", |r| r.five_g)
}

pub fn format_agreement_table(rows: &[IntervalSummary]) -> String {
    table(rows, "Oracle agreement (%)", |r| r.oracle_agreement)
}
