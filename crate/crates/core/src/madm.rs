//! Multi-attribute decision making baselines: SAW, WPM, TOPSIS and AHP.
//!
//! The methods are stateless: each epoch builds a fresh decision matrix of
//! networks by criteria and ranks it from scratch.
//!
//! Normalization per method:
//! - SAW: min-max per column; a constant column scores 1.0 everywhere.
//! - WPM: ratio to the column best (`x / max` for benefit, `min / x` for
//!   cost), with values floored at [`WPM_FLOOR`].
//! - TOPSIS: Euclidean column norm.
//! - AHP: criteria weights from a pairwise comparison matrix (row geometric
//!   means), then SAW aggregation of the alternatives.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::env::{EnvState, Metric, RatId, NUM_METRICS};
use crate::error::{Error, Result};
use crate::reward::DynamicWeights;

pub const WPM_FLOOR: f64 = 1e-9;
const WEIGHT_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionKind {
    Benefit,
    Cost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MadmMethod {
    Saw,
    Wpm,
    Topsis,
    Ahp,
}

impl MadmMethod {
    pub const ALL: [MadmMethod; 4] = [MadmMethod::Ahp, MadmMethod::Saw, MadmMethod::Wpm, MadmMethod::Topsis];

    pub fn name(self) -> &'static str {
        match self {
            MadmMethod::Saw => "saw",
            MadmMethod::Wpm => "wpm",
            MadmMethod::Topsis => "topsis",
            MadmMethod::Ahp => "ahp",
        }
    }
}

impl fmt::Display for MadmMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Alternatives (rows) scored on weighted benefit/cost criteria (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    values: Vec<Vec<f64>>,
    kinds: Vec<CriterionKind>,
    weights: Vec<f64>,
}

impl DecisionMatrix {
    pub fn new(values: Vec<Vec<f64>>, kinds: Vec<CriterionKind>, weights: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation("decision matrix has no alternatives".into()));
        }
        let cols = kinds.len();
        if cols == 0 {
            return Err(Error::Validation("decision matrix has no criteria".into()));
        }
        if weights.len() != cols {
            return Err(Error::Dimension {
                expected: cols,
                actual: weights.len(),
            });
        }
        for row in &values {
            if row.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    actual: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::Validation("decision values must be finite and non-negative".into()));
            }
        }
        validate_weights(&weights)?;
        Ok(DecisionMatrix { values, kinds, weights })
    }

    /// Four networks by (B, L, J, P, U, C); bandwidth is the only benefit column.
    pub fn from_state(state: &EnvState, weights: &[f64]) -> Result<Self> {
        let values = RatId::ALL
            .iter()
            .map(|&r| state.metrics(r).to_array().to_vec())
            .collect();
        let kinds = Metric::ALL
            .iter()
            .map(|m| if m.is_benefit() { CriterionKind::Benefit } else { CriterionKind::Cost })
            .collect();
        Self::new(values, kinds, weights.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.values.len()
    }

    pub fn cols(&self) -> usize {
        self.kinds.len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn kinds(&self) -> &[CriterionKind] {
        &self.kinds
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        Self::new(self.values.clone(), self.kinds.clone(), weights)
    }

    fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(move |r| r[j])
    }
}

fn validate_weights(weights: &[f64]) -> Result<()> {
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Validation("weights must be finite and non-negative".into()));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::Validation(format!("weights must sum to 1, got {sum}")));
    }
    Ok(())
}

/// The reward's base weights (4, 4, 2.5, 4, 3, 2) scaled to sum to one.
pub fn default_weights() -> [f64; NUM_METRICS] {
    let base = DynamicWeights::BASE;
    let total: f64 = base.iter().sum();
    base.map(|b| b / total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub method: MadmMethod,
    pub scores: Vec<f64>,
    /// Alternative indices, best first; equal scores keep index order.
    pub order: Vec<usize>,
}

impl Ranking {
    fn from_scores(method: MadmMethod, scores: Vec<f64>) -> Self {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        Ranking { method, scores, order }
    }

    pub fn best(&self) -> usize {
        self.order[0]
    }

    /// Best alternative as a network; only meaningful for 4-row matrices.
    pub fn best_rat(&self) -> RatId {
        RatId::from_index(self.best()).expect("ranking over the four networks")
    }
}

fn min_max(col: impl Iterator<Item = f64>) -> (f64, f64) {
    col.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn min_max_normalized(dm: &DecisionMatrix) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; dm.cols()]; dm.rows()];
    for j in 0..dm.cols() {
        let (lo, hi) = min_max(dm.column(j));
        for (i, row) in dm.values.iter().enumerate() {
            out[i][j] = if hi == lo {
                1.0
            } else {
                match dm.kinds[j] {
                    CriterionKind::Benefit => (row[j] - lo) / (hi - lo),
                    CriterionKind::Cost => (hi - row[j]) / (hi - lo),
                }
            };
        }
    }
    out
}

fn weighted_sum(norm: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    norm.iter()
        .map(|row| row.iter().zip(weights).map(|(x, w)| x * w).sum())
        .collect()
}

/// Simple additive weighting over min-max normalized values.
pub fn saw(dm: &DecisionMatrix) -> Ranking {
    Ranking::from_scores(MadmMethod::Saw, weighted_sum(&min_max_normalized(dm), &dm.weights))
}

/// Weighted product over ratio-normalized values.
pub fn wpm(dm: &DecisionMatrix) -> Ranking {
    let cols = dm.cols();
    let mut scores = vec![1.0; dm.rows()];
    for j in 0..cols {
        let (lo, hi) = min_max(dm.column(j).map(|v| v.max(WPM_FLOOR)));
        for (score, row) in scores.iter_mut().zip(&dm.values) {
            let x = row[j].max(WPM_FLOOR);
            let r = match dm.kinds[j] {
                CriterionKind::Benefit => x / hi,
                CriterionKind::Cost => lo / x,
            };
            *score *= r.powf(dm.weights[j]);
        }
    }
    Ranking::from_scores(MadmMethod::Wpm, scores)
}

/// Closeness to the positive ideal relative to both ideals.
pub fn topsis(dm: &DecisionMatrix) -> Ranking {
    let (rows, cols) = (dm.rows(), dm.cols());
    let mut v = vec![vec![0.0; cols]; rows];
    let mut best = vec![0.0; cols];
    let mut worst = vec![0.0; cols];
    for j in 0..cols {
        let norm = dm.column(j).map(|x| x * x).sum::<f64>().sqrt();
        for (row, src) in v.iter_mut().zip(&dm.values) {
            row[j] = if norm > 0.0 { src[j] / norm * dm.weights[j] } else { 0.0 };
        }
        let (lo, hi) = min_max(v.iter().map(|r| r[j]));
        (best[j], worst[j]) = match dm.kinds[j] {
            CriterionKind::Benefit => (hi, lo),
            CriterionKind::Cost => (lo, hi),
        };
    }
    let dist = |row: &[f64], ideal: &[f64]| {
        row.iter()
            .zip(ideal)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    let scores = v
        .iter()
        .map(|row| {
            let d_plus = dist(row, &best);
            let d_minus = dist(row, &worst);
            if d_plus + d_minus == 0.0 {
                0.5
            } else {
                d_minus / (d_plus + d_minus)
            }
        })
        .collect();
    Ranking::from_scores(MadmMethod::Topsis, scores)
}

/// Saaty's random consistency index for matrices of order `n`.
pub fn random_index(n: usize) -> f64 {
    const RI: [f64; 11] = [0.0, 0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];
    RI.get(n).copied().unwrap_or(1.49)
}

/// Reciprocal pairwise comparison matrix over the criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct PairwiseMatrix {
    a: Vec<Vec<f64>>,
}

impl PairwiseMatrix {
    pub fn new(a: Vec<Vec<f64>>) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::Validation("pairwise matrix is empty".into()));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension { expected: n, actual: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Validation(format!("entry ({i}, {j}) = {v} is not positive")));
                }
                let recip = a[j][i];
                if (v * recip - 1.0).abs() > 1e-9 {
                    return Err(Error::Validation(format!(
                        "entries ({i}, {j}) = {v} and ({j}, {i}) = {recip} are not reciprocal"
                    )));
                }
            }
        }
        Ok(PairwiseMatrix { a })
    }

    pub fn ones(n: usize) -> Self {
        PairwiseMatrix { a: vec![vec![1.0; n]; n] }
    }

    /// Perfectly consistent matrix `a_ij = w_i / w_j`.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Validation("weights must be positive to form ratios".into()));
        }
        Self::new(
            weights
                .iter()
                .map(|wi| weights.iter().map(|wj| wi / wj).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.a
    }
}

impl Default for PairwiseMatrix {
    fn default() -> Self {
        PairwiseMatrix::from_weights(&default_weights()).expect("default weights are positive")
    }
}

impl TryFrom<Vec<Vec<f64>>> for PairwiseMatrix {
    type Error = Error;

    fn try_from(a: Vec<Vec<f64>>) -> Result<Self> {
        PairwiseMatrix::new(a)
    }
}

impl From<PairwiseMatrix> for Vec<Vec<f64>> {
    fn from(p: PairwiseMatrix) -> Self {
        p.a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AhpWeights {
    pub weights: Vec<f64>,
    pub lambda_max: f64,
    pub consistency_ratio: f64,
}

/// Row geometric means, normalized to sum 1, plus the consistency ratio
/// from the weighted-sum estimate of the principal eigenvalue.
pub fn ahp_weights(p: &PairwiseMatrix) -> AhpWeights {
    let n = p.order();
    let geo: Vec<f64> = p
        .a
        .iter()
        .map(|row| row.iter().map(|v| v.ln()).sum::<f64>() / n as f64)
        .map(f64::exp)
        .collect();
    let total: f64 = geo.iter().sum();
    let weights: Vec<f64> = geo.iter().map(|g| g / total).collect();

    let lambda_max = p
        .a
        .iter()
        .zip(&weights)
        .map(|(row, wi)| row.iter().zip(&weights).map(|(a, w)| a * w).sum::<f64>() / wi)
        .sum::<f64>()
        / n as f64;

    let ri = random_index(n);
    let mut ci = if n > 1 { (lambda_max - n as f64) / (n as f64 - 1.0) } else { 0.0 };
    // Rounding noise on a consistent matrix.
    if ci.abs() < 1e-10 {
        ci = 0.0;
    }
    let consistency_ratio = if ri > 0.0 { ci / ri } else { 0.0 };
    AhpWeights {
        weights,
        lambda_max,
        consistency_ratio,
    }
}

/// AHP criteria weights followed by SAW aggregation of the alternatives.
pub fn ahp_rank(dm: &DecisionMatrix, p: &PairwiseMatrix) -> Result<Ranking> {
    if p.order() != dm.cols() {
        return Err(Error::Dimension {
            expected: dm.cols(),
            actual: p.order(),
        });
    }
    let w = ahp_weights(p).weights;
    let scores = weighted_sum(&min_max_normalized(dm), &w);
    Ok(Ranking::from_scores(MadmMethod::Ahp, scores))
}
