//! Reference implementations used as independent oracles. None of these
//! call into the library code paths they check.

#![allow(dead_code, clippy::needless_range_loop, clippy::too_many_arguments)]

use netsel_core::madm::CriterionKind;
use netsel_core::{QNetwork, Transition};

/// Textbook TOPSIS, written column by column with explicit intermediate tables.
pub fn reference_topsis(values: &[Vec<f64>], kinds: &[CriterionKind], weights: &[f64]) -> Vec<f64> {
    let m = values.len();
    let n = kinds.len();

    let mut norms = vec![0.0; n];
    for j in 0..n {
        let mut s = 0.0;
        for i in 0..m {
            s += values[i][j].powi(2);
        }
        norms[j] = s.sqrt();
    }

    let mut weighted = vec![vec![0.0; n]; m];
    for i in 0..m {
        for j in 0..n {
            let r = if norms[j] == 0.0 { 0.0 } else { values[i][j] / norms[j] };
            weighted[i][j] = weights[j] * r;
        }
    }

    let mut a_plus = vec![0.0; n];
    let mut a_minus = vec![0.0; n];
    for j in 0..n {
        let col: Vec<f64> = (0..m).map(|i| weighted[i][j]).collect();
        let max = col.iter().cloned().fold(f64::MIN, f64::max);
        let min = col.iter().cloned().fold(f64::MAX, f64::min);
        match kinds[j] {
            CriterionKind::Benefit => {
                a_plus[j] = max;
                a_minus[j] = min;
            }
            CriterionKind::Cost => {
                a_plus[j] = min;
                a_minus[j] = max;
            }
        }
    }

    (0..m)
        .map(|i| {
            let mut sp = 0.0;
            let mut sm = 0.0;
            for j in 0..n {
                sp += (weighted[i][j] - a_plus[j]).powi(2);
                sm += (weighted[i][j] - a_minus[j]).powi(2);
            }
            let (sp, sm) = (sp.sqrt(), sm.sqrt());
            if sp + sm == 0.0 {
                0.5
            } else {
                sm / (sp + sm)
            }
        })
        .collect()
}

/// Principal eigenvalue by power iteration.
pub fn power_iteration_lambda(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..1000 {
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[i][j] * v[j]).sum()).collect();
        let s: f64 = w.iter().sum();
        lambda = s / v.iter().sum::<f64>();
        v = w.iter().map(|x| x / s).collect();
    }
    lambda
}

/// Forward pass evaluated directly on the flat parameter layout
/// (per layer: row-major `out x in` weights, then biases; ReLU on hidden).
pub fn reference_forward(sizes: &[usize], p: &[f64], x: &[f64]) -> Vec<f64> {
    forward_with_pattern(sizes, p, x).0
}

/// Output plus the on/off pattern of every hidden ReLU.
pub fn forward_with_pattern(sizes: &[usize], p: &[f64], x: &[f64]) -> (Vec<f64>, Vec<bool>) {
    let mut pattern = Vec::new();
    let mut off = 0;
    let mut a = x.to_vec();
    for (li, w) in sizes.windows(2).enumerate() {
        let (n_in, n_out) = (w[0], w[1]);
        let mut z = vec![0.0; n_out];
        for o in 0..n_out {
            let mut s = p[off + n_in * n_out + o];
            for i in 0..n_in {
                s += p[off + o * n_in + i] * a[i];
            }
            let hidden = li + 2 < sizes.len();
            if hidden {
                pattern.push(s > 0.0);
            }
            z[o] = if hidden && s < 0.0 { 0.0 } else { s };
        }
        off += n_in * n_out + n_out;
        a = z;
    }
    (a, pattern)
}

fn patterns(sizes: &[usize], p: &[f64], batch: &[&Transition]) -> Vec<Vec<bool>> {
    batch.iter().map(|t| forward_with_pattern(sizes, p, &t.state).1).collect()
}

pub fn reference_loss(sizes: &[usize], p: &[f64], batch: &[&Transition], targets: &[f64]) -> f64 {
    batch
        .iter()
        .zip(targets)
        .map(|(t, y)| (reference_forward(sizes, p, &t.state)[t.action] - y).powi(2))
        .sum::<f64>()
        / batch.len() as f64
}

#[derive(Debug, Default, PartialEq)]
pub struct GradCheck {
    pub failures: usize,
    /// Parameters whose +/-h probe flips a ReLU, where the loss has a kink
    /// and central differences are meaningless.
    pub kinks: usize,
}

/// Counts parameters whose analytic gradient misses the central difference
/// by more than `rel * max(|a|, |n|)` and more than `abs_floor`.
pub fn gradient_check(
    net: &QNetwork,
    sizes: &[usize],
    batch: &[&Transition],
    targets: &[f64],
    indices: &[usize],
    h: f64,
    rel: f64,
    abs_floor: f64,
) -> GradCheck {
    let (_, grad) = net.loss_and_gradient(batch, targets).unwrap();
    let base = net.params();
    let mut out = GradCheck::default();
    for &k in indices {
        let mut plus = base.clone();
        plus[k] += h;
        let mut minus = base.clone();
        minus[k] -= h;
        if patterns(sizes, &plus, batch) != patterns(sizes, &minus, batch) {
            out.kinks += 1;
            continue;
        }
        let numeric = (reference_loss(sizes, &plus, batch, targets) - reference_loss(sizes, &minus, batch, targets))
            / (2.0 * h);
        let diff = (grad[k] - numeric).abs();
        let scale = grad[k].abs().max(numeric.abs());
        if diff > rel * scale && diff > abs_floor {
            out.failures += 1;
            eprintln!("param {k}: analytic {} numeric {numeric}", grad[k]);
        }
    }
    out
}
