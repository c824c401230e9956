//! Fully-connected Q-network with hand-written backpropagation.
//!
//! Hidden layers use ReLU, the output layer is linear with one unit per
//! action. Training minimizes the squared TD error of the taken action only
//! and applies a plain SGD step.
//!
//! Flat parameter layout (used by checkpoints and gradient checks): layers in
//! order; within a layer, the weight matrix row-major (`out x in`) followed by
//! the bias vector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{NUM_RATS, STATE_DIM};
use crate::error::{Error, Result};
use crate::replay::Transition;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Architecture {
    pub input: usize,
    pub hidden: Vec<usize>,
    pub output: usize,
}

impl Default for Architecture {
    fn default() -> Self {
        Architecture {
            input: STATE_DIM,
            hidden: vec![64, 64],
            output: NUM_RATS,
        }
    }
}

impl Architecture {
    pub fn new(input: usize, hidden: &[usize], output: usize) -> Self {
        Architecture {
            input,
            hidden: hidden.to_vec(),
            output,
        }
    }

    fn sizes(&self) -> Vec<usize> {
        let mut s = Vec::with_capacity(self.hidden.len() + 2);
        s.push(self.input);
        s.extend_from_slice(&self.hidden);
        s.push(self.output);
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes().contains(&0) {
            return Err(Error::Config(format!(
                "layer sizes must be positive, got {:?}",
                self.sizes()
            )));
        }
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        self.sizes().windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }
}

/// Dense layer, weights stored row-major as `out x in`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    in_dim: usize,
    out_dim: usize,
    weights: Vec<f64>,
    biases: Vec<f64>,
}

impl Layer {
    pub fn new(in_dim: usize, out_dim: usize, weights: Vec<f64>, biases: Vec<f64>) -> Result<Self> {
        if weights.len() != in_dim * out_dim {
            return Err(Error::Dimension {
                expected: in_dim * out_dim,
                actual: weights.len(),
            });
        }
        if biases.len() != out_dim {
            return Err(Error::Dimension {
                expected: out_dim,
                actual: biases.len(),
            });
        }
        Ok(Layer {
            in_dim,
            out_dim,
            weights,
            biases,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    fn affine(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.weights.chunks_exact(self.in_dim).zip(&self.biases).map(|(row, b)| {
            row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + b
        }));
    }
}

/// Result of one `train_batch` call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrainOutcome {
    /// Empty batch; nothing was updated.
    Skipped,
    /// Mean squared TD error measured before the step.
    Trained { loss: f64 },
}

impl TrainOutcome {
    pub fn loss(&self) -> f64 {
        match self {
            TrainOutcome::Skipped => 0.0,
            TrainOutcome::Trained { loss } => *loss,
        }
    }
}

/// The Q-value approximator (and, cloned, its target copy).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QNetwork {
    layers: Vec<Layer>,
}

impl QNetwork {
    /// Uniform init with bound `sqrt(6 / (fan_in + fan_out))`, zero biases.
    pub fn init(seed: u64, arch: &Architecture) -> Result<Self> {
        arch.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = arch
            .sizes()
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
                let weights = (0..fan_in * fan_out)
                    .map(|_| rng.random_range(-bound..bound))
                    .collect();
                Layer::new(fan_in, fan_out, weights, vec![0.0; fan_out])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QNetwork { layers })
    }

    pub fn zeros(arch: &Architecture) -> Result<Self> {
        arch.validate()?;
        let layers = arch
            .sizes()
            .windows(2)
            .map(|w| Layer::new(w[0], w[1], vec![0.0; w[0] * w[1]], vec![0.0; w[1]]))
            .collect::<Result<Vec<_>>>()?;
        Ok(QNetwork { layers })
    }

    pub fn from_layers(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Config("network needs at least one layer".into()));
        }
        for pair in layers.windows(2) {
            if pair[0].out_dim != pair[1].in_dim {
                return Err(Error::Dimension {
                    expected: pair[0].out_dim,
                    actual: pair[1].in_dim,
                });
            }
        }
        Ok(QNetwork { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].out_dim
    }

    pub fn architecture(&self) -> Architecture {
        Architecture {
            input: self.input_dim(),
            hidden: self.layers[..self.layers.len() - 1]
                .iter()
                .map(|l| l.out_dim)
                .collect(),
            output: self.output_dim(),
        }
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.biases.len()).sum()
    }

    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.biases);
        }
        out
    }

    pub fn set_params(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.param_count() {
            return Err(Error::Dimension {
                expected: self.param_count(),
                actual: flat.len(),
            });
        }
        let mut rest = flat;
        for l in &mut self.layers {
            let (w, tail) = rest.split_at(l.weights.len());
            l.weights.copy_from_slice(w);
            let (b, tail) = tail.split_at(l.biases.len());
            l.biases.copy_from_slice(b);
            rest = tail;
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weights.iter().chain(&l.biases).all(|v| v.is_finite()))
    }

    fn check_input(&self, state: &[f64]) -> Result<()> {
        if state.len() != self.input_dim() {
            return Err(Error::Dimension {
                expected: self.input_dim(),
                actual: state.len(),
            });
        }
        Ok(())
    }

    pub fn forward(&self, state: &[f64]) -> Result<Vec<f64>> {
        self.check_input(state)?;
        Ok(self.activations(state).pop().unwrap())
    }

    // Per-layer outputs, input first; ReLU already applied on hidden layers.
    fn activations(&self, state: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(state.to_vec());
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut out = Vec::with_capacity(layer.out_dim);
            layer.affine(acts.last().unwrap(), &mut out);
            if i != last {
                out.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            acts.push(out);
        }
        acts
    }

    /// `y = r` for terminal transitions, else `r + gamma * max_a target(s', a)`.
    pub fn td_targets(&self, batch: &[&Transition], gamma: f64) -> Result<Vec<f64>> {
        batch
            .iter()
            .map(|t| {
                if t.done {
                    Ok(t.reward)
                } else {
                    let next = self.forward(&t.next_state)?;
                    let max_next = next.into_iter().fold(f64::NEG_INFINITY, f64::max);
                    Ok(t.reward + gamma * max_next)
                }
            })
            .collect()
    }

    /// Mean over the batch of `(Q(s)[a] - y)^2`.
    pub fn batch_loss(&self, batch: &[&Transition], targets: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        for (t, y) in batch.iter().zip(targets) {
            let q = self.forward(&t.state)?;
            let e = q.get(t.action).copied().ok_or(Error::Dimension {
                expected: self.output_dim(),
                actual: t.action + 1,
            })? - y;
            total += e * e;
        }
        Ok(total / batch.len().max(1) as f64)
    }

    /// Loss and its gradient with respect to the flat parameter vector.
    pub fn loss_and_gradient(&self, batch: &[&Transition], targets: &[f64]) -> Result<(f64, Vec<f64>)> {
        if batch.len() != targets.len() {
            return Err(Error::Dimension {
                expected: batch.len(),
                actual: targets.len(),
            });
        }
        let n = batch.len().max(1) as f64;
        let mut d_w: Vec<Vec<f64>> = self.layers.iter().map(|l| vec![0.0; l.weights.len()]).collect();
        let mut d_b: Vec<Vec<f64>> = self.layers.iter().map(|l| vec![0.0; l.biases.len()]).collect();
        let mut loss = 0.0;

        for (t, &y) in batch.iter().zip(targets) {
            self.check_input(&t.state)?;
            if t.action >= self.output_dim() {
                return Err(Error::Validation(format!("action {} out of range", t.action)));
            }
            let acts = self.activations(&t.state);
            let q = acts.last().unwrap();
            let err = q[t.action] - y;
            loss += err * err;

            let mut delta = vec![0.0; self.output_dim()];
            delta[t.action] = 2.0 * err / n;

            for (li, layer) in self.layers.iter().enumerate().rev() {
                let input = &acts[li];
                for (o, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    d_b[li][o] += d;
                    let row = &mut d_w[li][o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (g, x) in row.iter_mut().zip(input) {
                        *g += d * x;
                    }
                }
                if li == 0 {
                    break;
                }
                let mut prev = vec![0.0; layer.in_dim];
                for (o, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    let row = &layer.weights[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (p, w) in prev.iter_mut().zip(row) {
                        *p += d * w;
                    }
                }
                // ReLU derivative, evaluated on the post-activation output.
                for (p, a) in prev.iter_mut().zip(input) {
                    if *a <= 0.0 {
                        *p = 0.0;
                    }
                }
                delta = prev;
            }
        }

        let mut grad = Vec::with_capacity(self.param_count());
        for (w, b) in d_w.into_iter().zip(d_b) {
            grad.extend(w);
            grad.extend(b);
        }
        Ok((loss / n, grad))
    }

    /// One SGD step on the squared TD error of each transition's action.
    pub fn train_batch(
        &mut self,
        target: &QNetwork,
        batch: &[&Transition],
        alpha: f64,
        gamma: f64,
    ) -> Result<TrainOutcome> {
        if batch.is_empty() {
            return Ok(TrainOutcome::Skipped);
        }
        let targets = target.td_targets(batch, gamma)?;
        let (loss, grad) = self.loss_and_gradient(batch, &targets)?;
        let mut offset = 0;
        for l in &mut self.layers {
            for p in l.weights.iter_mut().chain(l.biases.iter_mut()) {
                *p -= alpha * grad[offset];
                offset += 1;
            }
        }
        if !self.is_finite() || !loss.is_finite() {
            return Err(Error::Validation(
                "training produced non-finite parameters; lower the learning rate".into(),
            ));
        }
        Ok(TrainOutcome::Trained { loss })
    }

    /// Independent deep copy for use as the target network.
    pub fn sync_target(&self) -> QNetwork {
        self.clone()
    }
}

/// Tabular TD rule `q + alpha * (r + gamma * max_q_next - q)`.
pub fn td_update_scalar(q: f64, alpha: f64, r: f64, gamma: f64, max_q_next: f64) -> f64 {
    q + alpha * (r + gamma * max_q_next - q)
}
