use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::{NUM_RATS, STATE_DIM};
use crate::error::{Error, Result};

/// One stored experience.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub state: Vec<f64>,
    pub action: usize,
    pub reward: f64,
    pub next_state: Vec<f64>,
    pub done: bool,
}

impl Transition {
    pub fn validate(&self) -> Result<()> {
        for v in [&self.state, &self.next_state] {
            if v.len() != STATE_DIM {
                return Err(Error::Dimension {
                    expected: STATE_DIM,
                    actual: v.len(),
                });
            }
        }
        if self.action >= NUM_RATS {
            return Err(Error::Validation(format!("action {} out of range", self.action)));
        }
        if !self.reward.is_finite() {
            return Err(Error::Validation("reward must be finite".into()));
        }
        Ok(())
    }
}

/// Bounded FIFO replay buffer; the oldest transition is evicted first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplayMemory {
    capacity: usize,
    buf: VecDeque<Transition>,
}

impl ReplayMemory {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be > 0");
        ReplayMemory {
            capacity,
            buf: VecDeque::with_capacity(capacity.min(1 << 16)),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn push(&mut self, t: Transition) {
        if self.buf.len() == self.capacity {
            self.buf.pop_front();
        }
        self.buf.push_back(t);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.buf.iter()
    }

    /// Uniform sample of `n` transitions, with replacement.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<&Transition> {
        if self.buf.is_empty() {
            return Vec::new();
        }
        (0..n)
            .map(|_| &self.buf[rng.random_range(0..self.buf.len())])
            .collect()
    }
}
