//! DQN selection agent: epsilon-greedy policy, replay memory, periodic
//! target sync and multiplicative epsilon decay.
//!
//! Every episode is a single selection on one epoch's state, so each stored
//! transition is terminal and its TD target is the observed reward.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{EnvState, RatId, NUM_RATS};
use crate::error::{Error, Result};
use crate::qnet::{Architecture, QNetwork, TrainOutcome};
use crate::replay::{ReplayMemory, Transition};
use crate::reward::reward;

/// RNG stream used for exploration draws and replay sampling.
const AGENT_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentConfig {
    pub epsilon_start: f64,
    pub epsilon_min: f64,
    pub epsilon_decay: f64,
    pub gamma: f64,
    /// SGD learning rate.
    pub alpha: f64,
    pub batch_size: usize,
    pub memory_capacity: usize,
    /// Training steps between target-network refreshes.
    pub target_sync: u64,
    /// Falls back to the experiment seed when unset.
    pub seed: Option<u64>,
    pub architecture: Architecture,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            epsilon_start: 1.0,
            epsilon_min: 0.05,
            epsilon_decay: 0.995,
            gamma: 0.9,
            alpha: 1e-3,
            batch_size: 32,
            memory_capacity: 10_000,
            target_sync: 50,
            seed: None,
            architecture: Architecture::default(),
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = (0.0..=1.0).contains(&self.epsilon_min)
            && self.epsilon_min <= self.epsilon_start
            && self.epsilon_start <= 1.0;
        if !ok {
            return Err(Error::Config(format!(
                "need 0 <= epsilon_min ({}) <= epsilon_start ({}) <= 1",
                self.epsilon_min, self.epsilon_start
            )));
        }
        if !(self.epsilon_decay > 0.0 && self.epsilon_decay <= 1.0) {
            return Err(Error::Config(format!("epsilon_decay {} not in (0, 1]", self.epsilon_decay)));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::Config(format!("gamma {} not in [0, 1)", self.gamma)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha {} must be positive", self.alpha)));
        }
        if self.batch_size == 0 || self.memory_capacity == 0 || self.target_sync == 0 {
            return Err(Error::Config(
                "batch_size, memory_capacity and target_sync must be >= 1".into(),
            ));
        }
        if self.architecture.input != crate::env::STATE_DIM || self.architecture.output != NUM_RATS {
            return Err(Error::Config(format!(
                "architecture must map {} inputs to {} outputs",
                crate::env::STATE_DIM,
                NUM_RATS
            )));
        }
        self.architecture.validate()
    }
}

/// Index of the largest value; lowest index wins ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Epsilon-greedy choice over the four actions.
pub fn select_action<R: Rng + ?Sized>(q_values: &[f64], epsilon: f64, rng: &mut R) -> RatId {
    let index = if rng.random::<f64>() < epsilon {
        rng.random_range(0..NUM_RATS)
    } else {
        argmax(&q_values[..NUM_RATS])
    };
    RatId::from_index(index).expect("action index in range")
}

/// One multiplicative decay step, applied only while above the floor.
pub fn decay_epsilon(epsilon: f64, cfg: &AgentConfig) -> f64 {
    if epsilon > cfg.epsilon_min {
        epsilon * cfg.epsilon_decay
    } else {
        epsilon
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub chosen: RatId,
    pub reward: f64,
    pub q_values: Vec<f64>,
    /// Epsilon in force when the action was chosen.
    pub epsilon: f64,
    pub transition: Transition,
    pub train: Option<TrainOutcome>,
    pub target_synced: bool,
}

/// Serializable snapshot of the ChaCha stream position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RngState {
    pub seed: [u8; 32],
    pub stream: u64,
    /// Word position as a decimal string (u128).
    pub word_pos: String,
}

impl RngState {
    fn capture(rng: &ChaCha8Rng) -> Self {
        RngState {
            seed: rng.get_seed(),
            stream: rng.get_stream(),
            word_pos: rng.get_word_pos().to_string(),
        }
    }

    fn restore(&self) -> Result<ChaCha8Rng> {
        let pos: u128 = self
            .word_pos
            .parse()
            .map_err(|e| Error::parse("checkpoint rng word_pos", e))?;
        let mut rng = ChaCha8Rng::from_seed(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(pos);
        Ok(rng)
    }
}

/// Everything needed to resume training bit-for-bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgentCheckpoint {
    pub config: AgentConfig,
    pub seed: u64,
    pub online: QNetwork,
    pub target: QNetwork,
    pub epsilon: f64,
    pub train_steps: u64,
    pub episodes: u64,
    pub selection_counts: [u64; NUM_RATS],
    pub memory: ReplayMemory,
    pub rng: RngState,
}

#[derive(Debug, Clone)]
pub struct DqnAgent {
    config: AgentConfig,
    seed: u64,
    online: QNetwork,
    target: QNetwork,
    memory: ReplayMemory,
    epsilon: f64,
    train_steps: u64,
    episodes: u64,
    selection_counts: [u64; NUM_RATS],
    rng: ChaCha8Rng,
}

impl DqnAgent {
    /// `fallback_seed` is used when the config does not pin its own seed.
    pub fn new(config: AgentConfig, fallback_seed: u64) -> Result<Self> {
        config.validate()?;
        let seed = config.seed.unwrap_or(fallback_seed);
        let online = QNetwork::init(seed, &config.architecture)?;
        let target = online.sync_target();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(AGENT_STREAM);
        Ok(DqnAgent {
            memory: ReplayMemory::new(config.memory_capacity),
            epsilon: config.epsilon_start,
            config,
            seed,
            online,
            target,
            train_steps: 0,
            episodes: 0,
            selection_counts: [0; NUM_RATS],
            rng,
        })
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn set_epsilon(&mut self, epsilon: f64) {
        self.epsilon = epsilon.clamp(0.0, 1.0);
    }

    pub fn online(&self) -> &QNetwork {
        &self.online
    }

    pub fn target(&self) -> &QNetwork {
        &self.target
    }

    pub fn memory(&self) -> &ReplayMemory {
        &self.memory
    }

    pub fn train_steps(&self) -> u64 {
        self.train_steps
    }

    pub fn episodes(&self) -> u64 {
        self.episodes
    }

    pub fn selection_counts(&self) -> [u64; NUM_RATS] {
        self.selection_counts
    }

    pub fn q_values(&self, state: &EnvState) -> Vec<f64> {
        self.online
            .forward(&state.normalized)
            .expect("state vector matches network input")
    }

    /// Pure exploitation, no side effects.
    pub fn greedy_action(&self, state: &EnvState) -> RatId {
        RatId::from_index(argmax(&self.q_values(state))).expect("action index in range")
    }

    /// Epsilon-greedy choice using the agent's own RNG, without learning.
    pub fn act(&mut self, state: &EnvState, epsilon: f64) -> RatId {
        let q = self.q_values(state);
        select_action(&q, epsilon, &mut self.rng)
    }

    /// Select, observe the reward, store, and train once the memory holds a
    /// full batch. Epsilon is left untouched; see [`DqnAgent::end_episode`].
    pub fn step_episode(&mut self, state: &EnvState) -> Result<StepOutcome> {
        let q_values = self.q_values(state);
        let epsilon = self.epsilon;
        let chosen = select_action(&q_values, epsilon, &mut self.rng);
        let r = reward(state.metrics(chosen));
        let s = state.normalized.to_vec();
        let transition = Transition {
            next_state: s.clone(),
            state: s,
            action: chosen.index(),
            reward: r,
            done: true,
        };
        self.memory.push(transition.clone());

        let mut train = None;
        let mut target_synced = false;
        if self.memory.len() >= self.config.batch_size {
            let batch = self.memory.sample(self.config.batch_size, &mut self.rng);
            let outcome = self
                .online
                .train_batch(&self.target, &batch, self.config.alpha, self.config.gamma)?;
            train = Some(outcome);
            self.train_steps += 1;
            if self.train_steps.is_multiple_of(self.config.target_sync) {
                self.target = self.online.sync_target();
                target_synced = true;
            }
        }

        self.selection_counts[chosen.index()] += 1;
        self.episodes += 1;
        Ok(StepOutcome {
            chosen,
            reward: r,
            q_values,
            epsilon,
            transition,
            train,
            target_synced,
        })
    }

    pub fn end_episode(&mut self) {
        self.epsilon = decay_epsilon(self.epsilon, &self.config);
    }

    /// `step_episode` followed by epsilon decay.
    pub fn run_episode(&mut self, state: &EnvState) -> Result<StepOutcome> {
        let out = self.step_episode(state)?;
        self.end_episode();
        Ok(out)
    }

    pub fn checkpoint(&self) -> AgentCheckpoint {
        AgentCheckpoint {
            config: self.config.clone(),
            seed: self.seed,
            online: self.online.clone(),
            target: self.target.clone(),
            epsilon: self.epsilon,
            train_steps: self.train_steps,
            episodes: self.episodes,
            selection_counts: self.selection_counts,
            memory: self.memory.clone(),
            rng: RngState::capture(&self.rng),
        }
    }

    pub fn restore(cp: AgentCheckpoint) -> Result<Self> {
        cp.config.validate()?;
        if cp.online.architecture() != cp.config.architecture
            || cp.target.architecture() != cp.config.architecture
        {
            return Err(Error::Validation("checkpoint networks do not match its architecture".into()));
        }
        Ok(DqnAgent {
            rng: cp.rng.restore()?,
            config: cp.config,
            seed: cp.seed,
            online: cp.online,
            target: cp.target,
            memory: cp.memory,
            epsilon: cp.epsilon,
            train_steps: cp.train_steps,
            episodes: cp.episodes,
            selection_counts: cp.selection_counts,
        })
    }

    /// Writes the checkpoint as JSON. Floats are printed in shortest
    /// round-trip form, so reloading restores every parameter exactly.
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(&self.checkpoint()).map_err(|e| Error::parse("checkpoint", e))?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cp: AgentCheckpoint = serde_json::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), e))?;
        Self::restore(cp)
    }
}
