//! Access-network selection in a heterogeneous wireless environment.
//!
//! A DQN agent learns to pick one of four radio access technologies (5G, 4G,
//! Wi-Fi, LEO satellite) from per-epoch QoS snapshots, scored by a
//! dynamic-weight reward, and is compared against four classic MADM rankers
//! (SAW, WPM, TOPSIS, AHP) on identical states.
//!
//! - [`env`]: RAT identifiers, QoS metrics, sampling ranges and state vectors.
//! - [`reward`]: the dynamic-weight reward and the brute-force oracle.
//! - [`qnet`]: fully-connected Q-network with exact backpropagation.
//! - [`agent`]: epsilon-greedy DQN loop with replay memory and target sync.
//! - [`madm`]: the baseline decision methods.
//! - [`harness`]: campaigns, trace files, interval statistics and export.

pub mod agent;
pub mod env;
mod error;
pub mod harness;
pub mod madm;
pub mod qnet;
pub mod replay;
pub mod reward;

pub use agent::{decay_epsilon, select_action, AgentConfig, DqnAgent, StepOutcome};
pub use env::{normalize, sample_state, EnvState, Metric, MetricRanges, NetworkMetrics, RatId};
pub use error::{Error, Result};
pub use harness::{run_experiment, EpochRecord, Experiment, ExperimentConfig, IntervalSummary, Method};
pub use madm::{ahp_rank, ahp_weights, saw, topsis, wpm, DecisionMatrix, PairwiseMatrix, Ranking};
pub use qnet::{td_update_scalar, Architecture, QNetwork, TrainOutcome};
pub use replay::{ReplayMemory, Transition};
pub use reward::{dynamic_weights, oracle_best, reward, reward_breakdown, RewardBreakdown};
