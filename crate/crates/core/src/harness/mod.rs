//! Experiment driver: every epoch, all five methods select a network on the
//! same sampled state; the DQN agent then learns from its own choice.

mod config;
pub mod export;
pub mod summary;
pub mod trace;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agent::DqnAgent;
use crate::env::{sample_state, EnvState, RatId};
use crate::error::Result;
use crate::madm::{ahp_rank, saw, topsis, wpm, DecisionMatrix, PairwiseMatrix};
use crate::reward::oracle_best;

pub use config::{ExperimentConfig, MadmConfig, OutputConfig};
pub use export::{export, read_summaries, ExportFormat};
pub use summary::{
    format_agreement_table, format_five_g_table, oracle_check, summarize, summarize_window, IntervalKind,
    IntervalSummary, OracleReport, PerMethod,
};
pub use trace::{read_trace, write_trace, EpochRecord, Selections, TraceWriter};

/// RNG stream for environment sampling; the agent uses its own stream.
const ENV_STREAM: u64 = 0;

/// Selection methods compared in a campaign, in report column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dqn,
    Ahp,
    Saw,
    Wpm,
    Topsis,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Dqn, Method::Ahp, Method::Saw, Method::Wpm, Method::Topsis];
    pub const BASELINES: [Method; 4] = [Method::Ahp, Method::Saw, Method::Wpm, Method::Topsis];

    pub fn key(self) -> &'static str {
        match self {
            Method::Dqn => "dqn",
            Method::Ahp => "ahp",
            Method::Saw => "saw",
            Method::Wpm => "wpm",
            Method::Topsis => "topsis",
        }
    }

    pub fn column_title(self) -> &'static str {
        match self {
            Method::Dqn => "DQN",
            Method::Ahp => "AHP",
            // The additive method is also known as WSM.
            Method::Saw => "WSM",
            Method::Wpm => "WPM",
            Method::Topsis => "TOPSIS",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Choices of the four baselines on one state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaselineChoices {
    pub ahp: RatId,
    pub saw: RatId,
    pub wpm: RatId,
    pub topsis: RatId,
}

pub fn baseline_choices(state: &EnvState, weights: &[f64], pairwise: &PairwiseMatrix) -> Result<BaselineChoices> {
    let dm = DecisionMatrix::from_state(state, weights)?;
    Ok(BaselineChoices {
        ahp: ahp_rank(&dm, pairwise)?.best_rat(),
        saw: saw(&dm).best_rat(),
        wpm: wpm(&dm).best_rat(),
        topsis: topsis(&dm).best_rat(),
    })
}

/// A running campaign. Step it epoch by epoch or drive it with [`Experiment::run`].
pub struct Experiment {
    cfg: ExperimentConfig,
    env_rng: ChaCha8Rng,
    agent: DqnAgent,
    pairwise: PairwiseMatrix,
    epoch: u64,
}

impl Experiment {
    pub fn new(cfg: ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let mut env_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        env_rng.set_stream(ENV_STREAM);
        let agent = DqnAgent::new(cfg.agent.clone(), cfg.seed)?;
        let pairwise = cfg.madm.pairwise()?;
        Ok(Experiment {
            cfg,
            env_rng,
            agent,
            pairwise,
            epoch: 0,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn agent(&self) -> &DqnAgent {
        &self.agent
    }

    pub fn agent_mut(&mut self) -> &mut DqnAgent {
        &mut self.agent
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    /// Draw the next state from the campaign's environment stream.
    pub fn sample(&mut self) -> Result<EnvState> {
        sample_state(&self.cfg.ranges, &mut self.env_rng)
    }

    pub fn baselines(&self, state: &EnvState) -> Result<BaselineChoices> {
        baseline_choices(state, &self.cfg.madm.weights, &self.pairwise)
    }

    /// One epoch: sample, let every method choose, train the agent, decay epsilon.
    pub fn step(&mut self) -> Result<EpochRecord> {
        let state = self.sample()?;
        let base = self.baselines(&state)?;
        let oracle = oracle_best(&state);
        let out = self.agent.run_episode(&state)?;
        self.epoch += 1;
        Ok(EpochRecord {
            epoch: self.epoch,
            metrics: state.raw_vector().to_vec(),
            selections: Selections {
                dqn: out.chosen,
                ahp: base.ahp,
                saw: base.saw,
                wpm: base.wpm,
                topsis: base.topsis,
                oracle,
            },
            dqn_reward: out.reward,
            epsilon: out.epsilon,
        })
    }

    /// Runs the configured number of epochs, handing each record to `sink`
    /// as soon as it exists.
    pub fn run<F>(&mut self, mut sink: F) -> Result<Vec<EpochRecord>>
    where
        F: FnMut(&EpochRecord) -> Result<()>,
    {
        let mut trace = Vec::with_capacity(self.cfg.epochs);
        for _ in 0..self.cfg.epochs {
            let rec = self.step()?;
            sink(&rec)?;
            trace.push(rec);
        }
        Ok(trace)
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<EpochRecord>> {
    Experiment::new(cfg.clone())?.run(|_| Ok(()))
}
