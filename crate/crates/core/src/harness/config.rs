use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agent::AgentConfig;
use crate::env::{MetricRanges, NUM_METRICS};
use crate::error::{Error, Result};
use crate::madm::{default_weights, PairwiseMatrix};

use super::export::ExportFormat;

/// MADM baseline settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MadmConfig {
    /// Criteria weights in (B, L, J, P, U, C) order, summing to 1.
    pub weights: [f64; NUM_METRICS],
    /// AHP judgment matrix; ratios of `weights` when absent.
    pub ahp_pairwise: Option<PairwiseMatrix>,
}

impl Default for MadmConfig {
    fn default() -> Self {
        MadmConfig {
            weights: default_weights(),
            ahp_pairwise: None,
        }
    }
}

impl MadmConfig {
    pub fn pairwise(&self) -> Result<PairwiseMatrix> {
        match &self.ahp_pairwise {
            Some(p) if p.order() != NUM_METRICS => Err(Error::Config(format!(
                "ahp_pairwise must be {NUM_METRICS}x{NUM_METRICS}, got order {}",
                p.order()
            ))),
            Some(p) => Ok(p.clone()),
            None => PairwiseMatrix::from_weights(&self.weights),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub trace: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub format: ExportFormat,
}

/// Full description of one campaign. Loaded from TOML; every field is
/// optional and unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub epochs: usize,
    pub seed: u64,
    pub interval_width: usize,
    pub ranges: MetricRanges,
    pub agent: AgentConfig,
    pub madm: MadmConfig,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            epochs: 2000,
            seed: 42,
            interval_width: 500,
            ranges: MetricRanges::default(),
            agent: AgentConfig::default(),
            madm: MadmConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let msg = e.message().trim().to_owned();
            match e.span() {
                Some(span) => {
                    let line = text[..span.start].matches('\n').count() + 1;
                    Error::Config(format!("line {line}: {msg}"))
                }
                None => Error::Config(msg),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be >= 1".into()));
        }
        if self.interval_width == 0 {
            return Err(Error::Config("interval_width must be >= 1".into()));
        }
        self.ranges.validate()?;
        self.agent.validate()?;
        let sum: f64 = self.madm.weights.iter().sum();
        if self.madm.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "madm.weights must be non-negative and sum to 1, got sum {sum}"
            )));
        }
        self.madm.pairwise()?;
        Ok(())
    }
}
