//! Per-epoch QoS environment for the four candidate access networks.
//!
//! Every epoch draws a fresh snapshot for each RAT, one metric at a time,
//! uniformly and independently from the configured ranges. The defaults are
//! the published network characteristics for 5G, 4G, Wi-Fi and LEO.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of candidate networks (and of agent actions).
pub const NUM_RATS: usize = 4;
/// Number of QoS metrics per network.
pub const NUM_METRICS: usize = 6;
/// Length of the flattened state vector fed to the Q-network.
pub const STATE_DIM: usize = NUM_RATS * NUM_METRICS;

/// Radio access technology. The discriminant is the action index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RatId {
    FiveG = 0,
    FourG = 1,
    WiFi = 2,
    LeoSat = 3,
}

impl RatId {
    pub const ALL: [RatId; NUM_RATS] = [RatId::FiveG, RatId::FourG, RatId::WiFi, RatId::LeoSat];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<RatId> {
        RatId::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            RatId::FiveG => "5G",
            RatId::FourG => "4G",
            RatId::WiFi => "WiFi",
            RatId::LeoSat => "LEO",
        }
    }
}

impl fmt::Display for RatId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RatId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RatId::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::parse("RAT name", format!("unknown network `{s}`")))
    }
}

impl Serialize for RatId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for RatId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// QoS metric, in state-vector order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Bandwidth = 0,
    Latency = 1,
    Jitter = 2,
    PacketLoss = 3,
    Load = 4,
    Cost = 5,
}

impl Metric {
    pub const ALL: [Metric; NUM_METRICS] = [
        Metric::Bandwidth,
        Metric::Latency,
        Metric::Jitter,
        Metric::PacketLoss,
        Metric::Load,
        Metric::Cost,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Global normalization constant: the largest default upper bound of
    /// this metric over all four networks.
    pub fn normalizer(self) -> f64 {
        NORMALIZERS[self.index()]
    }

    /// Bandwidth is the only metric where larger is better.
    pub fn is_benefit(self) -> bool {
        matches!(self, Metric::Bandwidth)
    }
}

/// B/500, L/70, J/20, P/10, U/80, C/8.
pub const NORMALIZERS: [f64; NUM_METRICS] = [500.0, 70.0, 20.0, 10.0, 80.0, 8.0];

/// One network's QoS snapshot.
///
/// Units: bandwidth in Mbps, latency and jitter in ms, packet loss and load
/// in percent, cost in dollars.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NetworkMetrics {
    pub bandwidth: f64,
    pub latency: f64,
    pub jitter: f64,
    pub packet_loss: f64,
    pub load: f64,
    pub cost: f64,
}

impl NetworkMetrics {
    pub fn from_array(v: [f64; NUM_METRICS]) -> Self {
        NetworkMetrics {
            bandwidth: v[0],
            latency: v[1],
            jitter: v[2],
            packet_loss: v[3],
            load: v[4],
            cost: v[5],
        }
    }

    pub fn to_array(&self) -> [f64; NUM_METRICS] {
        [
            self.bandwidth,
            self.latency,
            self.jitter,
            self.packet_loss,
            self.load,
            self.cost,
        ]
    }

    pub fn get(&self, metric: Metric) -> f64 {
        self.to_array()[metric.index()]
    }

    pub fn with(&self, metric: Metric, value: f64) -> Self {
        let mut v = self.to_array();
        v[metric.index()] = value;
        Self::from_array(v)
    }

    pub fn validate(&self) -> Result<()> {
        for metric in Metric::ALL {
            let v = self.get(metric);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Validation(format!(
                    "{metric:?} must be finite and non-negative, got {v}"
                )));
            }
        }
        if self.packet_loss > 100.0 || self.load > 100.0 {
            return Err(Error::Validation(
                "packet loss and load are percentages and must not exceed 100".into(),
            ));
        }
        Ok(())
    }
}

/// Closed interval `[min, max]` a metric is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub const fn new(min: f64, max: f64) -> Self {
        Range { min, max }
    }
}

impl From<[f64; 2]> for Range {
    fn from(v: [f64; 2]) -> Self {
        Range::new(v[0], v[1])
    }
}

impl From<Range> for [f64; 2] {
    fn from(r: Range) -> Self {
        [r.min, r.max]
    }
}

/// Sampling ranges for one network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatRanges {
    pub bandwidth: Range,
    pub latency: Range,
    pub jitter: Range,
    pub packet_loss: Range,
    pub load: Range,
    pub cost: Range,
}

impl RatRanges {
    pub fn to_array(&self) -> [Range; NUM_METRICS] {
        [
            self.bandwidth,
            self.latency,
            self.jitter,
            self.packet_loss,
            self.load,
            self.cost,
        ]
    }

    /// Every metric pinned to a single value.
    pub fn constant(m: NetworkMetrics) -> Self {
        let r = |v| Range::new(v, v);
        RatRanges {
            bandwidth: r(m.bandwidth),
            latency: r(m.latency),
            jitter: r(m.jitter),
            packet_loss: r(m.packet_loss),
            load: r(m.load),
            cost: r(m.cost),
        }
    }
}

/// Per-RAT, per-metric sampling ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricRanges {
    pub five_g: RatRanges,
    pub four_g: RatRanges,
    pub wifi: RatRanges,
    pub leo: RatRanges,
}

impl Default for MetricRanges {
    fn default() -> Self {
        let r = Range::new;
        MetricRanges {
            five_g: RatRanges {
                bandwidth: r(50.0, 500.0),
                latency: r(5.0, 10.0),
                jitter: r(1.0, 5.0),
                packet_loss: r(0.0, 1.0),
                load: r(10.0, 50.0),
                cost: r(3.0, 6.0),
            },
            four_g: RatRanges {
                bandwidth: r(10.0, 50.0),
                latency: r(10.0, 30.0),
                jitter: r(5.0, 15.0),
                packet_loss: r(0.1, 2.0),
                load: r(30.0, 70.0),
                cost: r(2.0, 5.0),
            },
            wifi: RatRanges {
                bandwidth: r(20.0, 80.0),
                latency: r(10.0, 50.0),
                jitter: r(1.0, 8.0),
                packet_loss: r(0.0, 5.0),
                load: r(20.0, 60.0),
                cost: r(1.0, 4.0),
            },
            leo: RatRanges {
                bandwidth: r(50.0, 200.0),
                latency: r(30.0, 70.0),
                jitter: r(5.0, 20.0),
                packet_loss: r(2.0, 10.0),
                load: r(40.0, 80.0),
                cost: r(4.0, 8.0),
            },
        }
    }
}

impl MetricRanges {
    pub fn for_rat(&self, rat: RatId) -> &RatRanges {
        match rat {
            RatId::FiveG => &self.five_g,
            RatId::FourG => &self.four_g,
            RatId::WiFi => &self.wifi,
            RatId::LeoSat => &self.leo,
        }
    }

    /// Same ranges for every network.
    pub fn uniform(r: RatRanges) -> Self {
        MetricRanges {
            five_g: r,
            four_g: r,
            wifi: r,
            leo: r,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for rat in RatId::ALL {
            for (metric, range) in Metric::ALL.iter().zip(self.for_rat(rat).to_array()) {
                if !range.min.is_finite() || !range.max.is_finite() {
                    return Err(Error::Config(format!("{rat} {metric:?}: bounds must be finite")));
                }
                if range.min > range.max {
                    return Err(Error::Config(format!(
                        "{rat} {metric:?}: min {} exceeds max {}",
                        range.min, range.max
                    )));
                }
                if range.min < 0.0 {
                    return Err(Error::Config(format!("{rat} {metric:?}: bounds must be non-negative")));
                }
                if matches!(metric, Metric::PacketLoss | Metric::Load) && range.max > 100.0 {
                    return Err(Error::Config(format!("{rat} {metric:?}: percentage above 100")));
                }
            }
        }
        Ok(())
    }
}

/// The environment of one epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvState {
    pub metrics: [NetworkMetrics; NUM_RATS],
    pub normalized: [f64; STATE_DIM],
}

impl EnvState {
    pub fn new(metrics: [NetworkMetrics; NUM_RATS]) -> Self {
        let normalized = normalize(&metrics);
        EnvState { metrics, normalized }
    }

    pub fn metrics(&self, rat: RatId) -> &NetworkMetrics {
        &self.metrics[rat.index()]
    }

    /// Raw metrics flattened RAT-major, B L J P U C minor.
    pub fn raw_vector(&self) -> [f64; STATE_DIM] {
        let mut out = [0.0; STATE_DIM];
        for (chunk, m) in out.chunks_exact_mut(NUM_METRICS).zip(&self.metrics) {
            chunk.copy_from_slice(&m.to_array());
        }
        out
    }

    pub fn from_raw_vector(raw: &[f64]) -> Result<Self> {
        if raw.len() != STATE_DIM {
            return Err(Error::Dimension {
                expected: STATE_DIM,
                actual: raw.len(),
            });
        }
        let mut metrics = [NetworkMetrics::default(); NUM_RATS];
        for (m, chunk) in metrics.iter_mut().zip(raw.chunks_exact(NUM_METRICS)) {
            let mut a = [0.0; NUM_METRICS];
            a.copy_from_slice(chunk);
            *m = NetworkMetrics::from_array(a);
        }
        Ok(EnvState::new(metrics))
    }
}

/// Flatten and scale by the fixed per-metric normalizers.
pub fn normalize(metrics: &[NetworkMetrics; NUM_RATS]) -> [f64; STATE_DIM] {
    let mut out = [0.0; STATE_DIM];
    for (rat, m) in metrics.iter().enumerate() {
        for (k, v) in m.to_array().into_iter().enumerate() {
            out[rat * NUM_METRICS + k] = v / NORMALIZERS[k];
        }
    }
    out
}

/// Draw one epoch's state. Each metric is uniform on its range.
pub fn sample_state<R: Rng + ?Sized>(ranges: &MetricRanges, rng: &mut R) -> Result<EnvState> {
    ranges.validate()?;
    let mut metrics = [NetworkMetrics::default(); NUM_RATS];
    for rat in RatId::ALL {
        let mut v = [0.0; NUM_METRICS];
        for (slot, range) in v.iter_mut().zip(ranges.for_rat(rat).to_array()) {
            *slot = if range.min == range.max {
                range.min
            } else {
                rng.random_range(range.min..=range.max)
            };
        }
        metrics[rat.index()] = NetworkMetrics::from_array(v);
    }
    Ok(EnvState::new(metrics))
}
