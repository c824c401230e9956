//! Dynamic-weight QoS reward.
//!
//! Each criterion carries a weight `base + value / scale`, so the base is the
//! weight's floor and poor values are punished harder as they grow. The reward
//! adds the weighted bandwidth term and subtracts the five cost-type terms.

use serde::{Deserialize, Serialize};

use crate::env::{EnvState, NetworkMetrics, RatId};

/// Per-criterion weights, in (B, L, J, P, U, C) order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicWeights {
    pub bandwidth: f64,
    pub latency: f64,
    pub jitter: f64,
    pub packet_loss: f64,
    pub load: f64,
    pub cost: f64,
}

impl DynamicWeights {
    /// Weight floors (the value of every weight at a zero metric).
    pub const BASE: [f64; 6] = [4.0, 4.0, 2.5, 4.0, 3.0, 2.0];

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.bandwidth,
            self.latency,
            self.jitter,
            self.packet_loss,
            self.load,
            self.cost,
        ]
    }
}

/// Scales dividing each raw metric inside the reward sum.
const TERM_SCALES: [f64; 6] = [100.0, 300.0, 50.0, 10.0, 100.0, 10.0];

pub fn dynamic_weights(m: &NetworkMetrics) -> DynamicWeights {
    DynamicWeights {
        bandwidth: 4.0 + m.bandwidth / 100.0,
        latency: 4.0 + m.latency / 100.0,
        jitter: 2.5 + m.jitter / 20.0,
        packet_loss: 4.0 + m.packet_loss / 5.0,
        load: 3.0 + m.load / 50.0,
        cost: 2.0 + m.cost / 10.0,
    }
}

/// Weights, unsigned per-criterion terms and the signed total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub weights: DynamicWeights,
    /// `W_k * x_k / scale_k`, all non-negative for valid metrics.
    pub terms: [f64; 6],
    pub total: f64,
}

pub fn reward_breakdown(m: &NetworkMetrics) -> RewardBreakdown {
    let weights = dynamic_weights(m);
    let w = weights.to_array();
    let x = m.to_array();
    let mut terms = [0.0; 6];
    for k in 0..6 {
        terms[k] = w[k] * x[k] / TERM_SCALES[k];
    }
    let total = terms[0] - terms[1] - terms[2] - terms[3] - terms[4] - terms[5];
    RewardBreakdown {
        weights,
        terms,
        total,
    }
}

#[inline]
pub fn reward(m: &NetworkMetrics) -> f64 {
    reward_breakdown(m).total
}

/// Best network under the reward; ties go to the lowest action index.
pub fn oracle_best(state: &EnvState) -> RatId {
    let mut best = RatId::FiveG;
    let mut best_reward = reward(state.metrics(best));
    for rat in &RatId::ALL[1..] {
        let r = reward(state.metrics(*rat));
        if r > best_reward {
            best = *rat;
            best_reward = r;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{sample_state, Metric, MetricRanges, NUM_RATS};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn metrics(v: [f64; 6]) -> NetworkMetrics {
        NetworkMetrics::from_array(v)
    }

    #[test]
    fn weights_examples() {
        assert_eq!(dynamic_weights(&metrics([100.0, 0.0, 0.0, 0.0, 0.0, 0.0])).bandwidth, 5.0);
        assert_eq!(dynamic_weights(&metrics([0.0, 0.0, 0.0, 5.0, 0.0, 0.0])).packet_loss, 5.0);
        assert_eq!(
            dynamic_weights(&NetworkMetrics::default()).to_array(),
            DynamicWeights::BASE
        );
    }

    #[test]
    fn reward_examples() {
        assert_eq!(reward(&NetworkMetrics::default()), 0.0);
        assert_eq!(reward(&metrics([100.0, 0.0, 0.0, 0.0, 0.0, 0.0])), 5.0);
        // Exact rational value 127313/8000.
        let mid = reward(&metrics([275.0, 7.5, 3.0, 0.5, 30.0, 4.5]));
        assert!((mid - 15.914125).abs() <= 1e-9 * 15.914125, "{mid}");
    }

    #[test]
    fn weights_never_drop_below_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let s = sample_state(&MetricRanges::default(), &mut rng).unwrap();
            for m in &s.metrics {
                let w = dynamic_weights(m).to_array();
                for (w, base) in w.iter().zip(DynamicWeights::BASE) {
                    assert!(*w >= base);
                }
            }
        }
    }

    #[test]
    fn oracle_dominance_and_ties() {
        let mut m = [metrics([50.0, 30.0, 10.0, 2.0, 50.0, 5.0]); NUM_RATS];
        assert_eq!(oracle_best(&EnvState::new(m)), RatId::FiveG);
        m[RatId::WiFi.index()] = metrics([500.0, 1.0, 1.0, 0.0, 10.0, 1.0]);
        assert_eq!(oracle_best(&EnvState::new(m)), RatId::WiFi);
    }

    // Independent evaluator: formula written out term by term, maximized by sort.
    fn reference_reward(m: &NetworkMetrics) -> f64 {
        let (b, l, j, p, u, c) = (m.bandwidth, m.latency, m.jitter, m.packet_loss, m.load, m.cost);
        (4.0 + b / 100.0) * (b / 100.0)
            - (4.0 + l / 100.0) * (l / 300.0)
            - (2.5 + j / 20.0) * (j / 50.0)
            - (4.0 + p / 5.0) * (p / 10.0)
            - (3.0 + u / 50.0) * (u / 100.0)
            - (2.0 + c / 10.0) * (c / 10.0)
    }

    #[test]
    fn oracle_matches_exhaustive_comparison() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10_000 {
            let s = sample_state(&MetricRanges::default(), &mut rng).unwrap();
            let mut scored: Vec<(usize, f64)> = s
                .metrics
                .iter()
                .map(reference_reward)
                .enumerate()
                .collect();
            scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            assert_eq!(oracle_best(&s).index(), scored[0].0);
        }
    }

    #[test]
    fn oracle_ignores_evaluation_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let s = sample_state(&MetricRanges::default(), &mut rng).unwrap();
            let best = oracle_best(&s);
            let rev_best = RatId::ALL
                .iter()
                .rev()
                .copied()
                .max_by(|a, b| {
                    reward(s.metrics(*a))
                        .partial_cmp(&reward(s.metrics(*b)))
                        .unwrap()
                        .then(b.index().cmp(&a.index()))
                })
                .unwrap();
            assert_eq!(best, rev_best);
        }
    }

    fn arb_metrics() -> impl Strategy<Value = NetworkMetrics> {
        (
            0.0f64..1000.0,
            0.0f64..500.0,
            0.0f64..100.0,
            0.0f64..100.0,
            0.0f64..100.0,
            0.0f64..50.0,
        )
            .prop_map(|(b, l, j, p, u, c)| metrics([b, l, j, p, u, c]))
    }

    proptest! {
        #[test]
        fn breakdown_sums_to_total(m in arb_metrics()) {
            let br = reward_breakdown(&m);
            let t = br.terms;
            let sum = t[0] - t[1] - t[2] - t[3] - t[4] - t[5];
            prop_assert!((sum - br.total).abs() <= 1e-12 * (1.0 + br.total.abs()));
            prop_assert!(br.total.is_finite());
            prop_assert!((br.total - reference_reward(&m)).abs() <= 1e-12 * (1.0 + br.total.abs()));
        }

        #[test]
        fn reward_is_monotone_per_metric(m in arb_metrics(), k in 0usize..6, delta in 1e-3f64..100.0) {
            let metric = Metric::ALL[k];
            let base = reward(&m);
            let moved = reward(&m.with(metric, m.get(metric) + delta));
            if metric.is_benefit() {
                prop_assert!(moved > base);
            } else {
                prop_assert!(moved < base);
            }
        }
    }
}
