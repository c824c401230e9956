mod common;

use netsel_core::qnet::Architecture;
use netsel_core::{oracle_best, Experiment, ExperimentConfig, QNetwork, Transition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_transition(rng: &mut ChaCha8Rng) -> Transition {
    let state: Vec<f64> = (0..24).map(|_| rng.random_range(0.0..1.0)).collect();
    Transition {
        next_state: state.clone(),
        state,
        action: rng.random_range(0..4),
        reward: rng.random_range(-5.0..20.0),
        done: true,
    }
}

#[test]
fn backprop_matches_finite_differences_default_arch() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let net = QNetwork::init(3, &Architecture::default()).unwrap();
    let batch: Vec<Transition> = (0..8).map(|_| random_transition(&mut rng)).collect();
    let refs: Vec<&Transition> = batch.iter().collect();
    let targets: Vec<f64> = batch.iter().map(|t| t.reward).collect();
    let indices: Vec<usize> = (0..200).map(|_| rng.random_range(0..net.param_count())).collect();
    let check = common::gradient_check(&net, &[24, 64, 64, 4], &refs, &targets, &indices, 1e-5, 1e-4, 1e-7);
    assert_eq!(check.failures, 0);
    assert!(check.kinks <= 5, "{check:?}");
}

#[test]
fn bootstrapped_targets_feed_the_same_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let net = QNetwork::init(8, &Architecture::new(24, &[16], 4)).unwrap();
    let target = QNetwork::init(9, &Architecture::new(24, &[16], 4)).unwrap();
    let mut batch: Vec<Transition> = (0..6).map(|_| random_transition(&mut rng)).collect();
    for t in batch.iter_mut().step_by(2) {
        t.done = false;
    }
    let refs: Vec<&Transition> = batch.iter().collect();
    let y = target.td_targets(&refs, 0.9).unwrap();
    for (t, y) in batch.iter().zip(&y) {
        let q = common::reference_forward(&[24, 16, 4], &target.params(), &t.next_state);
        let max = q.iter().cloned().fold(f64::MIN, f64::max);
        let expected = if t.done { t.reward } else { t.reward + 0.9 * max };
        assert!((y - expected).abs() < 1e-12);
    }
    let all: Vec<usize> = (0..net.param_count()).collect();
    let check = common::gradient_check(&net, &[24, 16, 4], &refs, &y, &all, 1e-5, 1e-4, 1e-7);
    assert_eq!(check.failures, 0);
    assert!(check.kinks <= all.len() / 100, "{check:?}");
}

#[test]
fn converged_greedy_agent_tracks_the_oracle() {
    let mut exp = Experiment::new(ExperimentConfig::default()).unwrap();
    exp.run(|_| Ok(())).unwrap();
    let mut hits = 0;
    for _ in 0..500 {
        let s = exp.sample().unwrap();
        if exp.agent().greedy_action(&s) == oracle_best(&s) {
            hits += 1;
        }
    }
    assert!(hits as f64 / 500.0 >= 0.90, "greedy agreement {hits}/500");
}

#[test]
fn replay_memory_respects_capacity_in_a_campaign() {
    let mut cfg = ExperimentConfig { epochs: 300, ..Default::default() };
    cfg.agent.memory_capacity = 64;
    let mut exp = Experiment::new(cfg).unwrap();
    exp.run(|_| {
        Ok(())
    })
    .unwrap();
    assert_eq!(exp.agent().memory().len(), 64);
    assert_eq!(exp.agent().train_steps(), 300 - 31);
    assert!(exp.agent().online().is_finite());
}
