mod common;

use netsel_core::env::{sample_state, MetricRanges, RatId};
use netsel_core::madm::{
    ahp_rank, ahp_weights, default_weights, random_index, saw, topsis, wpm, CriterionKind, DecisionMatrix,
    PairwiseMatrix,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DecisionMatrix {
    let values = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(0.0..100.0)).collect())
        .collect();
    let kinds = (0..cols)
        .map(|j| if j == 0 || rng.random_bool(0.3) { CriterionKind::Benefit } else { CriterionKind::Cost })
        .collect();
    let raw: Vec<f64> = (0..cols).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    DecisionMatrix::new(values, kinds, raw.iter().map(|w| w / total).collect()).unwrap()
}

#[test]
fn topsis_matches_step_by_step_evaluator() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (rows, cols) in [(3, 3), (4, 6)] {
        for _ in 0..100 {
            let dm = random_matrix(&mut rng, rows, cols);
            let got = topsis(&dm).scores;
            let want = common::reference_topsis(dm.values(), dm.kinds(), dm.weights());
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
            }
        }
    }
}

#[test]
fn perturbed_consistent_matrix_has_small_positive_cr() {
    let w = default_weights();
    let mut a: Vec<Vec<f64>> = w.iter().map(|wi| w.iter().map(|wj| wi / wj).collect()).collect();
    a[0][2] *= 1.3;
    a[2][0] = 1.0 / a[0][2];
    a[1][4] *= 0.8;
    a[4][1] = 1.0 / a[1][4];
    let p = PairwiseMatrix::new(a.clone()).unwrap();
    let r = ahp_weights(&p);
    assert!(r.consistency_ratio > 0.0 && r.consistency_ratio < 0.1, "{}", r.consistency_ratio);

    let lambda = common::power_iteration_lambda(&a);
    let cr_eigen = (lambda - 6.0) / 5.0 / random_index(6);
    assert!(cr_eigen > 0.0 && cr_eigen < 0.1);
    assert!((r.lambda_max - lambda).abs() < 1e-3, "{} vs {lambda}", r.lambda_max);
}

#[test]
fn default_ahp_picks_five_g_on_a_five_g_dominant_state() {
    let mut ranges = MetricRanges::default();
    ranges.five_g.bandwidth = [450.0, 450.0].into();
    ranges.five_g.load = [12.0, 12.0].into();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let state = sample_state(&ranges, &mut rng).unwrap();
    let dm = DecisionMatrix::from_state(&state, &default_weights()).unwrap();
    assert_eq!(ahp_rank(&dm, &PairwiseMatrix::default()).unwrap().best_rat(), RatId::FiveG);
    assert_eq!(saw(&dm).best_rat(), RatId::FiveG);
}

fn dominant_case() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<bool>, Vec<f64>, usize, usize)> {
    (2usize..6, 1usize..7).prop_flat_map(|(rows, cols)| {
        (
            proptest::collection::vec(proptest::collection::vec(1.0f64..100.0, cols), rows),
            proptest::collection::vec(any::<bool>(), cols),
            proptest::collection::vec(0.05f64..1.0, cols),
            0..rows,
            0..cols,
        )
    })
}

proptest! {
    #[test]
    fn dominant_alternative_ranks_strictly_first(
        (mut values, benefit, raw_w, winner, strict_col) in dominant_case()
    ) {
        let cols = benefit.len();
        // Make `winner` at least as good everywhere and strictly better on one column.
        for j in 0..cols {
            let col: Vec<f64> = values.iter().map(|r| r[j]).collect();
            let best = if benefit[j] {
                col.iter().cloned().fold(f64::MIN, f64::max)
            } else {
                col.iter().cloned().fold(f64::MAX, f64::min)
            };
            values[winner][j] = best;
            if j == strict_col {
                values[winner][j] = if benefit[j] { best + 5.0 } else { best * 0.5 };
            }
        }
        let kinds = benefit.iter().map(|&b| if b { CriterionKind::Benefit } else { CriterionKind::Cost }).collect();
        let total: f64 = raw_w.iter().sum();
        let dm = DecisionMatrix::new(values, kinds, raw_w.iter().map(|w| w / total).collect()).unwrap();

        for r in [saw(&dm), wpm(&dm), topsis(&dm)] {
            prop_assert_eq!(r.best(), winner);
            for (i, s) in r.scores.iter().enumerate() {
                prop_assert!(s.is_finite());
                if i != winner {
                    prop_assert!(r.scores[winner] > *s);
                }
            }
        }
        let p = PairwiseMatrix::from_weights(dm.weights()).unwrap();
        prop_assert_eq!(ahp_rank(&dm, &p).unwrap().best(), winner);
    }

    #[test]
    fn column_scaling_preserves_saw_and_wpm_order(seed in any::<u64>(), col in 0usize..6, k in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dm = random_matrix(&mut rng, 4, 6);
        let mut scaled = dm.values().to_vec();
        for row in &mut scaled {
            row[col] *= k;
        }
        let dm2 = DecisionMatrix::new(scaled, dm.kinds().to_vec(), dm.weights().to_vec()).unwrap();
        let (a, b) = (saw(&dm), saw(&dm2));
        for (x, y) in a.scores.iter().zip(&b.scores) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let (a, b) = (wpm(&dm), wpm(&dm2));
        for (x, y) in a.scores.iter().zip(&b.scores) {
            prop_assert!((x - y).abs() < 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn all_ones_ahp_reproduces_equal_weight_saw(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dm = random_matrix(&mut rng, 4, 6);
        let eq = dm.with_weights(vec![1.0 / 6.0; 6]).unwrap();
        prop_assert_eq!(ahp_rank(&dm, &PairwiseMatrix::ones(6)).unwrap().order, saw(&eq).order);
    }
}
