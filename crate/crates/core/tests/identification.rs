mod common;

use approx::assert_abs_diff_eq;
use common::{pair, random_spec, rng, Effects};
use dynlate::dgp::{make_calendar_homogeneous, population_estimands, true_dynamic_lates};
use dynlate::estimators::identify;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Dense solve of `P delta = RF` with `P[t][t] = FS_1` and
/// `P[t][t-k+1] = FS_k - FS_{k-1}` for k = 2..t.
fn dense_solve(rf: &[f64], fs: &[f64]) -> Vec<f64> {
    let n = rf.len();
    let p = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            fs[0]
        } else if j < i {
            let k = i - j + 1;
            fs[k - 1] - fs[k - 2]
        } else {
            0.0
        }
    });
    p.lu().solve(&DVector::from_column_slice(rf)).expect("P is invertible when FS_1 != 0").iter().copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn forward_substitution_matches_dense_solve(seed in any::<u64>(), horizon in 1usize..=6) {
        let spec = random_spec(&mut rng(seed), horizon, -3.0, 3.0, Effects::Free).spec;
        let est = population_estimands(&spec);
        let ours = identify(&est).unwrap();
        let dense = dense_solve(&est.rf, &est.fs);
        let scale = 1.0 / est.fs(1);
        for (a, b) in ours.deltas.iter().zip(&dense) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()) * scale.max(1.0));
        }
        prop_assert!(ours.residual() <= 1e-10);
    }

    #[test]
    fn calendar_homogeneous_profile_recovered(seed in any::<u64>(), horizon in 1usize..=6) {
        let drawn = random_spec(&mut rng(seed), horizon, -3.0, 3.0, Effects::Calendar);
        let deltas = identify(&population_estimands(&drawn.spec)).unwrap().deltas;
        let truth = true_dynamic_lates(&drawn.spec).unwrap();
        for tau in 0..horizon {
            prop_assert!((deltas[tau] - drawn.profile[tau]).abs() <= 1e-9);
            prop_assert!((truth[tau] - drawn.profile[tau]).abs() <= 1e-12);
        }
    }

    #[test]
    fn two_period_closed_form(seed in any::<u64>()) {
        let spec = random_spec(&mut rng(seed), 2, -3.0, 3.0, Effects::Free).spec;
        let est = population_estimands(&spec);
        let (rf1, rf2, fs1, fs2) = (est.rf(1), est.rf(2), est.fs(1), est.fs(2));
        let closed = rf2 / fs1 + (fs1 - fs2) / fs1 * (rf1 / fs1);
        prop_assert!((identify(&est).unwrap().deltas[1] - closed).abs() <= 1e-12);
    }
}

#[test]
fn pinned_three_period_profile() {
    let spec = make_calendar_homogeneous(
        3,
        0.5,
        &[
            (pair(Some(1), None), 0.3),
            (pair(Some(1), Some(2)), 0.1),
            (pair(Some(2), None), 0.1),
            (pair(None, Some(3)), 0.1),
            (pair(None, None), 0.4),
        ],
        &[vec![0.0, 1.0, 2.0]],
        &[1.0, 0.5, -0.25],
        0.0,
    )
    .unwrap();
    let deltas = identify(&population_estimands(&spec)).unwrap().deltas;
    for (d, want) in deltas.iter().zip([1.0, 0.5, -0.25]) {
        assert_abs_diff_eq!(*d, want, epsilon = 1e-9);
    }
}

#[test]
fn identification_survives_zero_later_first_stage() {
    // FS_2 = 0: IV at t=2 is undefined but the profile is still identified.
    let spec = make_calendar_homogeneous(
        2,
        0.5,
        &[(pair(Some(1), Some(2)), 0.5), (pair(None, None), 0.5)],
        &[vec![0.0, 0.0]],
        &[2.0, 3.0],
        0.0,
    )
    .unwrap();
    let est = population_estimands(&spec);
    assert_eq!(est.iv(2), None);
    assert_abs_diff_eq!(identify(&est).unwrap().deltas[1], 3.0, epsilon = 1e-12);
}
