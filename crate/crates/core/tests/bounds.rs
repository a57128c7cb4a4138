mod common;

use approx::assert_abs_diff_eq;
use common::{pair, random_spec, rng, Effects};
use dynlate::dgp::{is_cross_group_homogeneous, population_estimands, true_dynamic_lates, DgpSpec, HistorySpec};
use dynlate::estimators::{bounds_general, bounds_general_unrestricted, bounds_tight, EstimationError};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn general_bounds_bracket_truth(seed in any::<u64>(), horizon in 2usize..=6, lo in -3.0..0.0f64, hi in 0.0..3.0f64) {
        let spec = random_spec(&mut rng(seed), horizon, lo, hi, Effects::Free).spec;
        let est = population_estimands(&spec);
        let truth = true_dynamic_lates(&spec).unwrap();
        for t in 2..=horizon {
            let g = bounds_general(&est, t, lo, hi).unwrap();
            prop_assert!(g.contains(truth[t - 1], TOL), "t={t} {g:?} truth {}", truth[t - 1]);
            let u = bounds_general_unrestricted(&est, t, lo, hi).unwrap();
            prop_assert_eq!((u.lower, u.upper), (g.lower, g.upper));
            let tight = bounds_tight(&est, t, lo, hi).unwrap();
            prop_assert!(tight.lower >= g.lower - TOL && tight.upper <= g.upper + TOL);
        }
    }

    #[test]
    fn unrestricted_bounds_bracket_truth(seed in any::<u64>(), horizon in 2usize..=6, a in -3.0..3.0f64, w in 0.0..2.0f64) {
        let (lo, hi) = (a, a + w);
        let spec = random_spec(&mut rng(seed), horizon, lo, hi, Effects::Free).spec;
        let est = population_estimands(&spec);
        let truth = true_dynamic_lates(&spec).unwrap();
        for t in 2..=horizon {
            let u = bounds_general_unrestricted(&est, t, lo, hi).unwrap();
            prop_assert!(u.contains(truth[t - 1], TOL), "t={t} [{lo},{hi}] {u:?} truth {}", truth[t - 1]);
        }
    }

    #[test]
    fn tight_bounds_bracket_truth_under_cross_group_homogeneity(seed in any::<u64>(), horizon in 2usize..=6, lo in -3.0..0.0f64, hi in 0.0..3.0f64) {
        let spec = random_spec(&mut rng(seed), horizon, lo, hi, Effects::CrossGroup).spec;
        let est = population_estimands(&spec);
        let truth = true_dynamic_lates(&spec).unwrap();
        for t in 2..=horizon {
            prop_assert!(is_cross_group_homogeneous(&spec, t, 1e-12));
            let tight = bounds_tight(&est, t, lo, hi).unwrap();
            prop_assert!(tight.contains(truth[t - 1], TOL), "t={t} {tight:?} truth {}", truth[t - 1]);
        }
    }
}

/// Two periods without late instrument-driven switching among first-period
/// never-takers: `(1,N)`, `(1,2)`, `(1,1)`, `(2,2)`, `(N,N)`.
fn no_late_switcher_spec(probs: [f64; 5], effects: [f64; 5]) -> DgpSpec {
    let pairs = [
        pair(Some(1), None),
        pair(Some(1), Some(2)),
        pair(Some(1), Some(1)),
        pair(Some(2), Some(2)),
        pair(None, None),
    ];
    let histories = pairs
        .iter()
        .zip(probs)
        .zip(effects)
        .map(|((&p, prob), e)| HistorySpec {
            pair: p,
            prob,
            baseline: vec![0.3, -0.2],
            effects: vec![vec![e], vec![e * 0.5, e]],
        })
        .collect();
    DgpSpec::new(2, 0.4, histories, 1.0).unwrap()
}

#[test]
fn no_late_switchers_simplified_interval() {
    let mut r = rng(5);
    use rand::Rng;
    for _ in 0..200 {
        let mut w: [f64; 5] = std::array::from_fn(|_| r.random_range(0.05..1.0));
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        let (lo, hi) = (-r.random_range(0.0..2.0), r.random_range(0.0..2.0));
        let e: [f64; 5] = std::array::from_fn(|_| r.random_range(lo..=hi));
        let spec = no_late_switcher_spec(w, e);
        let est = population_estimands(&spec);
        assert!(est.fs(2) <= est.fs(1));
        let tight = bounds_tight(&est, 2, lo, hi).unwrap();
        let base = est.rf(2) / est.fs(1);
        let share = (est.fs(1) - est.fs(2)) / est.fs(1);
        assert_abs_diff_eq!(tight.lower, base + share * lo, epsilon = 1e-12);
        assert_abs_diff_eq!(tight.upper, base + share * hi, epsilon = 1e-12);
        let truth = true_dynamic_lates(&spec).unwrap()[1];
        assert!(tight.contains(truth, TOL));
    }
}

#[test]
fn invalid_bound_arguments() {
    let spec = random_spec(&mut rng(1), 3, -1.0, 1.0, Effects::Free).spec;
    let est = population_estimands(&spec);
    assert!(matches!(bounds_general(&est, 2, 0.5, 1.0), Err(EstimationError::SignedBoundViolation { .. })));
    assert!(matches!(bounds_tight(&est, 2, -1.0, -0.5), Err(EstimationError::SignedBoundViolation { .. })));
    assert!(matches!(bounds_general_unrestricted(&est, 2, 1.0, 0.5), Err(EstimationError::EmptyBounds { .. })));
    assert!(matches!(bounds_general(&est, 1, -1.0, 1.0), Err(EstimationError::PeriodOutOfRange { .. })));
    assert!(matches!(bounds_general(&est, 4, -1.0, 1.0), Err(EstimationError::PeriodOutOfRange { .. })));
}
