//! General, unrestricted and tight bounds on the period-t dynamic LATE for a
//! population whose late switchers have effects in [lo, hi].
//!
//! cargo run --example bounds

use dynlate::dgp::{population_estimands, true_dynamic_lates, DgpSpec, HistorySpec};
use dynlate::estimators::{bounds_general, bounds_general_unrestricted, bounds_tight};
use dynlate::latent::{Adoption::*, AdoptionPair};

fn main() {
    let history = |s1, s0, prob, effects: Vec<Vec<f64>>| HistorySpec {
        pair: AdoptionPair::new(s1, s0),
        prob,
        baseline: vec![0.0; 3],
        effects,
    };
    // Every history shares the same effect at each (t, tau), so cross-group
    // homogeneity holds and the tight bounds apply.
    let effects = vec![vec![0.8], vec![0.4, 1.2], vec![-0.3, 0.2, 1.0]];
    let spec = DgpSpec::new(
        3,
        0.5,
        vec![
            history(Period(1), Never, 0.3, effects.clone()),
            history(Period(1), Period(2), 0.1, effects.clone()),
            history(Period(2), Never, 0.1, effects.clone()),
            history(Never, Period(3), 0.1, effects.clone()),
            history(Never, Never, 0.4, effects),
        ],
        0.0,
    )
    .unwrap();
    let est = population_estimands(&spec);
    let truth = true_dynamic_lates(&spec).unwrap();

    for (lo, hi) in [(-1.0, 1.5), (-0.5, 0.5)] {
        println!("effect bounds [{lo}, {hi}]");
        for t in 2..=3 {
            let g = bounds_general(&est, t, lo, hi).unwrap();
            let tight = bounds_tight(&est, t, lo, hi).unwrap();
            println!(
                "  t={t} truth {:>6.3}  general [{:>6.3}, {:>6.3}]  tight [{:>6.3}, {:>6.3}]",
                truth[t - 1],
                g.lower,
                g.upper,
                tight.lower,
                tight.upper
            );
        }
    }
    // Bounds that do not straddle zero need the unrestricted method.
    let (lo, hi) = (-0.5, -0.1);
    for t in 2..=3 {
        let u = bounds_general_unrestricted(&est, t, lo, hi).unwrap();
        println!("  [{lo}, {hi}] t={t}: unrestricted [{:.3}, {:.3}]", u.lower, u.upper);
    }
}
