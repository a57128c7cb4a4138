//! Recovers a dynamic LATE profile by forward substitution, first from exact
//! population estimands and then from one simulated panel.
//!
//! cargo run --release --example identify

use dynlate::dgp::{make_calendar_homogeneous, population_estimands};
use dynlate::estimators::{estimate, identify};
use dynlate::latent::{Adoption::*, AdoptionPair};
use dynlate::simulate::draw_panel;

fn main() {
    let profile = [1.0, 0.5, -0.25];
    let spec = make_calendar_homogeneous(
        3,
        0.5,
        &[
            (AdoptionPair::new(Period(1), Never), 0.35),
            (AdoptionPair::new(Period(1), Period(2)), 0.1),
            (AdoptionPair::new(Period(2), Never), 0.1),
            (AdoptionPair::new(Never, Period(3)), 0.05),
            (AdoptionPair::new(Never, Never), 0.4),
        ],
        &[vec![0.0, 0.5, 1.0]],
        &profile,
        1.0,
    )
    .unwrap();

    let population = population_estimands(&spec);
    let exact = identify(&population).unwrap();
    let panel = draw_panel(&spec, 50_000, 1);
    let sample = identify(&estimate(&panel).unwrap()).unwrap();

    println!("{:>4} {:>8} {:>10} {:>10} {:>10}", "tau", "truth", "IV_t", "exact", "sample");
    for tau in 0..3 {
        println!(
            "{tau:>4} {:>8.4} {:>10.4} {:>10.4} {:>10.4}",
            profile[tau],
            population.iv(tau + 1).unwrap(),
            exact.deltas[tau],
            sample.deltas[tau]
        );
    }
}
