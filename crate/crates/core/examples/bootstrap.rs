//! Percentile bootstrap intervals for the identified profile of one
//! simulated panel, resampling whole units.
//!
//! cargo run --release --example bootstrap

use dynlate::dgp::make_calendar_homogeneous;
use dynlate::inference::{bootstrap, BootstrapConfig};
use dynlate::latent::{Adoption::*, AdoptionPair};
use dynlate::simulate::draw_panel;
use dynlate::targets::TargetSelection;

fn main() {
    let spec = make_calendar_homogeneous(
        2,
        0.5,
        &[
            (AdoptionPair::new(Period(1), Never), 0.4),
            (AdoptionPair::new(Period(1), Period(2)), 0.15),
            (AdoptionPair::new(Period(2), Never), 0.05),
            (AdoptionPair::new(Never, Never), 0.4),
        ],
        &[vec![0.0, 0.0]],
        &[1.0, 0.5],
        1.0,
    )
    .unwrap();
    let panel = draw_panel(&spec, 5_000, 7);
    let config = BootstrapConfig { reps: 999, alpha: 0.05, seed: 7, targets: TargetSelection::only_identified() };
    let result = bootstrap(&panel, &config).unwrap();
    for t in &result.targets {
        println!(
            "{:<10} point {:.4}  95% [{:.4}, {:.4}]  ({} resamples, {} failed)",
            t.target.to_string(),
            t.point.unwrap(),
            t.lower.unwrap(),
            t.upper.unwrap(),
            t.replications,
            t.failed
        );
    }
}
