//! Seeded Monte Carlo: bias and spread of the per-period IV ratio and the
//! identified profile against population values. Output does not depend on
//! the number of threads.
//!
//! cargo run --release --example monte_carlo

use dynlate::dgp::{make_calendar_homogeneous, true_dynamic_lates};
use dynlate::latent::{Adoption::*, AdoptionPair};
use dynlate::simulate::{monte_carlo, MonteCarloConfig};
use dynlate::targets::TargetSelection;

fn main() {
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
        &[1.0, 0.5, -0.25],
        1.0,
    )
    .unwrap();
    println!("true dynamic LATEs: {:?}", true_dynamic_lates(&spec).unwrap());

    let targets = TargetSelection { rf: false, fs: false, iv: true, identified: true, bounds: Some((-2.0, 2.0)), tight: true };
    let summary = monte_carlo(&spec, &MonteCarloConfig { n: 5_000, reps: 200, seed: 42, targets });
    println!("{:<26} {:>9} {:>9} {:>9} {:>9}", "target", "oracle", "mean", "bias", "sd");
    for s in &summary.targets {
        let f = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!(
            "{:<26} {:>9} {:>9} {:>9} {:>9}",
            s.target.to_string(),
            f(s.oracle),
            f(s.mean),
            f(s.bias),
            f(s.sd)
        );
    }
}
