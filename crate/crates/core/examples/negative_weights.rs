//! A population in which every treatment effect is negative but the period-2
//! reduced form and IV ratio are positive. The data-side diagnostic flags
//! the falling first stage; recursive identification recovers the sign.
//!
//! cargo run --example negative_weights

use dynlate::dgp::{make_calendar_homogeneous, negative_weight_report, population_estimands};
use dynlate::estimators::{identify, negative_weight_diagnostic};
use dynlate::latent::{Adoption::*, AdoptionPair};

fn main() {
    let spec = make_calendar_homogeneous(
        2,
        0.5,
        &[
            (AdoptionPair::new(Period(1), Never), 0.2),
            (AdoptionPair::new(Period(1), Period(2)), 0.5),
            (AdoptionPair::new(Never, Never), 0.3),
        ],
        &[vec![0.0, 0.0]],
        &[-2.0, -0.5],
        0.0,
    )
    .unwrap();
    let est = population_estimands(&spec);
    println!("effects: Delta^0 = -2.0, Delta^1 = -0.5 for every history");
    println!("RF_2 = {:.3}, FS = ({:.1}, {:.1}), IV_2 = {:.3}", est.rf(2), est.fs(1), est.fs(2), est.iv(2).unwrap());

    for g in negative_weight_report(&spec, 2).unwrap().terms() {
        println!("negatively weighted: {} (weight {:.3})", g.notation, g.weight.unwrap());
    }
    for p in negative_weight_diagnostic(&est).periods {
        println!("t={}: {:?} (witness {:?})", p.t, p.flag, p.witness);
    }
    println!("identified Delta^1 = {:.3}", identify(&est).unwrap().deltas[1]);
}
