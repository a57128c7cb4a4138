//! Splits the period-2 reduced form of a small population into the
//! first-period-complier term and the groups that switch in late.
//!
//! cargo run --example decompose

use dynlate::dgp::{decompose, population_estimands, DgpSpec};

const SPEC: &str = r#"
schema_version = 1
T = 2
pz = 0.5
noise_sd = 0.0

[[histories]]
s1 = 1
s0 = "never"
prob = 0.3
baseline = [0.0, 0.0]
effects = [[1.0], [0.0, 2.0]]

[[histories]]
s1 = 1
s0 = 2
prob = 0.1
baseline = [0.0, 0.0]
effects = [[1.0], [1.5, 2.0]]

[[histories]]
s1 = "never"
s0 = "never"
prob = 0.6
baseline = [0.0, 0.0]
effects = [[0.0], [0.0, 0.0]]
"#;

fn main() {
    let spec = DgpSpec::from_toml_str(SPEC).expect("valid spec");
    let est = population_estimands(&spec);
    let d = decompose(&spec, 2).expect("period 2 exists");

    println!("RF_2 = {:.4}, FS_2 = {:.4}, IV_2 = {:.4}", d.rf, d.fs, est.iv(2).unwrap());
    println!("{:<14} {:>5} {:>8} {:>8} {:>13} {:>8}", "group", "sign", "prob", "effect", "contribution", "weight");
    for g in d.all_terms() {
        println!(
            "{:<14} {:>5} {:>8.4} {:>8.4} {:>13.4} {:>8.4}",
            g.notation,
            g.sign.symbol(),
            g.prob,
            g.effect,
            g.contribution,
            g.weight.unwrap_or(f64::NAN)
        );
    }
    println!("sum of contributions = {:.4}", d.reconstructed_rf());
}
