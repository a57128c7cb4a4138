//! Reads a long-format panel, reports what the data can say about the
//! maintained assumptions, and estimates per-period IV quantities.
//!
//! cargo run --example ingest [path/to/panel.csv]

use std::fs::File;

use dynlate::estimators::{default_effect_bounds, estimate, negative_weight_diagnostic};
use dynlate::panel::{check_assumptions, ingest};

const DEMO: &str = "unit_id,period,z,d,y
a,1,1,1,2.1
a,2,1,1,2.9
b,1,1,0,0.2
b,2,1,0,0.1
c,1,0,0,0.3
c,2,0,1,1.8
d,1,0,0,-0.1
d,2,0,0,0.4
e,1,1,1,1.7
e,2,1,1,2.2
f,1,0,1,1.9
f,2,0,1,2.6
";

fn main() {
    let panel = match std::env::args().nth(1) {
        Some(path) => ingest(File::open(path).expect("readable file")),
        None => ingest(DEMO.as_bytes()),
    };
    let panel = match panel {
        Ok(p) => p,
        Err(e) => {
            eprintln!("invalid panel: {e}");
            std::process::exit(2);
        }
    };

    let diag = check_assumptions(&panel);
    println!("{} units over {} periods, FS_1 = {:.3} ({:?})", diag.n, diag.horizon, diag.fs1, diag.relevance);
    for note in &diag.notes {
        println!("  {note}");
    }

    let est = estimate(&panel).expect("both instrument arms present");
    let flags = negative_weight_diagnostic(&est);
    for t in 1..=est.horizon {
        let flag = flags.periods.iter().find(|p| p.t == t).map(|p| format!("{:?}", p.flag));
        println!(
            "t={t}: RF {:.3}  FS {:.3}  IV {}  {}",
            est.rf(t),
            est.fs(t),
            est.iv(t).map_or("undefined".into(), |v| format!("{v:.3}")),
            flag.unwrap_or_default()
        );
    }
    println!("default effect bounds: {:?}", default_effect_bounds(&panel));
}
