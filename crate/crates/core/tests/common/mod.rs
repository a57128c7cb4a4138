//! Random population specs shared by the integration tests.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dynlate::dgp::{DgpSpec, HistorySpec};
use dynlate::latent::{enumerate_histories, Adoption, AdoptionPair};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pair(s1: Option<usize>, s0: Option<usize>) -> AdoptionPair {
    let a = |s: Option<usize>| s.map_or(Adoption::Never, Adoption::Period);
    AdoptionPair::new(a(s1), a(s0))
}

/// How effect cells are filled. A cell `(t, tau)` of a history is "relevant"
/// when the history starts treatment at `t - tau` in one of the arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Effects {
    /// Every cell drawn independently.
    Free,
    /// Relevant cells share one value per `(t, tau)` across histories.
    CrossGroup,
    /// Relevant cells equal `profile[tau]` for all `t`.
    Calendar,
}

pub struct Drawn {
    pub spec: DgpSpec,
    /// The common exposure profile for [`Effects::Calendar`].
    pub profile: Vec<f64>,
}

fn relevant(pair: &AdoptionPair, t: usize, tau: usize) -> bool {
    [pair.s1, pair.s0].iter().any(|s| s.period() == Some(t - tau))
}

/// Random spec with all effects in `[lo, hi]`. Histories are a random subset
/// of all admissible adoption pairs (always with a first-period complier);
/// about one in five included histories gets probability zero.
pub fn random_spec<R: Rng>(rng: &mut R, horizon: usize, lo: f64, hi: f64, mode: Effects) -> Drawn {
    let all = enumerate_histories(horizon, true);
    let mut chosen: Vec<(AdoptionPair, f64)> = Vec::new();
    for p in all {
        let c1 = p.is_first_period_complier();
        if c1 && !chosen.iter().any(|(q, w)| q.is_first_period_complier() && *w > 0.0) {
            chosen.push((p, rng.random_range(0.2..1.0)));
            continue;
        }
        if rng.random_bool(0.6) {
            let w = if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.01..1.0) };
            chosen.push((p, w));
        }
    }
    let total: f64 = chosen.iter().map(|(_, w)| w).sum();
    let draw = |rng: &mut R| rng.random_range(lo..=hi);
    let profile: Vec<f64> = (0..horizon).map(|_| draw(rng)).collect();
    let common: Vec<Vec<f64>> = (1..=horizon).map(|t| (0..t).map(|_| draw(rng)).collect()).collect();
    let histories = chosen
        .into_iter()
        .map(|(p, w)| {
            let effects = (1..=horizon)
                .map(|t| {
                    (0..t)
                        .map(|tau| match mode {
                            Effects::Calendar if relevant(&p, t, tau) => profile[tau],
                            Effects::CrossGroup if relevant(&p, t, tau) => common[t - 1][tau],
                            _ => draw(rng),
                        })
                        .collect()
                })
                .collect();
            HistorySpec {
                pair: p,
                prob: w / total,
                baseline: (0..horizon).map(|_| rng.random_range(-1.0..1.0)).collect(),
                effects,
            }
        })
        .collect();
    let pz = rng.random_range(0.2..0.8);
    let spec = DgpSpec::new(horizon, pz, histories, 1.0).expect("generated spec is valid");
    Drawn { spec, profile }
}

/// The sign-reversal spec: every effect is negative, yet `RF_2 > 0`.
/// `(1,N)` 0.2, `(1,2)` 0.5, `(N,N)` 0.3; profile `(-2, -0.5)`.
pub fn sign_reversal() -> DgpSpec {
    dynlate::dgp::make_calendar_homogeneous(
        2,
        0.5,
        &[(pair(Some(1), None), 0.2), (pair(Some(1), Some(2)), 0.5), (pair(None, None), 0.3)],
        &[vec![0.0, 0.0]],
        &[-2.0, -0.5],
        1.0,
    )
    .unwrap()
}

/// CLI invocations whose JSON reports are pinned in `tests/golden/`, run
/// from the `tests/` directory.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("estimate", &["estimate", "--panel", "data/three_history_panel.csv"]),
    ("identify", &["identify", "--panel", "data/homogeneous_panel.csv", "--assume", "calendar-homogeneity"]),
    (
        "bounds",
        &["bounds", "--panel", "data/homogeneous_panel.csv", "--assume", "cross-group-homogeneity", "--bounds=-2,2"],
    ),
    ("decompose", &["decompose", "--dgp", "data/three_history.toml", "--period", "2"]),
    (
        "montecarlo",
        &["montecarlo", "--dgp", "data/homogeneous.toml", "--n", "1000", "--reps", "30", "--seed", "5", "--bounds=-2,2"],
    ),
    (
        "bootstrap",
        &[
            "bootstrap",
            "--panel",
            "data/homogeneous_panel.csv",
            "--reps",
            "60",
            "--seed",
            "9",
            "--assume",
            "calendar-homogeneity,cross-group-homogeneity",
        ],
    ),
];

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

/// Runs the `dynlate` binary from the `tests/` directory.
pub fn dynlate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynlate"))
        .args(args)
        .current_dir(tests_dir())
        .env_remove("DYNLATE_SEED")
        .output()
        .expect("binary runs")
}

/// JSON report of a golden invocation at the given thread count.
pub fn golden_report(args: &[&str], threads: usize) -> Result<String, String> {
    let threads = threads.to_string();
    let mut full = args.to_vec();
    full.extend(["--json", "-", "--threads", &threads]);
    let out = dynlate(&full);
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(String::from_utf8(out.stdout).expect("utf-8 report"))
}

pub fn golden_path(name: &str) -> PathBuf {
    tests_dir().join("golden").join(format!("{name}.json"))
}
