//! Sampling panels from a [`DgpSpec`] and Monte Carlo experiments that
//! compare estimators with the population oracle.
//!
//! Replication `r` of an experiment seeded with `s` draws from random
//! stream `r + 1` of `s` (stream 0 is what [`draw_panel`] uses), and results
//! are aggregated in replication order. Output therefore depends only on
//! `(spec, n, reps, seed)`, never on the thread count.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dgp::{population_estimands, true_dynamic_lates, DgpSpec};
use crate::estimators::estimate;
use crate::panel::{Panel, UnitRecord};
use crate::rng;
use crate::targets::{Target, TargetSelection};

/// Draws `n` i.i.d. units: a latent history from the spec's probabilities,
/// `Z ~ Bernoulli(pz)` independently, `D_t = 1{s_Z <= t}` and
/// `Y_t = mu_t(0) + Delta_t^{t - s_Z} 1{s_Z <= t} + noise`.
///
/// The result satisfies every structural panel invariant. With tiny `n` or
/// `pz` in {0, 1} it may contain a single instrument arm, which estimation
/// rejects.
pub fn draw_panel(spec: &DgpSpec, n: usize, seed: u64) -> Panel {
    draw_panel_with(spec, n, &mut rng::stream(seed, 0))
}

pub fn draw_panel_with<R: Rng>(spec: &DgpSpec, n: usize, rng: &mut R) -> Panel {
    assert!(n >= 1, "draw_panel needs at least one unit");
    let horizon = spec.horizon();
    let histories = spec.histories();
    let cumulative: Vec<f64> = histories
        .iter()
        .scan(0.0, |acc, h| {
            *acc += h.prob;
            Some(*acc)
        })
        .collect();
    let fallback = histories.iter().rposition(|h| h.prob > 0.0).expect("spec has positive mass");
    let noise = (spec.noise_sd() > 0.0)
        .then(|| Normal::new(0.0, spec.noise_sd()).expect("noise sd validated"));
    let width = n.to_string().len();

    let units = (0..n)
        .map(|i| {
            let u: f64 = rng.random();
            let idx = cumulative.partition_point(|&c| c <= u).min(fallback);
            let history = &histories[idx];
            let z = rng.random::<f64>() < spec.pz();
            let y = (1..=horizon)
                .map(|t| {
                    let eps = noise.as_ref().map_or(0.0, |d| d.sample(rng));
                    history.mean_outcome(t, z) + eps
                })
                .collect();
            UnitRecord {
                id: format!("u{:0width$}", i + 1),
                z,
                first_treated: history.pair.adoption(z),
                y,
            }
        })
        .collect();
    Panel::from_units(horizon, units).expect("drawn units are structurally valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub targets: TargetSelection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSummary {
    pub target: Target,
    /// Population value of the same functional.
    pub oracle: Option<f64>,
    /// True dynamic LATE the target speaks to, where applicable.
    pub truth: Option<f64>,
    pub mean: Option<f64>,
    /// `mean - oracle`.
    pub bias: Option<f64>,
    /// Empirical standard deviation across successful replications.
    pub sd: Option<f64>,
    pub replications: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub targets: Vec<TargetSummary>,
    /// Replications whose panel could not be estimated at all.
    pub failed_replications: usize,
}

impl MonteCarloSummary {
    pub fn get(&self, target: Target) -> Option<&TargetSummary> {
        self.targets.iter().find(|s| s.target == target)
    }
}

/// Mean and sample standard deviation (n - 1 denominator), in input order.
pub(crate) fn mean_sd(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.len() > 1).then(|| {
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1.0)).sqrt()
    });
    (Some(mean), sd)
}

pub fn monte_carlo(spec: &DgpSpec, config: &MonteCarloConfig) -> MonteCarloSummary {
    assert!(config.reps >= 1, "monte_carlo needs at least one replication");
    let targets = config.targets.targets(spec.horizon());
    let oracle = config.targets.evaluate(&population_estimands(spec));
    let lates = true_dynamic_lates(spec).ok();

    let per_rep: Vec<Option<Vec<Option<f64>>>> = (0..config.reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(config.seed, r as u64 + 1);
            let panel = draw_panel_with(spec, config.n, &mut rng);
            estimate(&panel)
                .ok()
                .map(|est| config.targets.evaluate(&est).into_iter().map(|(_, v)| v).collect())
        })
        .collect();

    let failed_replications = per_rep.iter().filter(|r| r.is_none()).count();
    let summaries = targets
        .iter()
        .enumerate()
        .map(|(i, &target)| {
            let values: Vec<f64> = per_rep.iter().filter_map(|r| r.as_ref().and_then(|v| v[i])).collect();
            let (mean, sd) = mean_sd(&values);
            let oracle_value = oracle[i].1;
            let truth = match (target.late_period(), &lates) {
                (Some(t), Some(l)) => Some(l[t - 1]),
                _ => None,
            };
            TargetSummary {
                target,
                oracle: oracle_value,
                truth,
                mean,
                bias: mean.zip(oracle_value).map(|(m, o)| m - o),
                sd,
                replications: values.len(),
                failed: config.reps - values.len(),
            }
        })
        .collect();

    MonteCarloSummary {
        n: config.n,
        reps: config.reps,
        seed: config.seed,
        targets: summaries,
        failed_replications,
    }
}
