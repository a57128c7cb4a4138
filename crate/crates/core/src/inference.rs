//! Unit-level nonparametric bootstrap with percentile intervals.
//!
//! Each resample draws `n` units with replacement, keeping each unit's whole
//! time series, and re-evaluates the selected targets. Resample `r` uses
//! random stream `r` of the seed, so intervals do not depend on the thread
//! count. Resamples where a target is undefined (one empty arm, `FS_1 = 0`)
//! are dropped for that target and counted.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimators::{estimate, ArmSums, EstimationError};
use crate::panel::Panel;
use crate::rng;
use crate::targets::{Target, TargetSelection};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("invalid bootstrap configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Estimation(#[from] EstimationError),
    #[error("all {reps} bootstrap replications failed")]
    AllReplicationsFailed { reps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub reps: usize,
    /// Intervals have nominal coverage `1 - alpha`.
    pub alpha: f64,
    pub seed: u64,
    pub targets: TargetSelection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetInterval {
    pub target: Target,
    pub point: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// Resamples in which the target was defined.
    pub replications: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub reps: usize,
    pub alpha: f64,
    pub seed: u64,
    pub method: String,
    pub targets: Vec<TargetInterval>,
}

impl BootstrapResult {
    pub fn get(&self, target: Target) -> Option<&TargetInterval> {
        self.targets.iter().find(|s| s.target == target)
    }
}

/// Sample quantile with linear interpolation between order statistics
/// indexed from 1: `h = (n - 1) p + 1`, `Q = x_floor(h) + (h - floor(h))
/// (x_floor(h)+1 - x_floor(h))`. `sorted` must be ascending and nonempty.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    match sorted.get(lo + 1) {
        Some(&next) if frac > 0.0 => sorted[lo] + frac * (next - sorted[lo]),
        _ => sorted[lo],
    }
}

pub fn bootstrap(panel: &Panel, config: &BootstrapConfig) -> Result<BootstrapResult, InferenceError> {
    if config.reps < 2 {
        return Err(InferenceError::InvalidConfig(format!("reps must be at least 2, got {}", config.reps)));
    }
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(InferenceError::InvalidConfig(format!("alpha must lie in (0, 1), got {}", config.alpha)));
    }
    let point_est = estimate(panel)?;
    let point = config.targets.evaluate(&point_est);

    let units = panel.units();
    let n = units.len();
    let per_rep: Vec<Vec<Option<f64>>> = (0..config.reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(config.seed, r as u64);
            let mut sums = ArmSums::new(panel.horizon());
            for _ in 0..n {
                sums.add(&units[rng.random_range(0..n)]);
            }
            match sums.finish() {
                Ok(est) => config.targets.evaluate(&est).into_iter().map(|(_, v)| v).collect(),
                Err(_) => vec![None; point.len()],
            }
        })
        .collect();

    if per_rep.iter().all(|r| r.iter().all(Option::is_none)) {
        return Err(InferenceError::AllReplicationsFailed { reps: config.reps });
    }

    let targets = point
        .iter()
        .enumerate()
        .map(|(i, &(target, point))| {
            let mut values: Vec<f64> = per_rep.iter().filter_map(|r| r[i]).collect();
            values.sort_by(f64::total_cmp);
            let (lower, upper) = if values.is_empty() {
                (None, None)
            } else {
                (
                    Some(quantile(&values, config.alpha / 2.0)),
                    Some(quantile(&values, 1.0 - config.alpha / 2.0)),
                )
            };
            TargetInterval {
                target,
                point,
                lower,
                upper,
                replications: values.len(),
                failed: config.reps - values.len(),
            }
        })
        .collect();

    Ok(BootstrapResult {
        reps: config.reps,
        alpha: config.alpha,
        seed: config.seed,
        method: "percentile".to_string(),
        targets,
    })
}
