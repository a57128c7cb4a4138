//! Population data-generating process and exact oracle.
//!
//! A [`DgpSpec`] lists latent histories (adoption pairs) with their
//! probabilities and potential-outcome means. Means are stored as a baseline
//! `mu_t(0)` plus a triangular effect array `Delta_t^tau`, so the treated
//! mean at `t` after starting at `t - tau` is `baseline[t] + effect[t][tau]`.
//! Means never depend on the instrument and histories are independent of it,
//! so exclusion and independence hold by construction.
//!
//! Every population quantity here is computed by exact summation over the
//! finite history list; nothing is simulated.

mod decompose;
mod file;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use decompose::{
    decompose, negative_weight_report, DecompositionReport, GroupTerm, NegativeWeights,
};
pub use file::{DgpFile, HistoryEntry, SCHEMA_VERSION};

use crate::estimands::EstimandSet;
use crate::latent::{AdoptionPair, GroupLabel, LatentError};

/// Tolerance on the sum of history probabilities.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Population first stages with magnitude at or below this are treated as
/// zero.
pub const POPULATION_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DgpError {
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error("history {0} is a first-period defier")]
    FirstPeriodDefier(AdoptionPair),
    #[error("history probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),
    #[error("P(C_1) = 0: relevance at t=1 fails")]
    RelevanceFailure,
    #[error(transparent)]
    Latent(#[from] LatentError),
    #[error("spec file: {0}")]
    Schema(String),
}

/// One latent history with its probability and potential-outcome means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistorySpec {
    pub pair: AdoptionPair,
    pub prob: f64,
    /// `mu_t(0)`, t = 1..T.
    pub baseline: Vec<f64>,
    /// `effects[t-1][tau]` for tau = 0..t-1.
    pub effects: Vec<Vec<f64>>,
}

impl HistorySpec {
    /// `Delta_t^tau` for this history.
    #[inline]
    pub fn effect(&self, t: usize, tau: usize) -> f64 {
        self.effects[t - 1][tau]
    }

    /// Mean outcome at `t` under arm `z`.
    #[inline]
    pub fn mean_outcome(&self, t: usize, z: bool) -> f64 {
        let base = self.baseline[t - 1];
        match self.pair.adoption(z).period() {
            Some(s) if s <= t => base + self.effect(t, t - s),
            _ => base,
        }
    }
}

/// Validated population model.
#[derive(Debug, Clone, PartialEq)]
pub struct DgpSpec {
    horizon: usize,
    pz: f64,
    histories: Vec<HistorySpec>,
    noise_sd: f64,
}

impl DgpSpec {
    pub fn new(
        horizon: usize,
        pz: f64,
        mut histories: Vec<HistorySpec>,
        noise_sd: f64,
    ) -> Result<Self, DgpError> {
        let invalid = |msg: String| Err(DgpError::Invalid(msg));
        if horizon == 0 {
            return Err(LatentError::EmptyHorizon.into());
        }
        if !(0.0..=1.0).contains(&pz) {
            return invalid(format!("pz = {pz} is not a probability"));
        }
        if !(noise_sd.is_finite() && noise_sd >= 0.0) {
            return invalid(format!("noise_sd = {noise_sd} must be finite and nonnegative"));
        }
        if histories.is_empty() {
            return invalid("no histories".into());
        }
        histories.sort_by(|a, b| a.pair.cmp(&b.pair));
        for w in histories.windows(2) {
            if w[0].pair == w[1].pair {
                return invalid(format!("history {} listed twice", w[0].pair));
            }
        }
        for h in &histories {
            if !h.pair.within_horizon(horizon) {
                return invalid(format!("history {} has adoption beyond T = {horizon}", h.pair));
            }
            if h.pair.is_first_period_defier() {
                return Err(DgpError::FirstPeriodDefier(h.pair));
            }
            if !(0.0..=1.0).contains(&h.prob) {
                return invalid(format!("history {} has probability {}", h.pair, h.prob));
            }
            if h.baseline.len() != horizon {
                return invalid(format!(
                    "history {} has {} baseline means, expected {horizon}",
                    h.pair,
                    h.baseline.len()
                ));
            }
            if h.effects.len() != horizon
                || h.effects.iter().enumerate().any(|(i, row)| row.len() != i + 1)
            {
                return invalid(format!(
                    "history {} effects must be triangular with rows of length 1..={horizon}",
                    h.pair
                ));
            }
            let finite = h.baseline.iter().chain(h.effects.iter().flatten()).all(|x| x.is_finite());
            if !finite {
                return invalid(format!("history {} has non-finite means", h.pair));
            }
        }
        let total: f64 = histories.iter().map(|h| h.prob).sum();
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(DgpError::ProbabilitySum(total));
        }
        let spec = Self { horizon, pz, histories, noise_sd };
        if spec.prob_c1() <= 0.0 {
            return Err(DgpError::RelevanceFailure);
        }
        Ok(spec)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn pz(&self) -> f64 {
        self.pz
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }

    /// Histories sorted by adoption pair.
    pub fn histories(&self) -> &[HistorySpec] {
        &self.histories
    }

    pub fn history(&self, pair: &AdoptionPair) -> Option<&HistorySpec> {
        self.histories
            .binary_search_by(|h| h.pair.cmp(pair))
            .ok()
            .map(|i| &self.histories[i])
    }

    /// `P(C_1)`.
    pub fn prob_c1(&self) -> f64 {
        self.prob_where(|p| p.is_first_period_complier())
    }

    pub fn prob_where(&self, pred: impl Fn(&AdoptionPair) -> bool) -> f64 {
        self.histories.iter().filter(|h| pred(&h.pair)).map(|h| h.prob).sum()
    }

    /// `E[Y_t | Z = z, pair in set]`, or `None` when the set has no mass.
    pub fn conditional_mean(
        &self,
        t: usize,
        z: bool,
        pred: impl Fn(&AdoptionPair) -> bool,
    ) -> Option<f64> {
        let (mass, total) = self
            .histories
            .iter()
            .filter(|h| pred(&h.pair))
            .fold((0.0, 0.0), |(m, s), h| (m + h.prob, s + h.prob * h.mean_outcome(t, z)));
        (mass > 0.0).then(|| total / mass)
    }

    /// Probability-weighted `Delta_t^tau` over the positive-probability
    /// members of `label`, with `tau` fixed by the label's switch period
    /// (`t - 1` for `C_1`).
    pub fn group_effect(&self, label: GroupLabel, t: usize) -> Option<f64> {
        let tau = t - label.switch_period().unwrap_or(1);
        let (mass, total) = self
            .histories
            .iter()
            .filter(|h| h.prob > 0.0 && label.contains(&h.pair))
            .fold((0.0, 0.0), |(m, s), h| (m + h.prob, s + h.prob * h.effect(t, tau)));
        (mass > 0.0).then(|| total / mass)
    }
}

/// Exact `RF_t`, `FS_t`, `IV_t`, `rho_t` and switching probabilities.
pub fn population_estimands(spec: &DgpSpec) -> EstimandSet {
    let horizon = spec.horizon();
    let mut mean_y = [vec![0.0; horizon], vec![0.0; horizon]];
    let mut mean_d = [vec![0.0; horizon], vec![0.0; horizon]];
    let mut switch = [vec![0.0; horizon], vec![0.0; horizon]];
    for h in spec.histories() {
        for (zi, z) in [(0, false), (1, true)] {
            let first_period = h.pair.treated(z, 1);
            for t in 1..=horizon {
                mean_y[zi][t - 1] += h.prob * h.mean_outcome(t, z);
                if h.pair.treated(z, t) {
                    mean_d[zi][t - 1] += h.prob;
                    if !first_period {
                        switch[zi][t - 1] += h.prob;
                    }
                }
            }
        }
    }
    EstimandSet::from_arm_means(
        [&mean_y[0], &mean_y[1]],
        [&mean_d[0], &mean_d[1]],
        [&switch[0], &switch[1]],
        None,
        POPULATION_ZERO,
    )
}

/// `Delta_t^{t-1}(C_1)` for t = 1..T.
pub fn true_dynamic_lates(spec: &DgpSpec) -> Result<Vec<f64>, DgpError> {
    (1..=spec.horizon())
        .map(|t| spec.group_effect(GroupLabel::C1, t).ok_or(DgpError::RelevanceFailure))
        .collect()
}

/// Builds a spec satisfying calendar-time homogeneity: every history carries
/// `Delta_t^tau = delta_profile[tau]` at every `(t, tau)`.
///
/// `baselines` is either one vector shared by all histories or one per
/// history.
pub fn make_calendar_homogeneous(
    horizon: usize,
    pz: f64,
    history_probs: &[(AdoptionPair, f64)],
    baselines: &[Vec<f64>],
    delta_profile: &[f64],
    noise_sd: f64,
) -> Result<DgpSpec, DgpError> {
    if delta_profile.len() != horizon {
        return Err(DgpError::Invalid(format!(
            "effect profile has length {}, expected {horizon}",
            delta_profile.len()
        )));
    }
    if baselines.len() != 1 && baselines.len() != history_probs.len() {
        return Err(DgpError::Invalid(format!(
            "expected 1 or {} baseline vectors, got {}",
            history_probs.len(),
            baselines.len()
        )));
    }
    let effects: Vec<Vec<f64>> = (1..=horizon).map(|t| delta_profile[..t].to_vec()).collect();
    let histories = history_probs
        .iter()
        .enumerate()
        .map(|(i, &(pair, prob))| HistorySpec {
            pair,
            prob,
            baseline: baselines[if baselines.len() == 1 { 0 } else { i }].clone(),
            effects: effects.clone(),
        })
        .collect();
    DgpSpec::new(horizon, pz, histories, noise_sd)
}

/// Returns the common profile `Delta^tau(C_1)` when the spec satisfies
/// calendar-time homogeneity at the group level (within `tol`), else `None`.
pub fn calendar_homogeneity_profile(spec: &DgpSpec, tol: f64) -> Option<Vec<f64>> {
    let horizon = spec.horizon();
    let profile: Vec<f64> = (1..=horizon)
        .map(|t| spec.group_effect(GroupLabel::C1, t))
        .collect::<Option<_>>()?;
    let close = |a: f64, b: f64| (a - b).abs() <= tol;
    for t in 1..=horizon {
        for tau in 0..t {
            let c1 = {
                let (m, s) = spec
                    .histories()
                    .iter()
                    .filter(|h| h.prob > 0.0 && h.pair.is_first_period_complier())
                    .fold((0.0, 0.0), |(m, s), h| (m + h.prob, s + h.prob * h.effect(t, tau)));
                s / m
            };
            if !close(c1, profile[tau]) {
                return None;
            }
        }
        for k in 2..=t {
            for label in decompose::contaminating_labels(spec, k) {
                if let Some(e) = spec.group_effect(label, t) {
                    if !close(e, profile[t - k]) {
                        return None;
                    }
                }
            }
        }
    }
    Some(profile)
}

/// Within each switch period `k <= t`, every positive-probability
/// contaminating group has the same `Delta_t^{t-k}` (within `tol`).
pub fn is_cross_group_homogeneous(spec: &DgpSpec, t: usize, tol: f64) -> bool {
    (2..=t).all(|k| {
        let effects: Vec<f64> = decompose::contaminating_labels(spec, k)
            .into_iter()
            .filter_map(|label| spec.group_effect(label, t))
            .collect();
        effects.windows(2).all(|w| (w[0] - w[1]).abs() <= tol)
    })
}
