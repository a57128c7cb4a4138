use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{population_estimands, DgpError, DgpSpec, POPULATION_ZERO};
use crate::latent::{AdoptionPair, GroupLabel, LatentError, SwitchSign};

/// One weighted causal-effect term of the reduced form at period `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTerm {
    pub label: GroupLabel,
    pub notation: String,
    /// Switch-in period `k`; `None` for the `C_1` lead term.
    pub switch_period: Option<usize>,
    /// Exposure length `tau` of the effect entering at `t`.
    pub exposure: usize,
    pub members: Vec<AdoptionPair>,
    pub prob: f64,
    /// Probability-weighted `Delta_t^tau` over the members.
    pub effect: f64,
    pub sign: SwitchSign,
    pub signed_prob: f64,
    /// `signed_prob * effect`.
    pub contribution: f64,
    /// `signed_prob / FS_t`; `None` when `FS_t = 0`.
    pub weight: Option<f64>,
}

/// Term-by-term decomposition of `RF_t` and `FS_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub t: usize,
    /// Population `RF_t` computed directly from arm means.
    pub rf: f64,
    /// Population `FS_t` computed directly from arm means.
    pub fs: f64,
    pub lead: GroupTerm,
    /// Contamination terms ordered by switch period, `G-` before `G+`.
    pub terms: Vec<GroupTerm>,
}

impl DecompositionReport {
    pub fn all_terms(&self) -> impl Iterator<Item = &GroupTerm> {
        std::iter::once(&self.lead).chain(&self.terms)
    }

    /// Sum of signed contributions; equals `RF_t`.
    pub fn reconstructed_rf(&self) -> f64 {
        self.all_terms().map(|g| g.contribution).sum()
    }

    /// Sum of signed probabilities; equals `FS_t`.
    pub fn reconstructed_fs(&self) -> f64 {
        self.all_terms().map(|g| g.signed_prob).sum()
    }

    pub fn weight_sum(&self) -> Option<f64> {
        self.all_terms().map(|g| g.weight).sum()
    }
}

/// Positive-probability groups that switch in at `k`, with their members.
fn groups_switching_at(spec: &DgpSpec, k: usize) -> BTreeMap<(SwitchSign, GroupLabel), Vec<AdoptionPair>> {
    let mut groups: BTreeMap<(SwitchSign, GroupLabel), Vec<AdoptionPair>> = BTreeMap::new();
    for h in spec.histories().iter().filter(|h| h.prob > 0.0) {
        if let Some(label) = GroupLabel::minus_group(&h.pair, k) {
            groups.entry((SwitchSign::Minus, label)).or_default().push(h.pair);
        }
        if let Some(label) = GroupLabel::plus_group(&h.pair, k) {
            groups.entry((SwitchSign::Plus, label)).or_default().push(h.pair);
        }
    }
    groups
}

pub(super) fn contaminating_labels(spec: &DgpSpec, k: usize) -> Vec<GroupLabel> {
    groups_switching_at(spec, k).into_keys().map(|(_, label)| label).collect()
}

fn term(spec: &DgpSpec, label: GroupLabel, members: Vec<AdoptionPair>, t: usize, fs_t: Option<f64>) -> GroupTerm {
    let switch_period = label.switch_period();
    let exposure = t - switch_period.unwrap_or(1);
    let (prob, weighted) = members
        .iter()
        .filter_map(|p| spec.history(p))
        .fold((0.0, 0.0), |(m, s), h| (m + h.prob, s + h.prob * h.effect(t, exposure)));
    let sign = label.sign();
    let signed_prob = sign.factor() * prob;
    let effect = weighted / prob;
    GroupTerm {
        label,
        notation: label.notation(),
        switch_period,
        exposure,
        members,
        prob,
        effect,
        sign,
        signed_prob,
        contribution: signed_prob * effect,
        weight: fs_t.map(|f| signed_prob / f),
    }
}

/// Decomposes the population reduced form at `t` into the `C_1` lead term and
/// the `G-_k` / `G+_k` contamination terms for k = 2..t.
pub fn decompose(spec: &DgpSpec, t: usize) -> Result<DecompositionReport, DgpError> {
    if t < 2 || t > spec.horizon() {
        return Err(LatentError::SwitchPeriodOutOfRange { t, horizon: spec.horizon() }.into());
    }
    let est = population_estimands(spec);
    let fs = est.fs(t);
    let fs_t = (fs.abs() > POPULATION_ZERO).then_some(fs);

    let c1_members: Vec<AdoptionPair> = spec
        .histories()
        .iter()
        .filter(|h| h.prob > 0.0 && h.pair.is_first_period_complier())
        .map(|h| h.pair)
        .collect();
    let lead = term(spec, GroupLabel::C1, c1_members, t, fs_t);

    let terms = (2..=t)
        .flat_map(|k| groups_switching_at(spec, k))
        .map(|((_, label), members)| term(spec, label, members, t, fs_t))
        .collect();

    Ok(DecompositionReport { t, rf: est.rf(t), fs, lead, terms })
}

/// Terms receiving a negative weight in `RF_t / FS_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NegativeWeights {
    /// `FS_t != 0`: terms whose normalized weight is negative.
    Weighted { t: usize, fs: f64, terms: Vec<GroupTerm> },
    /// `FS_t = 0`: the IV ratio is undefined; terms entering `RF_t` with a
    /// negative signed probability are listed instead.
    IvUndefined { t: usize, terms: Vec<GroupTerm> },
}

impl NegativeWeights {
    pub fn terms(&self) -> &[GroupTerm] {
        match self {
            NegativeWeights::Weighted { terms, .. } | NegativeWeights::IvUndefined { terms, .. } => terms,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms().is_empty()
    }
}

pub fn negative_weight_report(spec: &DgpSpec, t: usize) -> Result<NegativeWeights, DgpError> {
    let report = decompose(spec, t)?;
    let fs = report.fs;
    let all = report.all_terms().cloned();
    Ok(if report.lead.weight.is_some() {
        NegativeWeights::Weighted {
            t,
            fs,
            terms: all.filter(|g| g.weight.is_some_and(|w| w < 0.0)).collect(),
        }
    } else {
        NegativeWeights::IvUndefined { t, terms: all.filter(|g| g.signed_prob < 0.0).collect() }
    })
}
