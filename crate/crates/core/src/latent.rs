//! Latent compliance histories under an irreversible treatment.
//!
//! Because treatment can only switch on once, the full history of a unit's
//! potential treatments is captured by two adoption times: the first period
//! in which it is treated when assigned `Z = 1`, and the first period in
//! which it is treated when assigned `Z = 0`. Everything else in this module
//! (per-period IV types, the switcher sets, group labels and their notation)
//! is derived from that pair by integer comparisons.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatentError {
    #[error("period {t} outside 1..={horizon}")]
    PeriodOutOfRange { t: usize, horizon: usize },
    #[error("switcher sets are defined for periods 2..={horizon}, got {t}")]
    SwitchPeriodOutOfRange { t: usize, horizon: usize },
    #[error("horizon must be at least 1")]
    EmptyHorizon,
}

/// Per-period IV type, determined by `(D_t(1), D_t(0))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IvType {
    AlwaysTaker,
    Complier,
    Defier,
    NeverTaker,
}

impl IvType {
    pub fn from_potential_treatments(d1: bool, d0: bool) -> Self {
        match (d1, d0) {
            (true, true) => IvType::AlwaysTaker,
            (true, false) => IvType::Complier,
            (false, true) => IvType::Defier,
            (false, false) => IvType::NeverTaker,
        }
    }

    pub fn abbreviation(self) -> &'static str {
        match self {
            IvType::AlwaysTaker => "AT",
            IvType::Complier => "C",
            IvType::Defier => "F",
            IvType::NeverTaker => "NT",
        }
    }
}

/// First treated period under one instrument arm. `Never` sorts after every
/// period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Adoption {
    Period(usize),
    Never,
}

impl Adoption {
    /// Treated at `t` under this arm.
    #[inline]
    pub fn treated_by(self, t: usize) -> bool {
        match self {
            Adoption::Period(s) => s <= t,
            Adoption::Never => false,
        }
    }

    pub fn period(self) -> Option<usize> {
        match self {
            Adoption::Period(s) => Some(s),
            Adoption::Never => None,
        }
    }

    pub fn is_period(self, t: usize) -> bool {
        self == Adoption::Period(t)
    }
}

impl fmt::Display for Adoption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Adoption::Period(s) => write!(f, "{s}"),
            Adoption::Never => f.write_str("N"),
        }
    }
}

impl Serialize for Adoption {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Adoption::Period(s) => serializer.serialize_u64(*s as u64),
            Adoption::Never => serializer.serialize_str("never"),
        }
    }
}

impl<'de> Deserialize<'de> for Adoption {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct AdoptionVisitor;

        impl Visitor<'_> for AdoptionVisitor {
            type Value = Adoption;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive period or the string \"never\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Adoption, E> {
                if v == 0 {
                    return Err(E::custom("adoption periods are 1-based"));
                }
                Ok(Adoption::Period(v as usize))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Adoption, E> {
                if v <= 0 {
                    return Err(E::custom("adoption periods are 1-based"));
                }
                Ok(Adoption::Period(v as usize))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Adoption, E> {
                match v {
                    "never" | "Never" | "N" => Ok(Adoption::Never),
                    other => Err(E::custom(format!("unknown adoption value {other:?}"))),
                }
            }
        }

        deserializer.deserialize_any(AdoptionVisitor)
    }
}

/// Latent compliance history encoded as adoption times under each arm.
///
/// Field order gives the lexicographic `(s1, s0)` ordering used by
/// [`enumerate_histories`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AdoptionPair {
    pub s1: Adoption,
    pub s0: Adoption,
}

impl AdoptionPair {
    pub const fn new(s1: Adoption, s0: Adoption) -> Self {
        Self { s1, s0 }
    }

    /// First treated period under arm `z`.
    #[inline]
    pub fn adoption(&self, z: bool) -> Adoption {
        if z {
            self.s1
        } else {
            self.s0
        }
    }

    /// Potential treatment `D_t(z)`.
    #[inline]
    pub fn treated(&self, z: bool, t: usize) -> bool {
        self.adoption(z).treated_by(t)
    }

    /// IV type at `t` without a horizon check.
    #[inline]
    pub fn type_unchecked(&self, t: usize) -> IvType {
        IvType::from_potential_treatments(self.treated(true, t), self.treated(false, t))
    }

    /// Violates first-period monotonicity (a defier at t = 1).
    pub fn is_first_period_defier(&self) -> bool {
        self.s0.is_period(1) && !self.s1.is_period(1)
    }

    /// Member of the first-period compliers `C_1`.
    pub fn is_first_period_complier(&self) -> bool {
        self.s1.is_period(1) && !self.s0.is_period(1)
    }

    pub fn within_horizon(&self, horizon: usize) -> bool {
        let ok = |a: Adoption| match a {
            Adoption::Period(s) => (1..=horizon).contains(&s),
            Adoption::Never => true,
        };
        ok(self.s1) && ok(self.s0)
    }

    /// Paper-style notation of the type history through period `through`,
    /// e.g. `(NT_1,F_2,AT_3)`. Runs of the same type are compressed and the
    /// history stops at the first always-taker period.
    pub fn history_notation(&self, through: usize) -> String {
        let mut runs: Vec<(IvType, usize, usize)> = Vec::new();
        for t in 1..=through {
            let ty = self.type_unchecked(t);
            match runs.last_mut() {
                Some((last, _, end)) if *last == ty => *end = t,
                _ => runs.push((ty, t, t)),
            }
            if ty == IvType::AlwaysTaker {
                break;
            }
        }
        let parts: Vec<String> = runs
            .into_iter()
            .map(|(ty, start, end)| span_notation(ty, start, end))
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            format!("({})", parts.join(","))
        }
    }
}

impl fmt::Display for AdoptionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s1, self.s0)
    }
}

fn span_notation(ty: IvType, start: usize, end: usize) -> String {
    if start == end {
        format!("{}_{}", ty.abbreviation(), start)
    } else {
        format!("{}_{{{}:{}}}", ty.abbreviation(), start, end)
    }
}

/// IV type of `pair` at period `t` of a `horizon`-period panel.
pub fn type_at(pair: &AdoptionPair, t: usize, horizon: usize) -> Result<IvType, LatentError> {
    if t == 0 || t > horizon {
        return Err(LatentError::PeriodOutOfRange { t, horizon });
    }
    Ok(pair.type_unchecked(t))
}

fn adoption_values(horizon: usize) -> impl Iterator<Item = Adoption> + Clone {
    (1..=horizon)
        .map(Adoption::Period)
        .chain(std::iter::once(Adoption::Never))
}

/// All `(T+1)^2` adoption pairs, sorted by `(s1, s0)`; first-period defiers
/// are dropped when `exclude_first_period_defiers` is set.
pub fn enumerate_histories(horizon: usize, exclude_first_period_defiers: bool) -> Vec<AdoptionPair> {
    let mut out = Vec::with_capacity((horizon + 1) * (horizon + 1));
    for s1 in adoption_values(horizon) {
        for s0 in adoption_values(horizon) {
            let pair = AdoptionPair::new(s1, s0);
            if exclude_first_period_defiers && pair.is_first_period_defier() {
                continue;
            }
            out.push(pair);
        }
    }
    out
}

/// Whether a pair switches into treatment at `k` under `Z = 1` (`Plus`) or
/// under `Z = 0` (`Minus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchSign {
    Minus,
    Plus,
}

impl SwitchSign {
    pub fn factor(self) -> f64 {
        match self {
            SwitchSign::Minus => -1.0,
            SwitchSign::Plus => 1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            SwitchSign::Minus => '-',
            SwitchSign::Plus => '+',
        }
    }
}

/// `G+_k` membership: switches in at `k` only when `Z = 1`.
pub fn in_plus_set(pair: &AdoptionPair, k: usize) -> bool {
    k >= 2 && pair.s1.is_period(k) && !pair.s0.is_period(k) && !pair.s0.is_period(1)
}

/// `G-_k` membership: switches in at `k` only when `Z = 0`.
pub fn in_minus_set(pair: &AdoptionPair, k: usize) -> bool {
    k >= 2 && pair.s0.is_period(k) && !pair.s1.is_period(k)
}

/// Members of `G+_t` and `G-_t` among the histories admitted under
/// first-period monotonicity.
pub fn switcher_sets(
    horizon: usize,
    t: usize,
) -> Result<(BTreeSet<AdoptionPair>, BTreeSet<AdoptionPair>), LatentError> {
    if t < 2 || t > horizon {
        return Err(LatentError::SwitchPeriodOutOfRange { t, horizon });
    }
    let all = enumerate_histories(horizon, true);
    let plus = all.iter().copied().filter(|p| in_plus_set(p, t)).collect();
    let minus = all.iter().copied().filter(|p| in_minus_set(p, t)).collect();
    Ok((plus, minus))
}

/// Named latent groups appearing in the reduced-form decomposition.
///
/// Each label denotes a fixed set of adoption pairs:
/// * `C1`: `s1 = 1, s0 >= 2`
/// * `CompliersThenAlways(k)`: `s1 = 1, s0 = k`
/// * `NeverThenComplier(k)`: `s1 = k, s0 > k`
/// * `NeverThenDefier(k)`: `s0 = k, s1 > k`
/// * `NeverCompliersThenAlways { from, at }`: `s1 = from, s0 = at`, `2 <= from < at`
/// * `NeverDefiersThenAlways { from, at }`: `s0 = from, s1 = at`, `2 <= from < at`
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupLabel {
    C1,
    CompliersThenAlways { at: usize },
    NeverThenComplier { at: usize },
    NeverThenDefier { at: usize },
    NeverCompliersThenAlways { from: usize, at: usize },
    NeverDefiersThenAlways { from: usize, at: usize },
}

impl GroupLabel {
    pub fn contains(&self, pair: &AdoptionPair) -> bool {
        use Adoption::Period;
        match *self {
            GroupLabel::C1 => pair.is_first_period_complier(),
            GroupLabel::CompliersThenAlways { at } => pair.s1 == Period(1) && pair.s0 == Period(at),
            GroupLabel::NeverThenComplier { at } => pair.s1 == Period(at) && pair.s0 > Period(at),
            GroupLabel::NeverThenDefier { at } => pair.s0 == Period(at) && pair.s1 > Period(at),
            GroupLabel::NeverCompliersThenAlways { from, at } => {
                pair.s1 == Period(from) && pair.s0 == Period(at)
            }
            GroupLabel::NeverDefiersThenAlways { from, at } => {
                pair.s0 == Period(from) && pair.s1 == Period(at)
            }
        }
    }

    /// Period at which the group switches in; `None` for `C_1`.
    pub fn switch_period(&self) -> Option<usize> {
        match *self {
            GroupLabel::C1 => None,
            GroupLabel::CompliersThenAlways { at }
            | GroupLabel::NeverThenComplier { at }
            | GroupLabel::NeverThenDefier { at }
            | GroupLabel::NeverCompliersThenAlways { at, .. }
            | GroupLabel::NeverDefiersThenAlways { at, .. } => Some(at),
        }
    }

    /// Sign with which the group's effect enters the reduced form.
    pub fn sign(&self) -> SwitchSign {
        match self {
            GroupLabel::C1
            | GroupLabel::NeverThenComplier { .. }
            | GroupLabel::NeverDefiersThenAlways { .. } => SwitchSign::Plus,
            GroupLabel::CompliersThenAlways { .. }
            | GroupLabel::NeverThenDefier { .. }
            | GroupLabel::NeverCompliersThenAlways { .. } => SwitchSign::Minus,
        }
    }

    /// Members within a `horizon`-period model.
    pub fn members(&self, horizon: usize) -> Vec<AdoptionPair> {
        enumerate_histories(horizon, true)
            .into_iter()
            .filter(|p| self.contains(p))
            .collect()
    }

    pub fn notation(&self) -> String {
        let s = span_notation;
        use IvType::*;
        match *self {
            GroupLabel::C1 => "C_1".to_string(),
            GroupLabel::CompliersThenAlways { at } => {
                format!("({},{})", s(Complier, 1, at - 1), s(AlwaysTaker, at, at))
            }
            GroupLabel::NeverThenComplier { at } => {
                format!("({},{})", s(NeverTaker, 1, at - 1), s(Complier, at, at))
            }
            GroupLabel::NeverThenDefier { at } => {
                format!("({},{})", s(NeverTaker, 1, at - 1), s(Defier, at, at))
            }
            GroupLabel::NeverCompliersThenAlways { from, at } => format!(
                "({},{},{})",
                s(NeverTaker, 1, from - 1),
                s(Complier, from, at - 1),
                s(AlwaysTaker, at, at)
            ),
            GroupLabel::NeverDefiersThenAlways { from, at } => format!(
                "({},{},{})",
                s(NeverTaker, 1, from - 1),
                s(Defier, from, at - 1),
                s(AlwaysTaker, at, at)
            ),
        }
    }

    /// Label of the `G-_k` group containing `pair`, if any.
    pub fn minus_group(pair: &AdoptionPair, k: usize) -> Option<GroupLabel> {
        if !in_minus_set(pair, k) {
            return None;
        }
        Some(match pair.s1 {
            Adoption::Period(1) => GroupLabel::CompliersThenAlways { at: k },
            Adoption::Period(from) if from < k => GroupLabel::NeverCompliersThenAlways { from, at: k },
            _ => GroupLabel::NeverThenDefier { at: k },
        })
    }

    /// Label of the `G+_k` group containing `pair`, if any.
    pub fn plus_group(pair: &AdoptionPair, k: usize) -> Option<GroupLabel> {
        if !in_plus_set(pair, k) {
            return None;
        }
        Some(match pair.s0 {
            Adoption::Period(from) if from < k => GroupLabel::NeverDefiersThenAlways { from, at: k },
            _ => GroupLabel::NeverThenComplier { at: k },
        })
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.notation())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Adoption::{Never, Period};

    fn p(s1: Adoption, s0: Adoption) -> AdoptionPair {
        AdoptionPair::new(s1, s0)
    }

    #[test]
    fn type_at_examples() {
        let c1_at2 = p(Period(1), Period(2));
        assert_eq!(type_at(&c1_at2, 1, 2).unwrap(), IvType::Complier);
        assert_eq!(type_at(&c1_at2, 2, 2).unwrap(), IvType::AlwaysTaker);
        assert_eq!(c1_at2.history_notation(2), "(C_1,AT_2)");

        let nt_f2 = p(Never, Period(2));
        assert_eq!(type_at(&nt_f2, 2, 2).unwrap(), IvType::Defier);
        assert_eq!(nt_f2.history_notation(2), "(NT_1,F_2)");
    }

    #[test]
    fn type_at_rejects_out_of_range() {
        let pair = p(Period(1), Never);
        assert!(type_at(&pair, 0, 3).is_err());
        assert!(type_at(&pair, 4, 3).is_err());
    }

    #[test]
    fn enumeration_two_periods_matches_figure() {
        let got = enumerate_histories(2, true);
        let want = vec![
            p(Period(1), Period(1)),
            p(Period(1), Period(2)),
            p(Period(1), Never),
            p(Period(2), Period(2)),
            p(Period(2), Never),
            p(Never, Period(2)),
            p(Never, Never),
        ];
        assert_eq!(got, want);
        let notations: Vec<String> = got.iter().map(|h| h.history_notation(2)).collect();
        assert_eq!(
            notations,
            ["AT_1", "(C_1,AT_2)", "C_{1:2}", "(NT_1,AT_2)", "(NT_1,C_2)", "(NT_1,F_2)", "NT_{1:2}"]
        );
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_histories(1, false).len(), 4);
        // brute force: 16 pairs for T = 3, minus (2,1), (3,1), (N,1)
        let brute = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .filter(|&(s1, s0)| !(s0 == 0 && s1 > 0))
            .count();
        assert_eq!(brute, 13);
        assert_eq!(enumerate_histories(3, true).len(), brute);
    }

    #[test]
    fn switcher_sets_examples() {
        let (plus, minus) = switcher_sets(2, 2).unwrap();
        assert_eq!(plus.into_iter().collect::<Vec<_>>(), vec![p(Period(2), Never)]);
        assert_eq!(
            minus.into_iter().collect::<Vec<_>>(),
            vec![p(Period(1), Period(2)), p(Never, Period(2))]
        );

        let (plus, minus) = switcher_sets(3, 3).unwrap();
        let plus: BTreeSet<_> = plus;
        assert_eq!(plus, [p(Period(3), Never), p(Period(3), Period(2))].into_iter().collect());
        assert_eq!(
            minus,
            [p(Period(1), Period(3)), p(Period(2), Period(3)), p(Never, Period(3))]
                .into_iter()
                .collect()
        );
        let plus_names: BTreeSet<String> = plus.iter().map(|h| h.history_notation(3)).collect();
        assert_eq!(
            plus_names,
            ["(NT_{1:2},C_3)".to_string(), "(NT_1,F_2,AT_3)".to_string()].into_iter().collect()
        );
        let minus_names: BTreeSet<String> = minus.iter().map(|h| h.history_notation(3)).collect();
        assert_eq!(
            minus_names,
            ["(C_{1:2},AT_3)", "(NT_1,C_2,AT_3)", "(NT_{1:2},F_3)"]
                .into_iter()
                .map(String::from)
                .collect()
        );
    }

    #[test]
    fn switcher_sets_reject_bad_period() {
        assert!(switcher_sets(3, 1).is_err());
        assert!(switcher_sets(3, 4).is_err());
    }

    #[test]
    fn group_labels_classify_members() {
        let pair = p(Period(3), Period(2));
        assert_eq!(
            GroupLabel::plus_group(&pair, 3),
            Some(GroupLabel::NeverDefiersThenAlways { from: 2, at: 3 })
        );
        assert_eq!(GroupLabel::minus_group(&pair, 2), Some(GroupLabel::NeverThenDefier { at: 2 }));
        assert_eq!(GroupLabel::NeverThenDefier { at: 2 }.members(3).len(), 2);
        assert_eq!(GroupLabel::C1.members(2), vec![p(Period(1), Period(2)), p(Period(1), Never)]);
    }

    #[test]
    fn adoption_serde_accepts_never_and_integers() {
        let pair: AdoptionPair = serde_json::from_str(r#"{"s1": 1, "s0": "never"}"#).unwrap();
        assert_eq!(pair, p(Period(1), Never));
        assert_eq!(serde_json::to_string(&pair).unwrap(), r#"{"s1":1,"s0":"never"}"#);
        assert!(serde_json::from_str::<Adoption>("0").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn potential_treatments_nondecreasing(horizon in 1usize..7) {
                for pair in enumerate_histories(horizon, false) {
                    for z in [false, true] {
                        for t in 1..horizon {
                            prop_assert!(!pair.treated(z, t) || pair.treated(z, t + 1));
                        }
                    }
                }
            }

            #[test]
            fn cardinality(horizon in 1usize..9) {
                prop_assert_eq!(
                    enumerate_histories(horizon, true).len(),
                    (horizon + 1) * (horizon + 1) - horizon
                );
            }

            #[test]
            fn partition_of_histories(horizon in 2usize..7, t_raw in 0usize..100) {
                let t = 2 + t_raw % (horizon - 1);
                let (plus, minus) = switcher_sets(horizon, t).unwrap();
                prop_assert!(plus.is_disjoint(&minus));
                for pair in enumerate_histories(horizon, true) {
                    let same = pair.s1.is_period(t) && pair.s0.is_period(t);
                    let neither = !pair.s1.is_period(t) && !pair.s0.is_period(t);
                    let classes = [plus.contains(&pair), minus.contains(&pair), same, neither];
                    prop_assert_eq!(classes.iter().filter(|&&c| c).count(), 1);
                }
            }

            #[test]
            fn labels_match_type_histories(horizon in 2usize..7) {
                for t in 2..=horizon {
                    let (plus, minus) = switcher_sets(horizon, t).unwrap();
                    for pair in &plus {
                        let label = GroupLabel::plus_group(pair, t).unwrap();
                        prop_assert_eq!(label.sign(), SwitchSign::Plus);
                        prop_assert!(label.contains(pair));
                        prop_assert_eq!(label.notation(), pair.history_notation(t));
                    }
                    for pair in &minus {
                        let label = GroupLabel::minus_group(pair, t).unwrap();
                        prop_assert_eq!(label.sign(), SwitchSign::Minus);
                        prop_assert!(label.contains(pair));
                        prop_assert_eq!(label.notation(), pair.history_notation(t));
                    }
                }
            }
        }
    }
}
