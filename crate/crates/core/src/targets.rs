//! Scalar targets tracked by Monte Carlo experiments and the bootstrap.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::estimands::EstimandSet;
use crate::estimators::{bounds_general, bounds_general_unrestricted, bounds_tight, identify, BoundsMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Rf(usize),
    Fs(usize),
    Iv(usize),
    /// Identified `Delta^tau(C_1)`, indexed by exposure `tau`.
    Delta(usize),
    BoundLower(BoundsMethod, usize),
    BoundUpper(BoundsMethod, usize),
}

impl Target {
    /// Period whose dynamic LATE `Delta_t^{t-1}(C_1)` this target speaks to.
    pub fn late_period(&self) -> Option<usize> {
        match *self {
            Target::Rf(_) | Target::Fs(_) => None,
            Target::Iv(t) | Target::BoundLower(_, t) | Target::BoundUpper(_, t) => Some(t),
            Target::Delta(tau) => Some(tau + 1),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Rf(t) => write!(f, "rf[{t}]"),
            Target::Fs(t) => write!(f, "fs[{t}]"),
            Target::Iv(t) => write!(f, "iv[{t}]"),
            Target::Delta(tau) => write!(f, "delta[{tau}]"),
            Target::BoundLower(m, t) => write!(f, "bounds.{}[{t}].lower", m.as_str()),
            Target::BoundUpper(m, t) => write!(f, "bounds.{}[{t}].upper", m.as_str()),
        }
    }
}

impl Serialize for Target {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Target {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("unrecognized target {s:?}");
        let (head, rest) = s.split_once('[').ok_or_else(bad)?;
        let (index, tail) = rest.split_once(']').ok_or_else(bad)?;
        let index: usize = index.parse().map_err(|_| bad())?;
        let method = |name: &str| match name {
            "general" => Ok(BoundsMethod::General),
            "general_unrestricted" => Ok(BoundsMethod::GeneralUnrestricted),
            "tight" => Ok(BoundsMethod::Tight),
            _ => Err(bad()),
        };
        match (head, tail) {
            ("rf", "") => Ok(Target::Rf(index)),
            ("fs", "") => Ok(Target::Fs(index)),
            ("iv", "") => Ok(Target::Iv(index)),
            ("delta", "") => Ok(Target::Delta(index)),
            (h, ".lower") if h.starts_with("bounds.") => Ok(Target::BoundLower(method(&h[7..])?, index)),
            (h, ".upper") if h.starts_with("bounds.") => Ok(Target::BoundUpper(method(&h[7..])?, index)),
            _ => Err(bad()),
        }
    }
}

/// Which families of targets to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetSelection {
    pub rf: bool,
    pub fs: bool,
    pub iv: bool,
    pub identified: bool,
    /// Effect bounds `(lo, hi)` for the bound endpoints, if wanted.
    pub bounds: Option<(f64, f64)>,
    /// Include tight bounds (only when `lo <= 0 <= hi`).
    pub tight: bool,
}

impl TargetSelection {
    pub fn all(bounds: (f64, f64)) -> Self {
        Self { rf: true, fs: true, iv: true, identified: true, bounds: Some(bounds), tight: true }
    }

    pub fn only_identified() -> Self {
        Self { rf: false, fs: false, iv: false, identified: true, bounds: None, tight: false }
    }

    /// Targets in a fixed order for a `horizon`-period model.
    pub fn targets(&self, horizon: usize) -> Vec<Target> {
        let mut out = Vec::new();
        let periods = 1..=horizon;
        if self.rf {
            out.extend(periods.clone().map(Target::Rf));
        }
        if self.fs {
            out.extend(periods.clone().map(Target::Fs));
        }
        if self.iv {
            out.extend(periods.clone().map(Target::Iv));
        }
        if self.identified {
            out.extend((0..horizon).map(Target::Delta));
        }
        if let Some((lo, hi)) = self.bounds {
            let signed = lo <= 0.0 && hi >= 0.0;
            let general = if signed { BoundsMethod::General } else { BoundsMethod::GeneralUnrestricted };
            let mut methods = vec![general];
            if self.tight && signed {
                methods.push(BoundsMethod::Tight);
            }
            for m in methods {
                for t in 2..=horizon {
                    out.push(Target::BoundLower(m, t));
                    out.push(Target::BoundUpper(m, t));
                }
            }
        }
        out
    }

    /// Evaluates every selected target; `None` where the target is
    /// undefined (e.g. `FS_1 = 0` for identification).
    pub fn evaluate(&self, est: &EstimandSet) -> Vec<(Target, Option<f64>)> {
        let profile = if self.identified { identify(est).ok() } else { None };
        let (lo, hi) = self.bounds.unwrap_or((0.0, 0.0));
        let bound = |m: BoundsMethod, t: usize| match m {
            BoundsMethod::General => bounds_general(est, t, lo, hi),
            BoundsMethod::GeneralUnrestricted => bounds_general_unrestricted(est, t, lo, hi),
            BoundsMethod::Tight => bounds_tight(est, t, lo, hi),
        };
        self.targets(est.horizon)
            .into_iter()
            .map(|target| {
                let value = match target {
                    Target::Rf(t) => Some(est.rf(t)),
                    Target::Fs(t) => Some(est.fs(t)),
                    Target::Iv(t) => est.iv(t),
                    Target::Delta(tau) => profile.as_ref().map(|p| p.deltas[tau]),
                    Target::BoundLower(m, t) => bound(m, t).ok().map(|b| b.lower),
                    Target::BoundUpper(m, t) => bound(m, t).ok().map(|b| b.upper),
                };
                (target, value)
            })
            .collect()
    }
}
