use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Identifying assumptions a caller may declare. Outputs whose validity
/// depends on one of these carry it in their metadata; nothing in the
/// library checks them against data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption {
    /// Effects depend on exposure length but not on calendar time, for
    /// first-period compliers and for every contaminating group.
    CalendarHomogeneity,
    /// Within each switch period, all contaminating groups share the same
    /// effect at a given calendar period.
    CrossGroupHomogeneity,
    /// First-period never-takers do not change take-up with the instrument
    /// in later periods.
    NoLateSwitchers,
}

impl Assumption {
    pub fn as_str(self) -> &'static str {
        match self {
            Assumption::CalendarHomogeneity => "calendar-homogeneity",
            Assumption::CrossGroupHomogeneity => "cross-group-homogeneity",
            Assumption::NoLateSwitchers => "no-late-switchers",
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Assumption {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "calendar-homogeneity" => Ok(Assumption::CalendarHomogeneity),
            "cross-group-homogeneity" => Ok(Assumption::CrossGroupHomogeneity),
            "no-late-switchers" => Ok(Assumption::NoLateSwitchers),
            other => Err(format!("unknown assumption {other:?}")),
        }
    }
}
