//! Observed panel data: CSV ingestion, structural validation and the
//! first-period diagnostics that can be read off `(Z, D, Y)`.
//!
//! Units are assumed to be sampled i.i.d.; nothing here models dependence
//! across units.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::latent::Adoption;
use crate::numfmt::sig17;

pub const CSV_HEADER: [&str; 5] = ["unit_id", "period", "z", "d", "y"];

/// First-stage magnitudes below this are reported as weak.
pub const WEAK_FIRST_STAGE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PanelError {
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("unbalanced panel: unit {unit:?} {reason}")]
    UnbalancedPanel { unit: String, reason: String },
    #[error("instrument varies within unit {unit:?}")]
    InstrumentVariesWithinUnit { unit: String },
    #[error("treatment reversal for unit {unit:?} at period {period}")]
    TreatmentReversal { unit: String, period: usize },
    #[error("degenerate instrument: every unit has z = {arm}")]
    DegenerateInstrument { arm: u8 },
    #[error("panel has no observations")]
    Empty,
    #[error("i/o error: {0}")]
    Io(String),
}

/// One row of the long-format panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub unit_id: String,
    pub period: usize,
    pub z: bool,
    pub d: bool,
    pub y: f64,
}

/// A unit's full time series. Treatment is stored as its first treated
/// period, so irreversibility holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitRecord {
    pub id: String,
    pub z: bool,
    pub first_treated: Adoption,
    pub y: Vec<f64>,
}

impl UnitRecord {
    pub fn d(&self, t: usize) -> bool {
        self.first_treated.treated_by(t)
    }
}

/// Balanced panel of units sorted by id, with a time-invariant instrument
/// and nondecreasing treatment.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    horizon: usize,
    units: Vec<UnitRecord>,
}

impl Panel {
    /// Builds a panel from unit records. Checks sortedness/uniqueness of ids,
    /// series lengths and finiteness; does not require both instrument arms.
    pub fn from_units(horizon: usize, mut units: Vec<UnitRecord>) -> Result<Self, PanelError> {
        if horizon == 0 || units.is_empty() {
            return Err(PanelError::Empty);
        }
        units.sort_by(|a, b| a.id.cmp(&b.id));
        for w in units.windows(2) {
            if w[0].id == w[1].id {
                return Err(PanelError::UnbalancedPanel {
                    unit: w[0].id.clone(),
                    reason: "appears more than once".into(),
                });
            }
        }
        for u in &units {
            if u.y.len() != horizon {
                return Err(PanelError::UnbalancedPanel {
                    unit: u.id.clone(),
                    reason: format!("has {} periods, expected {horizon}", u.y.len()),
                });
            }
            if let Adoption::Period(s) = u.first_treated {
                if s == 0 || s > horizon {
                    return Err(PanelError::UnbalancedPanel {
                        unit: u.id.clone(),
                        reason: format!("first treated at {s}, outside 1..={horizon}"),
                    });
                }
            }
        }
        Ok(Self { horizon, units })
    }

    /// Validates long-format rows: balanced, instrument constant within unit,
    /// no treatment reversals, both arms present.
    pub fn from_observations(obs: Vec<Observation>) -> Result<Self, PanelError> {
        if obs.is_empty() {
            return Err(PanelError::Empty);
        }
        let horizon = obs.iter().map(|o| o.period).max().unwrap_or(0);
        let mut by_unit: BTreeMap<String, Vec<Option<Observation>>> = BTreeMap::new();
        for o in obs {
            let slots = by_unit
                .entry(o.unit_id.clone())
                .or_insert_with(|| vec![None; horizon]);
            let slot = &mut slots[o.period - 1];
            if slot.is_some() {
                return Err(PanelError::UnbalancedPanel {
                    unit: o.unit_id,
                    reason: format!("has period {} more than once", o.period),
                });
            }
            *slot = Some(o);
        }

        let mut units = Vec::with_capacity(by_unit.len());
        for (id, slots) in by_unit {
            if let Some(missing) = slots.iter().position(Option::is_none) {
                return Err(PanelError::UnbalancedPanel {
                    unit: id,
                    reason: format!("is missing period {}", missing + 1),
                });
            }
            let rows: Vec<Observation> = slots.into_iter().flatten().collect();
            let z = rows[0].z;
            if rows.iter().any(|r| r.z != z) {
                return Err(PanelError::InstrumentVariesWithinUnit { unit: id });
            }
            let mut first_treated = Adoption::Never;
            for r in &rows {
                match (first_treated, r.d) {
                    (Adoption::Never, true) => first_treated = Adoption::Period(r.period),
                    (Adoption::Period(_), false) => {
                        return Err(PanelError::TreatmentReversal { unit: id, period: r.period });
                    }
                    _ => {}
                }
            }
            let y = rows.iter().map(|r| r.y).collect();
            units.push(UnitRecord { id, z, first_treated, y });
        }

        let panel = Self::from_units(horizon, units)?;
        panel.require_both_arms()?;
        Ok(panel)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn n_units(&self) -> usize {
        self.units.len()
    }

    pub fn units(&self) -> &[UnitRecord] {
        &self.units
    }

    /// Unit counts `(n_z0, n_z1)`.
    pub fn arm_counts(&self) -> (usize, usize) {
        let n1 = self.units.iter().filter(|u| u.z).count();
        (self.units.len() - n1, n1)
    }

    pub fn require_both_arms(&self) -> Result<(), PanelError> {
        match self.arm_counts() {
            (0, _) => Err(PanelError::DegenerateInstrument { arm: 1 }),
            (_, 0) => Err(PanelError::DegenerateInstrument { arm: 0 }),
            _ => Ok(()),
        }
    }

    /// Rows in `(unit_id, period)` order.
    pub fn observations(&self) -> impl Iterator<Item = Observation> + '_ {
        self.units.iter().flat_map(|u| {
            u.y.iter().enumerate().map(move |(i, &y)| Observation {
                unit_id: u.id.clone(),
                period: i + 1,
                z: u.z,
                d: u.d(i + 1),
                y,
            })
        })
    }

    /// `(min y, max y)` over all observations.
    pub fn outcome_range(&self) -> (f64, f64) {
        self.units
            .iter()
            .flat_map(|u| u.y.iter().copied())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), PanelError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        let io = |e: csv::Error| PanelError::Io(e.to_string());
        w.write_record(CSV_HEADER).map_err(io)?;
        for o in self.observations() {
            w.write_record([
                o.unit_id.as_str(),
                &o.period.to_string(),
                if o.z { "1" } else { "0" },
                if o.d { "1" } else { "0" },
                &sig17(o.y),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| PanelError::Io(e.to_string()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Reads a panel from CSV with header `unit_id,period,z,d,y`.
pub fn ingest<R: Read>(source: R) -> Result<Panel, PanelError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| PanelError::MalformedRow { line: 1, reason: e.to_string() })?
        .clone();
    let mut idx = [0usize; 5];
    for (slot, name) in idx.iter_mut().zip(CSV_HEADER) {
        *slot = headers.iter().position(|h| h == name).ok_or_else(|| PanelError::MalformedRow {
            line: 1,
            reason: format!("missing column {name:?}"),
        })?;
    }

    let mut obs = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| PanelError::MalformedRow {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize, name: &str| -> Result<&str, PanelError> {
            match record.get(idx[i]) {
                Some(s) if !s.is_empty() => Ok(s),
                _ => Err(PanelError::MalformedRow { line, reason: format!("missing value for {name}") }),
            }
        };
        let bad = |reason: String| PanelError::MalformedRow { line, reason };
        let binary = |s: &str, name: &str| match s {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(bad(format!("{name} must be 0 or 1, got {other:?}"))),
        };

        let unit_id = field(0, "unit_id")?.to_string();
        let period_text = field(1, "period")?;
        let period: usize = period_text
            .parse()
            .map_err(|_| bad(format!("period {period_text:?} is not a positive integer")))?;
        if period == 0 {
            return Err(bad("periods are 1-based".into()));
        }
        let z = binary(field(2, "z")?, "z")?;
        let d = binary(field(3, "d")?, "d")?;
        let y_text = field(4, "y")?;
        let y: f64 = y_text
            .parse()
            .map_err(|_| bad(format!("y {y_text:?} is not a number")))?;
        if !y.is_finite() {
            return Err(bad(format!("y {y_text:?} is not finite")));
        }
        obs.push(Observation { unit_id, period, z, d, y });
    }
    Panel::from_observations(obs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelevanceStatus {
    Holds,
    /// `FS_1` is nonzero but below [`WEAK_FIRST_STAGE`] in magnitude.
    Weak,
    Fails,
}

/// What the data can and cannot say about the maintained assumptions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionDiagnostics {
    pub horizon: usize,
    pub n: usize,
    pub n_z1: usize,
    pub n_z0: usize,
    pub fs1: f64,
    pub relevance: RelevanceStatus,
    pub notes: Vec<String>,
}

pub const UNTESTABLE_NOTES: [&str; 3] = [
    "monotonicity at t=1: assumed, untestable from (Z, D, Y)",
    "independence of the instrument: assumed, untestable from (Z, D, Y)",
    "exclusion restriction: assumed, untestable from (Z, D, Y)",
];

/// First-period relevance check on a sample. `FS_1` is a difference of count
/// ratios, so zero is tested exactly.
pub fn check_assumptions(panel: &Panel) -> AssumptionDiagnostics {
    let (n_z0, n_z1) = panel.arm_counts();
    let treated = |arm: bool| panel.units().iter().filter(|u| u.z == arm && u.d(1)).count();
    let share = |count: usize, n: usize| if n == 0 { 0.0 } else { count as f64 / n as f64 };
    let fs1 = share(treated(true), n_z1) - share(treated(false), n_z0);

    let mut notes = Vec::new();
    let relevance = if fs1 == 0.0 {
        notes.push("relevance at t=1 fails (FS_1=0)".to_string());
        RelevanceStatus::Fails
    } else if fs1.abs() < WEAK_FIRST_STAGE {
        notes.push(format!("weak first stage at t=1: |FS_1| < {WEAK_FIRST_STAGE}"));
        RelevanceStatus::Weak
    } else {
        RelevanceStatus::Holds
    };
    if fs1 < 0.0 {
        notes.push("FS_1 < 0: the instrument coding may be reversed".to_string());
    }
    notes.extend(UNTESTABLE_NOTES.iter().map(|s| s.to_string()));

    AssumptionDiagnostics {
        horizon: panel.horizon(),
        n: panel.n_units(),
        n_z1,
        n_z0,
        fs1,
        relevance,
        notes,
    }
}
