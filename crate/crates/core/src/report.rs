//! Machine-readable run reports.
//!
//! Reports are JSON with every float written as `{:.16e}` (17 significant
//! digits), which parses back to the identical `f64`. Non-finite values are
//! written as `null`.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::assumptions::Assumption;
use crate::dgp::{DecompositionReport, NegativeWeights};
use crate::estimands::EstimandSet;
use crate::estimators::{BoundsReport, IdentifiedProfile, NegativeWeightDiagnostic};
use crate::inference::BootstrapResult;
use crate::numfmt::sig17;
use crate::panel::AssumptionDiagnostics;
use crate::simulate::MonteCarloSummary;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Parameters a run was invoked with. The thread count is deliberately
/// absent: it never changes results.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panel: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dgp: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<(f64, f64)>,
    /// `true` when `bounds` was derived from the outcome range.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub bounds_from_outcome_range: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Output {
    Check {
        diagnostics: AssumptionDiagnostics,
    },
    Estimate {
        estimands: EstimandSet,
        negative_weights: NegativeWeightDiagnostic,
        weak_first_stage: bool,
    },
    Identify {
        profile: IdentifiedProfile,
        residual: f64,
    },
    Bounds {
        bounds: Vec<BoundsReport>,
    },
    Decompose {
        decomposition: DecompositionReport,
        negative_weights: NegativeWeights,
    },
    Simulate {
        n_units: usize,
        horizon: usize,
        n_z1: usize,
        n_z0: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        out: Option<String>,
    },
    MonteCarlo {
        summary: MonteCarloSummary,
    },
    Bootstrap {
        result: BootstrapResult,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Inputs,
    pub assumptions: Vec<Assumption>,
    pub output: Output,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Inputs, assumptions: Vec<Assumption>, output: Output) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            assumptions,
            output,
            warnings: Vec::new(),
        }
    }

    /// Pretty JSON with 17-significant-digit floats and a trailing newline.
    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Pretty-printing formatter that writes floats with [`sig17`].
struct Sig17Formatter<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serializes any value as pretty JSON with 17-significant-digit floats.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report values serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
