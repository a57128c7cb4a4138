//! DGP spec files (TOML or JSON), schema version 1.
//!
//! ```toml
//! schema_version = 1
//! T = 2
//! pz = 0.5
//! noise_sd = 1.0
//!
//! [[histories]]
//! s1 = 1
//! s0 = "never"
//! prob = 0.3
//! baseline = [0.0, 0.0]
//! effects = [[1.0], [0.0, 2.0]]
//! ```
//!
//! `effects[t-1][tau]` is the effect at period `t` after `tau` periods of
//! exposure, so row `t` has `t` entries.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DgpError, DgpSpec, HistorySpec};
use crate::latent::{Adoption, AdoptionPair};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistoryEntry {
    pub s1: Adoption,
    pub s0: Adoption,
    pub prob: f64,
    pub baseline: Vec<f64>,
    pub effects: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgpFile {
    pub schema_version: u32,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub pz: f64,
    pub noise_sd: f64,
    pub histories: Vec<HistoryEntry>,
}

impl DgpFile {
    pub fn into_spec(self) -> Result<DgpSpec, DgpError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DgpError::Schema(format!(
                "unsupported schema_version {}, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        let histories = self
            .histories
            .into_iter()
            .map(|h| HistorySpec {
                pair: AdoptionPair::new(h.s1, h.s0),
                prob: h.prob,
                baseline: h.baseline,
                effects: h.effects,
            })
            .collect();
        DgpSpec::new(self.horizon, self.pz, histories, self.noise_sd)
    }
}

impl From<&DgpSpec> for DgpFile {
    fn from(spec: &DgpSpec) -> Self {
        DgpFile {
            schema_version: SCHEMA_VERSION,
            horizon: spec.horizon(),
            pz: spec.pz(),
            noise_sd: spec.noise_sd(),
            histories: spec
                .histories()
                .iter()
                .map(|h| HistoryEntry {
                    s1: h.pair.s1,
                    s0: h.pair.s0,
                    prob: h.prob,
                    baseline: h.baseline.clone(),
                    effects: h.effects.clone(),
                })
                .collect(),
        }
    }
}

impl DgpSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, DgpError> {
        let file: DgpFile = toml::from_str(text).map_err(|e| DgpError::Schema(e.message().to_string()))?;
        file.into_spec()
    }

    pub fn from_json_str(text: &str) -> Result<Self, DgpError> {
        let file: DgpFile = serde_json::from_str(text).map_err(|e| DgpError::Schema(e.to_string()))?;
        file.into_spec()
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&DgpFile::from(self)).expect("spec file serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&DgpFile::from(self)).expect("spec file serializes")
    }

    /// Reads a spec file; `.json` files are parsed as JSON, anything else as
    /// TOML.
    pub fn load(path: &Path) -> Result<Self, DgpError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DgpError::Schema(format!("{}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json_str(&text),
            _ => Self::from_toml_str(&text),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::three_history;
    use super::*;

    const THREE_HISTORY: &str = r#"
schema_version = 1
T = 2
pz = 0.5
noise_sd = 0.0

[[histories]]
s1 = 1
s0 = "never"
prob = 0.3
baseline = [0.0, 0.0]
effects = [[1.0], [0.0, 2.0]]

[[histories]]
s1 = 1
s0 = 2
prob = 0.1
baseline = [0.0, 0.0]
effects = [[1.0], [1.5, 2.0]]

[[histories]]
s1 = "never"
s0 = "never"
prob = 0.6
baseline = [0, 0]
effects = [[0], [0, 0]]
"#;

    #[test]
    fn parses_documented_layout() {
        assert_eq!(DgpSpec::from_toml_str(THREE_HISTORY).unwrap(), three_history());
    }

    #[test]
    fn toml_and_json_round_trip() {
        let spec = three_history();
        assert_eq!(DgpSpec::from_toml_str(&spec.to_toml_string()).unwrap(), spec);
        assert_eq!(DgpSpec::from_json_str(&spec.to_json_string()).unwrap(), spec);
    }

    #[test]
    fn schema_errors() {
        let wrong_version = THREE_HISTORY.replace("schema_version = 1", "schema_version = 2");
        assert!(matches!(DgpSpec::from_toml_str(&wrong_version), Err(DgpError::Schema(_))));
        let unknown = THREE_HISTORY.replace("noise_sd = 0.0", "noise_sd = 0.0\nextra = 1");
        assert!(matches!(DgpSpec::from_toml_str(&unknown), Err(DgpError::Schema(_))));
        let bad_adoption = THREE_HISTORY.replace("s0 = 2", "s0 = \"later\"");
        assert!(matches!(DgpSpec::from_toml_str(&bad_adoption), Err(DgpError::Schema(_))));
    }
}
