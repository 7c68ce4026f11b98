//! Run configuration: one TOML document with a section per stage.
//!
//! ```toml
//! schema = "toy_schema.toml"      # relative to this file
//!
//! [attack]
//! keys = ["AREAP", "AGE", "SEX", "MSTATUS", "ETHGROUP", "ECONPRIM"]
//! targets = ["LTILL", "FAMTYPE", "TENURE"]
//! binning.AGE = { kind = "width", width = 5.0 }
//!
//! [utility]
//! [[utility.regressions]]
//! name = "married"
//! target = "MSTATUS"
//! positive = ["2"]
//! predictors = ["AGE", "SEX"]
//!
//! [sampling]
//! replicates = 100
//! base_seed = 2022
//!
//! [synth]
//! method = "cart"
//! replicates = 5
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::Schema;
use crate::equivalence::LocateOptions;
use crate::error::{Error, Result};
use crate::evaluate::Evaluation;
use crate::risk::AttackConfig;
use crate::sampling::{FractionGrid, ReplicatePlan};
use crate::synth::CartParams;
use crate::utility::UtilityConfig;

fn default_replicates() -> usize {
    ReplicatePlan::default().replicates
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    #[serde(default)]
    pub fractions: FractionGrid,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Also write every replicate's raw scores next to the curve.
    #[serde(default)]
    pub store_replicates: bool,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            fractions: FractionGrid::default(),
            replicates: default_replicates(),
            base_seed: 0,
            store_replicates: false,
        }
    }
}

impl SamplingConfig {
    pub fn plan(&self) -> ReplicatePlan {
        ReplicatePlan {
            replicates: self.replicates,
            base_seed: self.base_seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthMethod {
    #[default]
    Cart,
    Independent,
}

fn default_synth_replicates() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    #[serde(default)]
    pub method: SynthMethod,
    /// Synthetic datasets generated per setting; their scores are averaged.
    #[serde(default = "default_synth_replicates")]
    pub replicates: usize,
    /// Rows per synthetic file; the original row count when absent.
    #[serde(default)]
    pub rows: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub cart: CartParams,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            method: SynthMethod::default(),
            replicates: default_synth_replicates(),
            rows: None,
            seed: 0,
            cart: CartParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceConfig {
    #[serde(default)]
    pub isotonic: bool,
}

impl From<EquivalenceConfig> for LocateOptions {
    fn from(c: EquivalenceConfig) -> Self {
        LocateOptions { isotonic: c.isotonic }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationConfig {
    /// Schema file; relative paths resolve against the config file.
    pub schema: PathBuf,
    pub attack: AttackConfig,
    pub utility: UtilityConfig,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub synth: SynthConfig,
    #[serde(default)]
    pub equivalence: EquivalenceConfig,
}

impl EvaluationConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text).map_err(|e| e.context(path.display().to_string()))?;
        if cfg.schema.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.schema = dir.join(&cfg.schema);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn load_schema(&self) -> Result<Schema> {
        Schema::load(&self.schema)
    }

    pub fn evaluation(&self) -> Evaluation {
        Evaluation {
            attack: self.attack.clone(),
            utility: self.utility.clone(),
        }
    }

    /// Override every seed in the file.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.sampling.base_seed = seed;
        self.synth.seed = seed;
        self
    }

    pub fn validate(&self, schema: &Schema) -> Result<()> {
        self.evaluation().validate(schema)?;
        self.sampling.plan().validate()?;
        self.synth.cart.validate()?;
        if self.synth.replicates < 1 {
            return Err(Error::Config("synth: replicates must be >= 1".into()));
        }
        if self.synth.rows == Some(0) {
            return Err(Error::Config("synth: rows must be >= 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema = "s.toml"
[attack]
keys = ["a", "b", "c"]
targets = ["t"]
key_sizes = [3]
[utility]
regressions = []
"#;

    #[test]
    fn defaults_fill_in() {
        let c = EvaluationConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(c.sampling.replicates, 100);
        assert_eq!(c.sampling.fractions.fractions().len(), 22);
        assert_eq!(c.synth.replicates, 5);
        assert_eq!(c.synth.method, SynthMethod::Cart);
        assert_eq!(c.attack.weap_threshold, 1.0);
        assert!(!c.equivalence.isotonic);
    }

    #[test]
    fn round_trip() {
        let c = EvaluationConfig::from_toml_str(MINIMAL).unwrap().with_seed(9);
        let back = EvaluationConfig::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.sampling.base_seed, 9);
    }

    #[test]
    fn zero_fraction_rejected() {
        let text = format!("{MINIMAL}[sampling]\nfractions = [0.0, 0.5]\n");
        assert!(matches!(EvaluationConfig::from_toml_str(&text), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_field_rejected() {
        let text = format!("{MINIMAL}[synth]\nreplicate = 3\n");
        let err = EvaluationConfig::from_toml_str(&text).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn schema_path_resolves_next_to_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, MINIMAL).unwrap();
        let c = EvaluationConfig::load(&path).unwrap();
        assert_eq!(c.schema, dir.path().join("s.toml"));
    }
}
