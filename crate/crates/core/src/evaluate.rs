//! One scoring pipeline applied identically to samples and synthetic data.

use serde::{Deserialize, Serialize};

use crate::data::{MicroTable, Schema};
use crate::error::Result;
use crate::risk::{overall_risk, AttackConfig, RiskScore};
use crate::utility::{utility_report, CioResult, UtilityConfig, UtilityScore};

/// Risk and utility settings; everything needed to score one table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub attack: AttackConfig,
    pub utility: UtilityConfig,
}

/// Scores of one released table against the original.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetScore {
    pub utility: UtilityScore,
    pub risk: RiskScore,
    pub cio: CioResult,
}

impl Evaluation {
    pub fn validate(&self, schema: &Schema) -> Result<()> {
        self.attack.validate(schema)?;
        self.utility.validate(schema)
    }

    pub fn score(&self, original: &MicroTable, other: &MicroTable) -> Result<DatasetScore> {
        let risk = overall_risk(original, other, &self.attack)?;
        let report = utility_report(original, other, &self.utility)?;
        Ok(DatasetScore {
            utility: report.score,
            risk,
            cio: report.cio,
        })
    }
}
