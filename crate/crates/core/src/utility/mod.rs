//! Utility of a released table relative to the original: ROC over
//! univariate and bivariate tabulations, and CIO over logistic regression
//! coefficients.

pub mod cio;
pub mod logistic;
pub mod roc;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::binning::Binning;
use crate::data::{MicroTable, Schema};
use crate::error::{Error, Result, ResultExt};

pub use cio::{
    aligned_design, ci_overlap, clamped_mean_overlap, cio_score, model_cio, AlignedDesign, CioResult, CoefficientOverlap,
    ConfidenceInterval, FitFailurePolicy, ModelCio, RegressionSpec, Z_95,
};
pub use logistic::{fit_logistic, log_likelihood, score_and_information, FitOptions, FitResult};
pub use roc::{all_pairs, roc_bivariate, roc_bivariate_pairs, roc_cell, roc_univariate};

fn default_quantile_bins() -> usize {
    10
}

fn default_weights() -> [f64; 3] {
    [1.0, 1.0, 1.0]
}

/// Utility section of the run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityConfig {
    /// Variables tabulated for ROC; all schema variables when absent.
    #[serde(default)]
    pub variables: Option<Vec<String>>,
    /// Restrict bivariate ROC to these pairs; all pairs when absent.
    #[serde(default)]
    pub pairs: Option<Vec<[String; 2]>>,
    /// Explicit binning of numeric variables; others get equal-count
    /// quantile bins.
    #[serde(default)]
    pub binning: BTreeMap<String, Binning>,
    #[serde(default = "default_quantile_bins")]
    pub quantile_bins: usize,
    /// Weights of (univariate ROC, bivariate ROC, CIO) in the overall score.
    #[serde(default = "default_weights")]
    pub weights: [f64; 3],
    pub regressions: Vec<RegressionSpec>,
    #[serde(default)]
    pub fit_failure: FitFailurePolicy,
    #[serde(default = "default_tol")]
    pub fit_tol: f64,
    #[serde(default = "default_max_iter")]
    pub fit_max_iter: usize,
}

fn default_tol() -> f64 {
    FitOptions::default().tol
}

fn default_max_iter() -> usize {
    FitOptions::default().max_iter
}

impl UtilityConfig {
    pub fn new(regressions: Vec<RegressionSpec>) -> Self {
        UtilityConfig {
            variables: None,
            pairs: None,
            binning: BTreeMap::new(),
            quantile_bins: default_quantile_bins(),
            weights: default_weights(),
            regressions,
            fit_failure: FitFailurePolicy::default(),
            fit_tol: default_tol(),
            fit_max_iter: default_max_iter(),
        }
    }

    pub fn fit_options(&self) -> FitOptions {
        FitOptions {
            tol: self.fit_tol,
            max_iter: self.fit_max_iter,
        }
    }

    pub fn roc_variables<'a>(&'a self, schema: &'a Schema) -> Vec<&'a str> {
        match &self.variables {
            Some(v) => v.iter().map(String::as_str).collect(),
            None => schema.names().collect(),
        }
    }

    /// Binning for every numeric ROC variable, filling in quantile defaults.
    pub fn roc_binning(&self, schema: &Schema) -> BTreeMap<String, Binning> {
        let mut map = self.binning.clone();
        for v in &schema.variables {
            if !v.is_categorical() && !map.contains_key(&v.name) {
                map.insert(
                    v.name.clone(),
                    Binning::Quantile {
                        bins: self.quantile_bins,
                    },
                );
            }
        }
        map
    }

    pub fn validate(&self, schema: &Schema) -> Result<()> {
        let vars = self.roc_variables(schema);
        if vars.len() < 2 {
            return Err(Error::Config("utility: need at least 2 ROC variables".into()));
        }
        for v in &vars {
            schema.variable(v)?;
        }
        if let Some(pairs) = &self.pairs {
            if pairs.is_empty() {
                return Err(Error::Config("utility: empty pair list".into()));
            }
            for [a, b] in pairs {
                schema.variable(a)?;
                schema.variable(b)?;
                if a == b {
                    return Err(Error::Config(format!("utility: pair ({a}, {a})")));
                }
            }
        }
        for b in self.binning.values() {
            b.validate().map_err(|e| Error::Config(format!("utility binning: {e}")))?;
        }
        if self.quantile_bins < 1 {
            return Err(Error::Config("utility: quantile_bins must be >= 1".into()));
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0))
            || self.weights.iter().sum::<f64>() <= 0.0
        {
            return Err(Error::Config("utility: weights must be non-negative with a positive sum".into()));
        }
        if self.regressions.is_empty() {
            return Err(Error::Config("utility: at least one regression model is required".into()));
        }
        for r in &self.regressions {
            r.validate(schema)?;
        }
        Ok(())
    }

    /// Weighted mean of the three components.
    pub fn combine(&self, roc_univariate: f64, roc_bivariate: f64, cio: f64) -> f64 {
        let [a, b, c] = self.weights;
        if a == b && b == c {
            return (roc_univariate + roc_bivariate + cio) / 3.0;
        }
        (a * roc_univariate + b * roc_bivariate + c * cio) / (a + b + c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityScore {
    pub roc_univariate: f64,
    pub roc_bivariate: f64,
    pub cio: f64,
    pub overall: f64,
}

/// Utility scores plus the per-coefficient CIO diagnostics behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityReport {
    pub score: UtilityScore,
    pub cio: CioResult,
}

/// Score `synth` against `original` on every utility component.
pub fn utility_report(
    original: &MicroTable,
    synth: &MicroTable,
    cfg: &UtilityConfig,
) -> Result<UtilityReport> {
    if original.is_empty() {
        return Err(Error::EmptyTable);
    }
    if synth.is_empty() {
        return Err(Error::EmptySynth);
    }
    let schema = original.schema();
    cfg.validate(schema)?;
    let vars = cfg.roc_variables(schema);
    let binning = cfg.roc_binning(schema);
    let roc_uni = roc_univariate(original, synth, &vars, &binning).context_with(|| "univariate ROC".into())?;
    let roc_bi = match &cfg.pairs {
        Some(pairs) => {
            let pairs: Vec<(&str, &str)> = pairs.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
            roc_bivariate_pairs(original, synth, &pairs, &binning)
        }
        None => roc_bivariate(original, synth, &vars, &binning),
    }
    .context_with(|| "bivariate ROC".into())?;
    let cio = cio_score(original, synth, &cfg.regressions, cfg.fit_options(), cfg.fit_failure)?;
    Ok(UtilityReport {
        score: UtilityScore {
            roc_univariate: roc_uni,
            roc_bivariate: roc_bi,
            cio: cio.score,
            overall: cfg.combine(roc_uni, roc_bi, cio.score),
        },
        cio,
    })
}

/// Overall utility of `synth`: the (weighted) mean of univariate ROC,
/// bivariate ROC and CIO.
pub fn overall_utility(
    original: &MicroTable,
    synth: &MicroTable,
    cfg: &UtilityConfig,
) -> Result<UtilityScore> {
    utility_report(original, synth, cfg).map(|r| r.score)
}
