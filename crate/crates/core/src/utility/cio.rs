//! Confidence interval overlap of logistic regression coefficients.

use std::collections::HashSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::data::{Column, MicroTable};
use crate::error::{Error, Result};
use crate::tabulate::factor_pair;

use super::logistic::{fit_logistic, FitOptions, FitResult};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.95996;

/// A logistic model: binary target built from a category set, plus
/// predictors. Categorical predictors are dummy coded against their most
/// frequent original level; numeric predictors enter as single columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionSpec {
    pub name: String,
    pub target: String,
    /// Target labels coded as 1; everything else (Missing included) is 0.
    pub positive: Vec<String>,
    pub predictors: Vec<String>,
}

impl RegressionSpec {
    pub fn validate(&self, schema: &crate::data::Schema) -> Result<()> {
        let spec = schema.variable(&self.target)?;
        if !spec.is_categorical() {
            return Err(Error::NotCategorical(self.target.clone()));
        }
        if self.positive.is_empty() {
            return Err(Error::Config(format!("model `{}`: empty positive set", self.name)));
        }
        for label in &self.positive {
            if spec.category_index(label).is_none() {
                return Err(Error::Config(format!(
                    "model `{}`: `{label}` is not a category of `{}`",
                    self.name, self.target
                )));
            }
        }
        if self.predictors.is_empty() {
            return Err(Error::Config(format!("model `{}` has no predictors", self.name)));
        }
        for (i, p) in self.predictors.iter().enumerate() {
            schema.variable(p)?;
            if *p == self.target {
                return Err(Error::Config(format!(
                    "model `{}`: target `{p}` listed as a predictor",
                    self.name
                )));
            }
            if self.predictors[..i].contains(p) {
                return Err(Error::Config(format!("model `{}`: duplicate predictor `{p}`", self.name)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ConfidenceInterval {
    pub fn new(lower: f64, upper: f64) -> Self {
        debug_assert!(lower <= upper);
        ConfidenceInterval { lower, upper }
    }

    pub fn wald(estimate: f64, se: f64) -> Self {
        ConfidenceInterval::new(estimate - Z_95 * se, estimate + Z_95 * se)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Average of the overlap length relative to each interval's width. Equals 1
/// for identical intervals and is negative when they are disjoint.
pub fn ci_overlap(orig: ConfidenceInterval, synth: ConfidenceInterval) -> Result<f64> {
    let (wo, ws) = (orig.width(), synth.width());
    if !(wo > 0.0 && ws > 0.0) {
        return Err(Error::ZeroWidthInterval);
    }
    let overlap = orig.upper.min(synth.upper) - orig.lower.max(synth.lower);
    Ok(0.5 * (overlap / wo + overlap / ws))
}

/// What to do when the comparison table's fit fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitFailurePolicy {
    /// Propagate the error; no score is produced.
    #[default]
    Error,
    /// Score the model as zero overlap and record the failure.
    ScoreZero,
}

/// Design matrices for one model on both tables with identical columns.
#[derive(Debug, Clone)]
pub struct AlignedDesign {
    pub terms: Vec<String>,
    pub original: DMatrix<f64>,
    pub synth: DMatrix<f64>,
    pub y_original: Vec<f64>,
    pub y_synth: Vec<f64>,
    /// Level columns removed because they were constant zero in a table.
    pub dropped: Vec<String>,
}

fn binary_target(table: &MicroTable, spec: &RegressionSpec) -> Result<Vec<f64>> {
    let idx = table.schema().index_of(&spec.target)?;
    let var = &table.schema().variables[idx];
    let positive: HashSet<u32> = spec
        .positive
        .iter()
        .filter_map(|l| var.category_index(l))
        .collect();
    match table.column(idx) {
        Column::Categorical(cells) => Ok(cells
            .iter()
            .map(|c| match c {
                Some(c) if positive.contains(c) => 1.0,
                _ => 0.0,
            })
            .collect()),
        Column::Numeric(_) => Err(Error::NotCategorical(spec.target.clone())),
    }
}

/// Build aligned designs. Categorical levels use the union of both tables'
/// labels; a level column that is all zero in either table is dropped from
/// both. Numeric predictors with Missing cells get the original's observed
/// mean imputed plus a missing-indicator column.
pub fn aligned_design(
    original: &MicroTable,
    synth: &MicroTable,
    spec: &RegressionSpec,
) -> Result<AlignedDesign> {
    spec.validate(original.schema())?;
    let (no, ns) = (original.n_rows(), synth.n_rows());
    let mut b = DesignBuilder {
        model: &spec.name,
        terms: vec!["(Intercept)".to_string()],
        cols_o: vec![vec![1.0; no]],
        cols_s: vec![vec![1.0; ns]],
        dropped: Vec::new(),
    };

    for pred in &spec.predictors {
        let oi = original.schema().index_of(pred)?;
        match original.column(oi) {
            Column::Categorical(_) => {
                let pair = factor_pair(original, synth, pred, None)?;
                let counts = pair.original.counts();
                let reference = counts
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                    .map(|(i, _)| i as u32)
                    .unwrap_or(0);
                let labels = level_labels(original, synth, pred, pair.levels);
                for level in 0..pair.levels {
                    if level == reference {
                        continue;
                    }
                    let co = pair.original.codes.iter().map(|&c| (c == level) as u8 as f64).collect();
                    let cs = pair.other.codes.iter().map(|&c| (c == level) as u8 as f64).collect();
                    b.push_level(format!("{pred}={}", labels[level as usize]), co, cs);
                }
            }
            Column::Numeric(ocells) => {
                let si = synth.schema().index_of(pred)?;
                let scells = match synth.column(si) {
                    Column::Numeric(c) => c,
                    Column::Categorical(_) => {
                        return Err(Error::InvalidSchema(format!(
                            "`{pred}` is numeric in the original but not in the comparison table"
                        )))
                    }
                };
                let observed: Vec<f64> = ocells.iter().flatten().copied().collect();
                let fill = if observed.is_empty() {
                    0.0
                } else {
                    observed.iter().sum::<f64>() / observed.len() as f64
                };
                let any_missing = ocells.iter().chain(scells).any(Option::is_none);
                b.push(
                    pred.clone(),
                    ocells.iter().map(|c| c.unwrap_or(fill)).collect(),
                    scells.iter().map(|c| c.unwrap_or(fill)).collect(),
                );
                if any_missing {
                    let co = ocells.iter().map(|c| c.is_none() as u8 as f64).collect();
                    let cs = scells.iter().map(|c| c.is_none() as u8 as f64).collect();
                    b.push_level(format!("{pred}=<missing>"), co, cs);
                }
            }
        }
    }

    let to_matrix = |cols: &[Vec<f64>], n: usize| DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
    Ok(AlignedDesign {
        original: to_matrix(&b.cols_o, no),
        synth: to_matrix(&b.cols_s, ns),
        y_original: binary_target(original, spec)?,
        y_synth: binary_target(synth, spec)?,
        terms: b.terms,
        dropped: b.dropped,
    })
}

struct DesignBuilder<'a> {
    model: &'a str,
    terms: Vec<String>,
    cols_o: Vec<Vec<f64>>,
    cols_s: Vec<Vec<f64>>,
    dropped: Vec<String>,
}

impl DesignBuilder<'_> {
    fn push(&mut self, name: String, co: Vec<f64>, cs: Vec<f64>) {
        self.terms.push(name);
        self.cols_o.push(co);
        self.cols_s.push(cs);
    }

    /// Indicator column, kept only if it is non-zero somewhere in both tables.
    /// Levels absent from both are not terms at all and are skipped quietly.
    fn push_level(&mut self, name: String, co: Vec<f64>, cs: Vec<f64>) {
        let (zo, zs) = (co.iter().all(|&v| v == 0.0), cs.iter().all(|&v| v == 0.0));
        if zo && zs {
            return;
        }
        if zo || zs {
            log::debug!("model `{}`: dropping term {name} (absent from one table)", self.model);
            self.dropped.push(name);
        } else {
            self.push(name, co, cs);
        }
    }
}

fn level_labels(original: &MicroTable, synth: &MicroTable, var: &str, levels: u32) -> Vec<String> {
    let ocats = &original.schema().variable(var).expect("checked").categories;
    let scats = &synth.schema().variable(var).expect("checked").categories;
    let mut labels: Vec<String> = ocats.clone();
    for c in scats {
        if !labels.contains(c) {
            labels.push(c.clone());
        }
    }
    labels.push("<missing>".to_string());
    debug_assert_eq!(labels.len(), levels as usize);
    labels
}

/// Per-coefficient comparison; `overlap` is the raw (possibly negative)
/// value before clamping.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientOverlap {
    pub term: String,
    pub original: ConfidenceInterval,
    pub synth: ConfidenceInterval,
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelCio {
    pub name: String,
    /// Mean of `max(0, overlap)` over coefficients.
    pub score: f64,
    pub coefficients: Vec<CoefficientOverlap>,
    pub dropped_terms: Vec<String>,
    /// Set when the comparison fit failed under [`FitFailurePolicy::ScoreZero`].
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CioResult {
    pub score: f64,
    pub models: Vec<ModelCio>,
}

fn compare_fits(name: &str, terms: &[String], o: &FitResult, s: &FitResult) -> Result<ModelCio> {
    let mut coefficients = Vec::with_capacity(terms.len());
    for (j, term) in terms.iter().enumerate() {
        let ci_o = ConfidenceInterval::wald(o.coefficients[j], o.standard_errors[j]);
        let ci_s = ConfidenceInterval::wald(s.coefficients[j], s.standard_errors[j]);
        let overlap = ci_overlap(ci_o, ci_s)?;
        coefficients.push(CoefficientOverlap {
            term: term.clone(),
            original: ci_o,
            synth: ci_s,
            overlap,
        });
    }
    let overlaps: Vec<f64> = coefficients.iter().map(|c| c.overlap).collect();
    let score = clamped_mean_overlap(&overlaps);
    Ok(ModelCio {
        name: name.to_string(),
        score,
        coefficients,
        dropped_terms: Vec::new(),
        failure: None,
    })
}

/// Model score from raw coefficient overlaps: negative overlaps (disjoint
/// intervals) count as zero, then the mean is taken.
pub fn clamped_mean_overlap(overlaps: &[f64]) -> f64 {
    if overlaps.is_empty() {
        return 0.0;
    }
    overlaps.iter().map(|o| o.max(0.0)).sum::<f64>() / overlaps.len() as f64
}

/// CIO of one model. The original fit must succeed; a failing comparison
/// fit is handled per `policy`.
pub fn model_cio(
    original: &MicroTable,
    synth: &MicroTable,
    spec: &RegressionSpec,
    opts: FitOptions,
    policy: FitFailurePolicy,
) -> Result<ModelCio> {
    if synth.is_empty() {
        return Err(Error::EmptySynth);
    }
    let design = aligned_design(original, synth, spec)?;
    let fit_o = fit_logistic(&design.original, &design.y_original, opts)
        .map_err(|e| e.context(format!("model {} on original", spec.name)))?;
    let fit_s = match fit_logistic(&design.synth, &design.y_synth, opts) {
        Ok(f) => f,
        Err(e) => match policy {
            FitFailurePolicy::Error => {
                return Err(e.context(format!("model {} on synthetic", spec.name)))
            }
            FitFailurePolicy::ScoreZero => {
                log::warn!("model `{}`: comparison fit failed ({e}); scoring 0", spec.name);
                return Ok(ModelCio {
                    name: spec.name.clone(),
                    score: 0.0,
                    coefficients: Vec::new(),
                    dropped_terms: design.dropped,
                    failure: Some(e.to_string()),
                });
            }
        },
    };
    let mut m = compare_fits(&spec.name, &design.terms, &fit_o, &fit_s)?;
    m.dropped_terms = design.dropped;
    Ok(m)
}

/// Mean over models of the clamped mean coefficient overlap.
pub fn cio_score(
    original: &MicroTable,
    synth: &MicroTable,
    specs: &[RegressionSpec],
    opts: FitOptions,
    policy: FitFailurePolicy,
) -> Result<CioResult> {
    if specs.is_empty() {
        return Err(Error::Config("CIO needs at least one regression model".into()));
    }
    let models = specs
        .iter()
        .map(|s| model_cio(original, synth, s, opts, policy))
        .collect::<Result<Vec<_>>>()?;
    let score = models.iter().map(|m| m.score).sum::<f64>() / models.len() as f64;
    Ok(CioResult { score, models })
}
