//! Ratio of estimates over univariate and bivariate tabulations.

use std::collections::{BTreeMap, BTreeSet};

use crate::binning::Binning;
use crate::data::MicroTable;
use crate::error::{Error, Result};
use crate::tabulate::{factor_pair, joint_proportions, proportions, FactorPair};

/// `min(a, b) / max(a, b)`; 1 when both are zero, 0 when exactly one is.
pub fn roc_cell(y_orig: f64, y_synth: f64) -> Result<f64> {
    if y_orig < 0.0 || y_synth < 0.0 || y_orig.is_nan() || y_synth.is_nan() {
        return Err(Error::NegativeInput);
    }
    let hi = y_orig.max(y_synth);
    if hi == 0.0 {
        return Ok(1.0);
    }
    Ok(y_orig.min(y_synth) / hi)
}

fn check_tables(original: &MicroTable, synth: &MicroTable) -> Result<()> {
    if original.is_empty() {
        return Err(Error::EmptyTable);
    }
    if synth.is_empty() {
        return Err(Error::EmptySynth);
    }
    Ok(())
}

pub(crate) fn coded(
    original: &MicroTable,
    synth: &MicroTable,
    var: &str,
    binning: &BTreeMap<String, Binning>,
) -> Result<FactorPair> {
    let spec = original.schema().variable(var)?;
    let rule = binning.get(var);
    if !spec.is_categorical() && rule.is_none() {
        return Err(Error::MissingBinning(var.to_string()));
    }
    factor_pair(original, synth, var, rule)
}

/// Mean ROC over the levels observed in either table.
pub(crate) fn roc_factor_pair(p: &FactorPair) -> f64 {
    let po = proportions(&p.original);
    let ps = proportions(&p.other);
    let cells: Vec<f64> = po
        .iter()
        .zip(&ps)
        .filter(|(a, b)| **a > 0.0 || **b > 0.0)
        .map(|(&a, &b)| roc_cell(a, b).expect("proportions are non-negative"))
        .collect();
    cells.iter().sum::<f64>() / cells.len() as f64
}

pub(crate) fn roc_joint(a: &FactorPair, b: &FactorPair) -> f64 {
    let jo = joint_proportions(&a.original, &b.original);
    let js = joint_proportions(&a.other, &b.other);
    let cells: BTreeSet<&(u32, u32)> = jo.keys().chain(js.keys()).collect();
    let total: f64 = cells
        .iter()
        .map(|k| {
            roc_cell(*jo.get(k).unwrap_or(&0.0), *js.get(k).unwrap_or(&0.0))
                .expect("proportions are non-negative")
        })
        .sum();
    total / cells.len() as f64
}

/// Per variable, ROC of category proportions averaged over categories
/// present in at least one table; then the unweighted mean over variables.
/// Numeric variables are discretised with their entry in `binning`.
pub fn roc_univariate(
    original: &MicroTable,
    synth: &MicroTable,
    vars: &[&str],
    binning: &BTreeMap<String, Binning>,
) -> Result<f64> {
    check_tables(original, synth)?;
    if vars.is_empty() {
        return Err(Error::Config("ROC needs at least one variable".into()));
    }
    let mut total = 0.0;
    for v in vars {
        total += roc_factor_pair(&coded(original, synth, v, binning)?);
    }
    Ok(total / vars.len() as f64)
}

/// Every unordered pair of `vars`, in order.
pub fn all_pairs<'a>(vars: &[&'a str]) -> Vec<(&'a str, &'a str)> {
    let mut pairs = Vec::new();
    for (i, a) in vars.iter().enumerate() {
        for b in &vars[i + 1..] {
            pairs.push((*a, *b));
        }
    }
    pairs
}

/// Mean over `pairs` of the ROC of joint-cell proportions, each averaged over
/// cells occurring in at least one table.
pub fn roc_bivariate_pairs(
    original: &MicroTable,
    synth: &MicroTable,
    pairs: &[(&str, &str)],
    binning: &BTreeMap<String, Binning>,
) -> Result<f64> {
    check_tables(original, synth)?;
    if pairs.is_empty() {
        return Err(Error::Config("bivariate ROC needs at least 2 variables".into()));
    }
    let mut cache: BTreeMap<&str, FactorPair> = BTreeMap::new();
    for (a, b) in pairs {
        for v in [*a, *b] {
            if !cache.contains_key(v) {
                cache.insert(v, coded(original, synth, v, binning)?);
            }
        }
    }
    let total: f64 = pairs.iter().map(|(a, b)| roc_joint(&cache[a], &cache[b])).sum();
    Ok(total / pairs.len() as f64)
}

/// Bivariate ROC over all unordered pairs of `vars`.
pub fn roc_bivariate(
    original: &MicroTable,
    synth: &MicroTable,
    vars: &[&str],
    binning: &BTreeMap<String, Binning>,
) -> Result<f64> {
    roc_bivariate_pairs(original, synth, &all_pairs(vars), binning)
}
