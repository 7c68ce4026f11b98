//! CSV files passed between commands: the reference curve, per-file scores
//! and the equivalence report.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::equivalence::{equivalence_of_values, EquivalenceResult, LocateOptions};
use crate::error::{Error, Result};
use crate::evaluate::DatasetScore;
use crate::sampling::{CurvePoint, RUCurve, ReplicateRecord};

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

/// Fail with `MissingColumn` unless every expected column is in the header.
fn require_columns<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let headers = rdr.headers()?;
    match expected.iter().find(|c| !headers.iter().any(|h| h == **c)) {
        Some(c) => Err(Error::MissingColumn(c.to_string())),
        None => Ok(()),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveRow {
    fraction: f64,
    mean_utility: f64,
    sd_utility: f64,
    mean_risk: f64,
    sd_risk: f64,
    n_replicates: usize,
}

const CURVE_COLUMNS: [&str; 6] = ["fraction", "mean_utility", "sd_utility", "mean_risk", "sd_risk", "n_replicates"];

/// One row per grid fraction, then the terminal `(1, 1, 1)` row.
pub fn write_curve<W: Write>(curve: &RUCurve, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for p in curve.with_terminal() {
        w.serialize(CurveRow {
            fraction: p.fraction,
            mean_utility: p.mean_utility,
            sd_utility: p.sd_utility,
            mean_risk: p.mean_risk,
            sd_risk: p.sd_risk,
            n_replicates: p.n_replicates,
        })?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))
}

pub fn save_curve(curve: &RUCurve, path: impl AsRef<Path>) -> Result<()> {
    write_curve(curve, create(path.as_ref())?)
}

pub fn read_curve<R: Read>(reader: R) -> Result<RUCurve> {
    let mut rdr = csv::Reader::from_reader(reader);
    require_columns(&mut rdr, &CURVE_COLUMNS)?;
    let points = rdr
        .deserialize::<CurveRow>()
        .map(|row| {
            row.map(|r| CurvePoint {
                fraction: r.fraction,
                mean_utility: r.mean_utility,
                sd_utility: r.sd_utility,
                mean_risk: r.mean_risk,
                sd_risk: r.sd_risk,
                n_replicates: r.n_replicates,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    RUCurve::from_points(points)
}

pub fn load_curve(path: impl AsRef<Path>) -> Result<RUCurve> {
    let path = path.as_ref();
    read_curve(open(path)?).map_err(|e| e.context(path.display().to_string()))
}

#[derive(Debug, Serialize)]
struct ReplicateRow {
    fraction: f64,
    replicate: usize,
    seed: u64,
    utility: f64,
    risk: f64,
}

pub fn write_replicates<W: Write>(records: &[ReplicateRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(ReplicateRow {
            fraction: r.fraction,
            replicate: r.replicate,
            seed: r.seed,
            utility: r.utility,
            risk: r.risk,
        })?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))
}

pub fn save_replicates(records: &[ReplicateRecord], path: impl AsRef<Path>) -> Result<()> {
    write_replicates(records, create(path.as_ref())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Replicate,
    Mean,
}

/// One line of the scores file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub label: String,
    pub file: String,
    pub kind: RowKind,
    pub roc_univariate: f64,
    pub roc_bivariate: f64,
    pub cio: f64,
    pub overall_utility: f64,
    pub raw_tcap: f64,
    pub baseline: f64,
    pub marginal_tcap: f64,
    pub matched_fraction: f64,
    pub no_match_pairs: f64,
}

const SCORE_COLUMNS: [&str; 12] = [
    "label",
    "file",
    "kind",
    "roc_univariate",
    "roc_bivariate",
    "cio",
    "overall_utility",
    "raw_tcap",
    "baseline",
    "marginal_tcap",
    "matched_fraction",
    "no_match_pairs",
];

impl ScoreRow {
    pub fn replicate(label: &str, file: &str, s: &DatasetScore) -> Self {
        ScoreRow {
            label: label.to_string(),
            file: file.to_string(),
            kind: RowKind::Replicate,
            roc_univariate: s.utility.roc_univariate,
            roc_bivariate: s.utility.roc_bivariate,
            cio: s.utility.cio,
            overall_utility: s.utility.overall,
            raw_tcap: s.risk.raw_tcap,
            baseline: s.risk.baseline,
            marginal_tcap: s.risk.marginal,
            matched_fraction: s.risk.matched_fraction,
            no_match_pairs: s.risk.no_match_pairs as f64,
        }
    }

    /// Column-wise mean of replicate rows sharing a label.
    pub fn mean(label: &str, rows: &[ScoreRow]) -> Self {
        let n = rows.len() as f64;
        let avg = |f: fn(&ScoreRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
        ScoreRow {
            label: label.to_string(),
            file: String::new(),
            kind: RowKind::Mean,
            roc_univariate: avg(|r| r.roc_univariate),
            roc_bivariate: avg(|r| r.roc_bivariate),
            cio: avg(|r| r.cio),
            overall_utility: avg(|r| r.overall_utility),
            raw_tcap: avg(|r| r.raw_tcap),
            baseline: avg(|r| r.baseline),
            marginal_tcap: avg(|r| r.marginal_tcap),
            matched_fraction: avg(|r| r.matched_fraction),
            no_match_pairs: avg(|r| r.no_match_pairs),
        }
    }
}

pub fn write_scores<W: Write>(rows: &[ScoreRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))
}

pub fn save_scores(rows: &[ScoreRow], path: impl AsRef<Path>) -> Result<()> {
    write_scores(rows, create(path.as_ref())?)
}

pub fn read_scores<R: Read>(reader: R) -> Result<Vec<ScoreRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    require_columns(&mut rdr, &SCORE_COLUMNS)?;
    Ok(rdr.deserialize().collect::<Result<Vec<ScoreRow>, _>>()?)
}

pub fn load_scores(path: impl AsRef<Path>) -> Result<Vec<ScoreRow>> {
    let path = path.as_ref();
    read_scores(open(path)?).map_err(|e| e.context(path.display().to_string()))
}

/// `(utility, risk)` per label in first-appearance order. Replicate rows are
/// used when a label has any; otherwise its mean rows.
pub fn group_scores(rows: &[ScoreRow]) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut labels: Vec<&str> = Vec::new();
    for r in rows {
        if !labels.contains(&r.label.as_str()) {
            labels.push(&r.label);
        }
    }
    labels
        .into_iter()
        .map(|label| {
            let of = |kind| -> Vec<(f64, f64)> {
                rows.iter()
                    .filter(|r| r.label == label && r.kind == kind)
                    .map(|r| (r.overall_utility, r.marginal_tcap))
                    .collect()
            };
            let reps = of(RowKind::Replicate);
            (label.to_string(), if reps.is_empty() { of(RowKind::Mean) } else { reps })
        })
        .collect()
}

/// One report line per synthesizer label.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceLine {
    pub label: String,
    pub result: EquivalenceResult,
}

pub fn equivalence_report(rows: &[ScoreRow], curve: &RUCurve, opts: LocateOptions) -> Result<Vec<EquivalenceLine>> {
    if rows.is_empty() {
        return Err(Error::EmptyScores);
    }
    group_scores(rows)
        .into_iter()
        .map(|(label, values)| {
            let result = equivalence_of_values(&values, curve, opts).map_err(|e| e.context(format!("label={label}")))?;
            Ok(EquivalenceLine { label, result })
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct ReportRow<'a> {
    synthesizer: &'a str,
    overall_utility: String,
    risk_marginal_tcap: String,
    sample_equiv_utility: String,
    sample_equiv_risk: String,
}

/// Scores rounded to three decimals; intervals as `10% - 20%`, `<0.1%` or
/// `exact 100%`.
pub fn write_equivalence<W: Write>(lines: &[EquivalenceLine], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for l in lines {
        w.serialize(ReportRow {
            synthesizer: &l.label,
            overall_utility: format!("{:.3}", l.result.mean_utility),
            risk_marginal_tcap: format!("{:.3}", l.result.mean_risk),
            sample_equiv_utility: l.result.utility_interval.to_string(),
            sample_equiv_risk: l.result.risk_interval.to_string(),
        })?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))
}

pub fn save_equivalence(lines: &[EquivalenceLine], path: impl AsRef<Path>) -> Result<()> {
    write_equivalence(lines, create(path.as_ref())?)
}
