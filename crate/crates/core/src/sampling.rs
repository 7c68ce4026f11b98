//! Simple random samples of the original at a grid of fractions, and the
//! replicate-averaged risk/utility reference curve they trace.

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::MicroTable;
use crate::error::{Error, Result};
use crate::evaluate::{DatasetScore, Evaluation};
use crate::seed;

/// Increasing sample fractions in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FractionGrid(Vec<f64>);

pub const DEFAULT_FRACTIONS: [f64; 22] = [
    0.001, 0.0025, 0.005, 0.01, 0.02, 0.03, 0.04, 0.05, 0.10, 0.20, 0.30, 0.40, 0.50, 0.60, 0.70,
    0.80, 0.90, 0.95, 0.96, 0.97, 0.98, 0.99,
];

impl FractionGrid {
    pub fn new(fractions: Vec<f64>) -> Result<Self> {
        if fractions.is_empty() {
            return Err(Error::Config("fraction grid is empty".into()));
        }
        if let Some(f) = fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
            return Err(Error::Config(format!("fraction {f} outside (0, 1]")));
        }
        if fractions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("fractions must be strictly increasing".into()));
        }
        Ok(FractionGrid(fractions))
    }

    pub fn fractions(&self) -> &[f64] {
        &self.0
    }
}

impl Default for FractionGrid {
    fn default() -> Self {
        FractionGrid(DEFAULT_FRACTIONS.to_vec())
    }
}

impl TryFrom<Vec<f64>> for FractionGrid {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        FractionGrid::new(v)
    }
}

impl From<FractionGrid> for Vec<f64> {
    fn from(g: FractionGrid) -> Self {
        g.0
    }
}

fn default_replicates() -> usize {
    100
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicatePlan {
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub base_seed: u64,
}

impl Default for ReplicatePlan {
    fn default() -> Self {
        ReplicatePlan {
            replicates: default_replicates(),
            base_seed: 0,
        }
    }
}

impl ReplicatePlan {
    pub fn validate(&self) -> Result<()> {
        if self.replicates < 1 {
            return Err(Error::Config("replicates must be >= 1".into()));
        }
        Ok(())
    }
}

/// Seeds of every replicate at `fraction`:
/// `derive(derive(base_seed, fraction.to_bits()), replicate_index)` where
/// `derive` is a SplitMix64-based mix (see [`seed::derive`]).
pub fn replicate_seeds(plan: &ReplicatePlan, fraction: f64) -> Vec<u64> {
    let per_fraction = seed::derive(plan.base_seed, fraction.to_bits());
    (0..plan.replicates as u64)
        .map(|i| seed::derive(per_fraction, i))
        .collect()
}

/// Rows drawn by a sample of `fraction`: `round(fraction * n)`, at least 1.
pub fn sample_size(n_rows: usize, fraction: f64) -> usize {
    ((fraction * n_rows as f64).round() as usize).clamp(1, n_rows)
}

/// Simple random sample without replacement, rows in draw order.
pub fn draw_sample(t: &MicroTable, fraction: f64, seed: u64) -> Result<MicroTable> {
    if t.is_empty() {
        return Err(Error::EmptyTable);
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Config(format!("fraction {fraction} outside (0, 1]")));
    }
    let n = t.n_rows();
    let k = sample_size(n, fraction);
    let rows = index::sample(&mut seed::rng(seed), n, k).into_vec();
    Ok(t.take_rows(&rows))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub fraction: f64,
    pub mean_utility: f64,
    pub sd_utility: f64,
    pub mean_risk: f64,
    pub sd_risk: f64,
    pub n_replicates: usize,
}

impl CurvePoint {
    /// The whole original: utility and marginal risk are both 1.
    pub const TERMINAL: CurvePoint = CurvePoint {
        fraction: 1.0,
        mean_utility: 1.0,
        sd_utility: 0.0,
        mean_risk: 1.0,
        sd_risk: 0.0,
        n_replicates: 0,
    };
}

/// Raw scores of one replicate, kept when auditing is requested.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateRecord {
    pub fraction: f64,
    pub replicate: usize,
    pub seed: u64,
    pub utility: f64,
    pub risk: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RUCurve {
    /// One point per grid fraction, ascending.
    pub points: Vec<CurvePoint>,
    pub replicates: Option<Vec<ReplicateRecord>>,
}

impl RUCurve {
    pub fn from_points(mut points: Vec<CurvePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCurve);
        }
        points.sort_by(|a, b| a.fraction.total_cmp(&b.fraction));
        Ok(RUCurve {
            points,
            replicates: None,
        })
    }

    /// Grid points followed by the terminal `(1, 1, 1)` point unless the grid
    /// already ends at 1.
    pub fn with_terminal(&self) -> Vec<CurvePoint> {
        let mut pts = self.points.clone();
        if pts.last().is_none_or(|p| p.fraction < 1.0) {
            pts.push(CurvePoint::TERMINAL);
        }
        pts
    }
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CurveOptions {
    pub store_replicates: bool,
}

/// Score every replicate sample of every grid fraction against the full
/// original and summarise per fraction. Replicates run in parallel on the
/// current rayon pool; results are reduced in (fraction, replicate) order.
pub fn build_curve(
    t: &MicroTable,
    grid: &FractionGrid,
    plan: &ReplicatePlan,
    eval: &Evaluation,
    opts: CurveOptions,
) -> Result<RUCurve> {
    if t.is_empty() {
        return Err(Error::EmptyTable);
    }
    plan.validate()?;
    eval.validate(t.schema())?;
    let jobs: Vec<(usize, f64, usize, u64)> = grid
        .fractions()
        .iter()
        .enumerate()
        .flat_map(|(fi, &f)| {
            replicate_seeds(plan, f)
                .into_iter()
                .enumerate()
                .map(move |(r, s)| (fi, f, r, s))
        })
        .collect();
    let scores: Vec<DatasetScore> = jobs
        .par_iter()
        .map(|&(_, f, r, s)| {
            draw_sample(t, f, s)
                .and_then(|sample| eval.score(t, &sample))
                .map_err(|e| e.context(format!("fraction={f} replicate={r}")))
        })
        .collect::<Result<_>>()?;

    let r = plan.replicates;
    let points = grid
        .fractions()
        .iter()
        .enumerate()
        .map(|(fi, &fraction)| {
            let chunk = &scores[fi * r..(fi + 1) * r];
            let u: Vec<f64> = chunk.iter().map(|s| s.utility.overall).collect();
            let k: Vec<f64> = chunk.iter().map(|s| s.risk.marginal).collect();
            let (mean_utility, sd_utility) = mean_sd(&u);
            let (mean_risk, sd_risk) = mean_sd(&k);
            CurvePoint {
                fraction,
                mean_utility,
                sd_utility,
                mean_risk,
                sd_risk,
                n_replicates: r,
            }
        })
        .collect();
    let replicates = opts.store_replicates.then(|| {
        jobs.iter()
            .zip(&scores)
            .map(|(&(_, fraction, replicate, seed), s)| ReplicateRecord {
                fraction,
                replicate,
                seed,
                utility: s.utility.overall,
                risk: s.risk.marginal,
            })
            .collect()
    });
    Ok(RUCurve { points, replicates })
}
