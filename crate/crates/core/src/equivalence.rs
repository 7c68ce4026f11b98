//! Placing a synthetic dataset's mean utility and risk on the sample curve.

use std::fmt;

use crate::error::{Error, Result};
use crate::risk::RiskScore;
use crate::sampling::{CurvePoint, RUCurve};
use crate::utility::UtilityScore;

/// Tolerance for reporting a value as lying exactly on a curve point.
pub const EXACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Utility,
    Risk,
}

impl Axis {
    fn of(self, p: &CurvePoint) -> f64 {
        match self {
            Axis::Utility => p.mean_utility,
            Axis::Risk => p.mean_risk,
        }
    }
}

/// Where a value falls among the grid fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FractionInterval {
    /// Equal to the mean at this fraction.
    Exact(f64),
    /// Below every mean on the curve; `upper` is the smallest fraction.
    BelowMin { upper: f64 },
    /// Between adjacent fractions, `lower < upper`.
    Between { lower: f64, upper: f64 },
}

impl FractionInterval {
    pub fn lower(&self) -> Option<f64> {
        match *self {
            FractionInterval::Exact(f) => Some(f),
            FractionInterval::BelowMin { .. } => None,
            FractionInterval::Between { lower, .. } => Some(lower),
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            FractionInterval::Exact(f) => f,
            FractionInterval::BelowMin { upper } | FractionInterval::Between { upper, .. } => upper,
        }
    }

    pub fn exact(&self) -> Option<f64> {
        match *self {
            FractionInterval::Exact(f) => Some(f),
            _ => None,
        }
    }
}

/// Fraction as a percentage with no trailing zeros: 0.0025 -> "0.25%".
pub fn format_percent(fraction: f64) -> String {
    let pct = (fraction * 100.0 * 1e9).round() / 1e9;
    format!("{pct}%")
}

impl fmt::Display for FractionInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FractionInterval::Exact(x) => write!(f, "exact {}", format_percent(x)),
            FractionInterval::BelowMin { upper } => write!(f, "<{}", format_percent(upper)),
            FractionInterval::Between { lower, upper } => {
                write!(f, "{} - {}", format_percent(lower), format_percent(upper))
            }
        }
    }
}

/// Pool-adjacent-violators fit of a non-decreasing sequence, equal weights.
pub fn isotonic(values: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (b, nb) = blocks[blocks.len() - 1];
            let (a, na) = blocks[blocks.len() - 2];
            if a <= b {
                break;
            }
            blocks.pop();
            let n = na + nb;
            *blocks.last_mut().unwrap() = ((a * na as f64 + b * nb as f64) / n as f64, n);
        }
    }
    blocks.into_iter().flat_map(|(v, n)| std::iter::repeat_n(v, n)).collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LocateOptions {
    /// Replace the axis means by their isotonic fit before scanning.
    pub isotonic: bool,
}

fn axis_series(curve: &RUCurve, axis: Axis, opts: LocateOptions) -> Result<(Vec<f64>, Vec<f64>)> {
    if curve.points.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let mut points = curve.with_terminal();
    points.sort_by(|a, b| a.fraction.total_cmp(&b.fraction));
    let fractions: Vec<f64> = points.iter().map(|p| p.fraction).collect();
    let mut means: Vec<f64> = points.iter().map(|p| axis.of(p)).collect();
    if opts.isotonic {
        means = isotonic(&means);
    }
    Ok((fractions, means))
}

/// Scan the curve (terminal point included) in increasing fraction and
/// return the first adjacent pair whose means bracket `value`.
pub fn locate_on_curve(value: f64, curve: &RUCurve, axis: Axis) -> Result<FractionInterval> {
    locate_with(value, curve, axis, LocateOptions::default())
}

pub fn locate_with(value: f64, curve: &RUCurve, axis: Axis, opts: LocateOptions) -> Result<FractionInterval> {
    let (fractions, means) = axis_series(curve, axis, opts)?;
    let close = |m: f64| (m - value).abs() <= EXACT_TOL;
    for i in 0..means.len() {
        if close(means[i]) {
            return Ok(FractionInterval::Exact(fractions[i]));
        }
        if i + 1 < means.len() && means[i] <= value && value <= means[i + 1] {
            if close(means[i + 1]) {
                return Ok(FractionInterval::Exact(fractions[i + 1]));
            }
            return Ok(FractionInterval::Between {
                lower: fractions[i],
                upper: fractions[i + 1],
            });
        }
    }
    let min = means.iter().copied().fold(f64::INFINITY, f64::min);
    if value < min {
        return Ok(FractionInterval::BelowMin { upper: fractions[0] });
    }
    // Above every mean: between the last grid fraction and the whole file.
    let last_grid = fractions.iter().rev().copied().find(|&f| f < 1.0);
    Ok(match last_grid {
        Some(lower) => FractionInterval::Between { lower, upper: 1.0 },
        None => FractionInterval::Exact(1.0),
    })
}

/// Linear interpolation of the fraction inside a bracketing interval.
/// Diagnostic only; reports use the interval itself.
pub fn interpolate(value: f64, interval: &FractionInterval, curve: &RUCurve, axis: Axis) -> Option<f64> {
    let FractionInterval::Between { lower, upper } = *interval else {
        return interval.exact();
    };
    let pts = curve.with_terminal();
    let at = |f: f64| pts.iter().find(|p| p.fraction == f).map(|p| axis.of(p));
    let (ml, mu) = (at(lower)?, at(upper)?);
    if mu == ml {
        return Some(lower);
    }
    Some(lower + (value - ml) / (mu - ml) * (upper - lower))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceResult {
    pub mean_utility: f64,
    pub mean_risk: f64,
    pub utility_interval: FractionInterval,
    pub risk_interval: FractionInterval,
    pub utility_interpolated: Option<f64>,
    pub risk_interpolated: Option<f64>,
}

/// Average the synthetic replicates' overall utility and marginal risk and
/// locate both means on the curve.
pub fn equivalence(scores: &[(UtilityScore, RiskScore)], curve: &RUCurve) -> Result<EquivalenceResult> {
    let pairs: Vec<(f64, f64)> = scores.iter().map(|(u, r)| (u.overall, r.marginal)).collect();
    equivalence_of_values(&pairs, curve, LocateOptions::default())
}

/// As [`equivalence`] on plain `(utility, risk)` pairs.
pub fn equivalence_of_values(
    scores: &[(f64, f64)],
    curve: &RUCurve,
    opts: LocateOptions,
) -> Result<EquivalenceResult> {
    if scores.is_empty() {
        return Err(Error::EmptyScores);
    }
    let n = scores.len() as f64;
    let mean_utility = scores.iter().map(|s| s.0).sum::<f64>() / n;
    let mean_risk = scores.iter().map(|s| s.1).sum::<f64>() / n;
    let utility_interval = locate_with(mean_utility, curve, Axis::Utility, opts)?;
    let risk_interval = locate_with(mean_risk, curve, Axis::Risk, opts)?;
    let utility_interpolated = interpolate(mean_utility, &utility_interval, curve, Axis::Utility);
    let risk_interpolated = interpolate(mean_risk, &risk_interval, curve, Axis::Risk);
    log::debug!(
        "utility {mean_utility} -> {utility_interval} (~{utility_interpolated:?}); risk {mean_risk} -> {risk_interval} (~{risk_interpolated:?})"
    );
    Ok(EquivalenceResult {
        mean_utility,
        mean_risk,
        utility_interval,
        risk_interval,
        utility_interpolated,
        risk_interpolated,
    })
}
