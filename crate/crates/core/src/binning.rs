//! Discretisation of numeric columns for tabulation and key matching.

use serde::{Deserialize, Serialize};

use crate::data::Factor;

/// How a numeric variable is cut into bins.
///
/// Cut points are always derived from the original table (plus, for fixed
/// widths, the range of every table being compared) and then applied
/// identically to every table so both sides share one code space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Binning {
    /// Fixed-width bins `[origin + k*width, origin + (k+1)*width)`.
    Width {
        width: f64,
        #[serde(default)]
        origin: f64,
    },
    /// Explicit ascending cut points.
    Edges { edges: Vec<f64> },
    /// Equal-count bins from the original table's quantiles.
    Quantile { bins: usize },
}

impl Binning {
    pub fn validate(&self) -> Result<(), String> {
        match self {
            Binning::Width { width, origin } => {
                if !(width.is_finite() && *width > 0.0 && origin.is_finite()) {
                    return Err(format!("bin width must be positive and finite, got {width}"));
                }
            }
            Binning::Edges { edges } => {
                if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
                    return Err("bin edges must be finite and strictly increasing".into());
                }
            }
            Binning::Quantile { bins } => {
                if *bins < 1 {
                    return Err("quantile binning needs at least one bin".into());
                }
            }
        }
        Ok(())
    }

    /// Cut points for this rule given the original column and any other
    /// columns that will be discretised with the same points.
    pub fn cutpoints(&self, original: &[Option<f64>], others: &[&[Option<f64>]]) -> Vec<f64> {
        match self {
            Binning::Edges { edges } => edges.clone(),
            Binning::Quantile { bins } => quantile_cutpoints(original, *bins),
            Binning::Width { width, origin } => {
                let values = original
                    .iter()
                    .chain(others.iter().flat_map(|c| c.iter()))
                    .flatten();
                let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                    (lo.min(x), hi.max(x))
                });
                if lo > hi {
                    return Vec::new();
                }
                let first = ((lo - origin) / width).floor() as i64 + 1;
                let last = ((hi - origin) / width).floor() as i64;
                (first..=last).map(|k| origin + k as f64 * width).collect()
            }
        }
    }
}

/// Distinct values at the `k/bins` order statistics of the non-missing
/// values, `k = 1..bins`.
pub fn quantile_cutpoints(values: &[Option<f64>], bins: usize) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.iter().flatten().copied().collect();
    if sorted.is_empty() || bins <= 1 {
        return Vec::new();
    }
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut cuts: Vec<f64> = (1..bins)
        .map(|k| sorted[(k * n / bins).min(n - 1)])
        .filter(|&c| c > sorted[0])
        .collect();
    cuts.dedup();
    cuts
}

/// Bin index of every cell: the number of cut points `<= x`, with Missing
/// as the final level.
pub fn discretize(cells: &[Option<f64>], cutpoints: &[f64]) -> Factor {
    let missing = cutpoints.len() as u32 + 1;
    Factor {
        codes: cells
            .iter()
            .map(|c| match c {
                Some(x) => cutpoints.partition_point(|&cut| cut <= *x) as u32,
                None => missing,
            })
            .collect(),
        levels: missing + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_bins_cover_union_range() {
        let b = Binning::Width {
            width: 5.0,
            origin: 0.0,
        };
        let orig = [Some(0.0), Some(12.0)];
        let other = [Some(21.0)];
        let cuts = b.cutpoints(&orig, &[&other]);
        assert_eq!(cuts, vec![5.0, 10.0, 15.0, 20.0]);
        let f = discretize(&[Some(0.0), Some(4.99), Some(5.0), Some(21.0), None], &cuts);
        assert_eq!(f.codes, vec![0, 0, 1, 4, 5]);
        assert_eq!(f.levels, 6);
    }

    #[test]
    fn quantile_bins_are_equal_count() {
        let vals: Vec<Option<f64>> = (0..100).map(|i| Some(i as f64)).collect();
        let cuts = quantile_cutpoints(&vals, 10);
        assert_eq!(cuts.len(), 9);
        let f = discretize(&vals, &cuts);
        let counts = f.counts();
        assert!(counts[..10].iter().all(|&c| c == 10));
        assert_eq!(counts[10], 0);
    }

    #[test]
    fn quantile_bins_collapse_ties() {
        let vals: Vec<Option<f64>> = (0..50).map(|i| Some((i % 2) as f64)).collect();
        assert_eq!(quantile_cutpoints(&vals, 10), vec![1.0]);
    }

    #[test]
    fn validation() {
        assert!(Binning::Width { width: 0.0, origin: 0.0 }.validate().is_err());
        assert!(Binning::Edges { edges: vec![2.0, 1.0] }.validate().is_err());
        assert!(Binning::Quantile { bins: 0 }.validate().is_err());
        assert!(Binning::Quantile { bins: 10 }.validate().is_ok());
    }
}
