//! Shared code space for comparing one variable across two tables.

use std::collections::BTreeMap;
use std::collections::HashMap;

use crate::binning::{discretize, Binning};
use crate::data::{Column, Factor, MicroTable};
use crate::error::{Error, Result};

/// One variable of the original and the comparison table coded into the
/// same levels. Categories are matched by label; labels only present in the
/// comparison table get codes after the original's dictionary, and Missing is
/// the final level.
#[derive(Debug, Clone)]
pub struct FactorPair {
    pub original: Factor,
    pub other: Factor,
    pub levels: u32,
}

pub fn factor_pair(
    original: &MicroTable,
    other: &MicroTable,
    var: &str,
    binning: Option<&Binning>,
) -> Result<FactorPair> {
    let oi = original.schema().index_of(var)?;
    let si = other.schema().index_of(var)?;
    match (original.column(oi), other.column(si)) {
        (Column::Categorical(oc), Column::Categorical(sc)) => {
            let ocats = &original.schema().variables[oi].categories;
            let scats = &other.schema().variables[si].categories;
            let mut union: HashMap<&str, u32> = ocats
                .iter()
                .enumerate()
                .map(|(i, c)| (c.as_str(), i as u32))
                .collect();
            let mut next = ocats.len() as u32;
            let remap: Vec<u32> = scats
                .iter()
                .map(|c| {
                    *union.entry(c.as_str()).or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect();
            let missing = next;
            let levels = next + 1;
            let original = Factor {
                codes: oc.iter().map(|c| c.unwrap_or(missing)).collect(),
                levels,
            };
            let other = Factor {
                codes: sc
                    .iter()
                    .map(|c| c.map_or(missing, |c| remap[c as usize]))
                    .collect(),
                levels,
            };
            Ok(FactorPair {
                original,
                other,
                levels,
            })
        }
        (Column::Numeric(oc), Column::Numeric(sc)) => {
            let binning = binning.ok_or_else(|| Error::NotCategorical(var.to_string()))?;
            let cuts = binning.cutpoints(oc, &[sc]);
            let original = discretize(oc, &cuts);
            let other = discretize(sc, &cuts);
            let levels = original.levels;
            Ok(FactorPair {
                original,
                other,
                levels,
            })
        }
        _ => Err(Error::InvalidSchema(format!(
            "variable `{var}` has different kinds in the two tables"
        ))),
    }
}

/// Joint coding of several factors into one `u64` per row when the level
/// product fits, which is the common case for the key sets used here.
pub(crate) fn pack_keys(factors: &[&Factor], n_rows: usize) -> Option<Vec<u64>> {
    let mut radix: u64 = 1;
    for f in factors {
        radix = radix.checked_mul(f.levels as u64)?;
    }
    let mut packed = vec![0u64; n_rows];
    for f in factors {
        let l = f.levels as u64;
        for (p, &c) in packed.iter_mut().zip(&f.codes) {
            *p = *p * l + c as u64;
        }
    }
    Some(packed)
}

/// Row-wise key tuples, for level products too wide to pack.
pub(crate) fn tuple_keys(factors: &[&Factor], n_rows: usize) -> Vec<Vec<u32>> {
    (0..n_rows)
        .map(|r| factors.iter().map(|f| f.codes[r]).collect())
        .collect()
}

/// Proportion of rows in each level, as a dense vector.
pub(crate) fn proportions(f: &Factor) -> Vec<f64> {
    let n = f.len() as f64;
    f.counts().into_iter().map(|c| c as f64 / n).collect()
}

/// Proportion of rows in each observed joint cell of two factors.
pub(crate) fn joint_proportions(a: &Factor, b: &Factor) -> BTreeMap<(u32, u32), f64> {
    let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for (&x, &y) in a.codes.iter().zip(&b.codes) {
        *counts.entry((x, y)).or_default() += 1;
    }
    let n = a.len() as f64;
    counts.into_iter().map(|(k, c)| (k, c as f64 / n)).collect()
}
