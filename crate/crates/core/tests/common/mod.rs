//! Independent reference implementations used as oracles, and random table
//! generators. Nothing here calls into the code under test beyond building
//! tables.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ruequiv::data::{Column, MicroTable, Schema, VariableSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Categorical schema `v0..v{n-1}` with `cats[i]` labels each.
pub fn categorical_schema(cats: &[usize]) -> Schema {
    Schema::new(
        cats.iter()
            .enumerate()
            .map(|(i, &k)| VariableSpec::categorical(format!("v{i}"), (0..k).map(|c| format!("c{c}"))))
            .collect(),
    )
    .unwrap()
}

/// Random categorical table over `schema`, each cell Missing with
/// probability `p_missing`.
pub fn random_table(r: &mut ChaCha8Rng, schema: &Schema, rows: usize, p_missing: f64) -> MicroTable {
    let columns = schema
        .variables
        .iter()
        .map(|v| {
            let k = v.categories.len() as u32;
            Column::Categorical(
                (0..rows)
                    .map(|_| (r.random::<f64>() >= p_missing).then(|| r.random_range(0..k)))
                    .collect(),
            )
        })
        .collect();
    MicroTable::new(schema.clone(), columns).unwrap()
}

pub fn cats(t: &MicroTable, var: usize) -> &[Option<u32>] {
    match t.column(var) {
        Column::Categorical(v) => v,
        Column::Numeric(_) => panic!("expected categorical"),
    }
}

/// Order used for modal ties: declared categories ascending, Missing last.
fn tie_rank(v: Option<u32>) -> u64 {
    v.map_or(u64::MAX, u64::from)
}

/// Raw TCAP by nested loops. For each original record, collect the
/// released records sharing its key values, find their modal target (ties
/// to the lowest category, Missing last), keep the record if the modal
/// share reaches `threshold`, and count whether the record's own target
/// equals it. Returns `(correct, matched)`.
pub fn tcap_oracle(original: &MicroTable, synth: &MicroTable, keys: &[usize], target: usize, threshold: f64) -> (u64, u64) {
    let (mut correct, mut matched) = (0u64, 0u64);
    for o in 0..original.n_rows() {
        let mut class_targets: Vec<Option<u32>> = Vec::new();
        for s in 0..synth.n_rows() {
            if keys.iter().all(|&k| cats(original, k)[o] == cats(synth, k)[s]) {
                class_targets.push(cats(synth, target)[s]);
            }
        }
        if class_targets.is_empty() {
            continue;
        }
        let mut best: Option<(Option<u32>, usize)> = None;
        for &cand in &class_targets {
            let n = class_targets.iter().filter(|&&t| t == cand).count();
            let better = match best {
                None => true,
                Some((b, bn)) => n > bn || (n == bn && tie_rank(cand) < tie_rank(b)),
            };
            if better {
                best = Some((cand, n));
            }
        }
        let (modal, n) = best.unwrap();
        if n as f64 / class_targets.len() as f64 >= threshold {
            matched += 1;
            if cats(original, target)[o] == modal {
                correct += 1;
            }
        }
    }
    (correct, matched)
}

/// Probability two independent draws (with replacement) of the column agree,
/// counted over all ordered record pairs: equals the sum of squared
/// category proportions, Missing included.
pub fn baseline_oracle(column: &[Option<u32>]) -> f64 {
    let n = column.len();
    let mut agree: u64 = 0;
    for a in column {
        for b in column {
            if a == b {
                agree += 1;
            }
        }
    }
    agree as f64 / (n as f64 * n as f64)
}

/// Spearman rank correlation, average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Target of a CART oracle table.
pub enum OracleTarget {
    Classes(Vec<Option<u32>>),
    Values(Vec<Option<f64>>),
}

/// Predictor of a CART oracle table.
pub enum OraclePredictor {
    Levels(Vec<Option<u32>>),
    Numbers(Vec<Option<f64>>),
}

/// `n * impurity` of the rows: Gini over classes (Missing is a class) or
/// the sum of squared deviations of non-missing values from their mean.
fn weighted_impurity(target: &OracleTarget, rows: &[usize]) -> f64 {
    match target {
        OracleTarget::Classes(v) => {
            let n = rows.len() as f64;
            if rows.is_empty() {
                return 0.0;
            }
            let mut seen: Vec<Option<u32>> = rows.iter().map(|&r| v[r]).collect();
            seen.sort();
            seen.dedup();
            let sum_p2: f64 = seen
                .iter()
                .map(|c| {
                    let k = rows.iter().filter(|&&r| v[r] == *c).count() as f64;
                    (k / n) * (k / n)
                })
                .sum();
            n * (1.0 - sum_p2)
        }
        OracleTarget::Values(v) => {
            let xs: Vec<f64> = rows.iter().filter_map(|&r| v[r]).collect();
            if xs.is_empty() {
                return 0.0;
            }
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            xs.iter().map(|x| (x - mean).powi(2)).sum()
        }
    }
}

fn weight(target: &OracleTarget, rows: &[usize]) -> f64 {
    match target {
        OracleTarget::Classes(_) => rows.len() as f64,
        OracleTarget::Values(v) => rows.iter().filter(|&&r| v[r].is_some()).count() as f64,
    }
}

/// Impurity decrease per unit parent weight.
pub fn split_gain(target: &OracleTarget, left: &[usize], right: &[usize]) -> f64 {
    let all: Vec<usize> = left.iter().chain(right).copied().collect();
    let w = weight(target, &all);
    if w == 0.0 {
        return 0.0;
    }
    (weighted_impurity(target, &all) - weighted_impurity(target, left) - weighted_impurity(target, right)) / w
}

/// Every admissible root split, as (predictor, left rows sorted, gain).
/// Categorical predictors: every two-way partition of the present levels
/// (Missing is a level). Numeric predictors: every cut between adjacent
/// distinct values, with Missing sent either way.
pub fn enumerate_splits(preds: &[OraclePredictor], target: &OracleTarget, n: usize, min_leaf: usize) -> Vec<(usize, Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut push = |p: usize, left: Vec<usize>| {
        let right: Vec<usize> = (0..n).filter(|r| !left.contains(r)).collect();
        if left.len() >= min_leaf && right.len() >= min_leaf {
            let g = split_gain(target, &left, &right);
            out.push((p, left, g));
        }
    };
    for (p, pred) in preds.iter().enumerate() {
        match pred {
            OraclePredictor::Levels(v) => {
                let mut levels: Vec<Option<u32>> = v.clone();
                levels.sort();
                levels.dedup();
                let k = levels.len();
                if k < 2 {
                    continue;
                }
                for mask in 1u32..(1 << k) - 1 {
                    let chosen: Vec<Option<u32>> = (0..k).filter(|j| mask >> j & 1 == 1).map(|j| levels[j]).collect();
                    push(p, (0..n).filter(|&r| chosen.contains(&v[r])).collect());
                }
            }
            OraclePredictor::Numbers(v) => {
                let mut xs: Vec<f64> = v.iter().flatten().copied().collect();
                xs.sort_by(f64::total_cmp);
                xs.dedup();
                let has_missing = v.iter().any(Option::is_none);
                for w in xs.windows(2) {
                    let cut = (w[0] + w[1]) / 2.0;
                    let below: Vec<usize> = (0..n).filter(|&r| matches!(v[r], Some(x) if x <= cut)).collect();
                    push(p, below.clone());
                    if has_missing {
                        let mut with_missing = below;
                        with_missing.extend((0..n).filter(|&r| v[r].is_none()));
                        with_missing.sort();
                        push(p, with_missing);
                    }
                }
            }
        }
    }
    out
}
