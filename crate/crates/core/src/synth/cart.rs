//! Classification and regression trees for sequential synthesis.
//!
//! Categorical targets split on Gini impurity, numeric targets on variance.
//! Leaves keep the indices of their training rows so a synthetic value can be
//! drawn from the leaf's donors.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Cell, Column, MicroTable};
use crate::error::{Error, Result};

fn default_min_leaf() -> usize {
    5
}
fn default_max_depth() -> usize {
    30
}
fn default_min_improvement() -> f64 {
    1e-7
}
fn default_exhaustive() -> usize {
    12
}

/// Tree growth controls.
///
/// A node becomes a leaf when it holds fewer than `2 * min_leaf` rows, sits
/// at `max_depth`, is pure, or its best split improves node impurity by less
/// than `min_split_improvement`. Categorical predictors with at most
/// `exhaustive_max_categories` levels in a node have every binary partition
/// searched; wider ones use the ordered-levels reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartParams {
    #[serde(default = "default_min_leaf")]
    pub min_leaf: usize,
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
    #[serde(default = "default_min_improvement")]
    pub min_split_improvement: f64,
    #[serde(default = "default_exhaustive")]
    pub exhaustive_max_categories: usize,
    /// Half-width of uniform noise added to numeric donor values; off when
    /// `None`.
    #[serde(default)]
    pub numeric_jitter: Option<f64>,
}

impl Default for CartParams {
    fn default() -> Self {
        CartParams {
            min_leaf: default_min_leaf(),
            max_depth: default_max_depth(),
            min_split_improvement: default_min_improvement(),
            exhaustive_max_categories: default_exhaustive(),
            numeric_jitter: None,
        }
    }
}

impl CartParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_leaf < 1 {
            return Err(Error::Config("cart: min_leaf must be >= 1".into()));
        }
        if self.exhaustive_max_categories > 20 {
            return Err(Error::Config("cart: exhaustive_max_categories above 20 is intractable".into()));
        }
        if let Some(j) = self.numeric_jitter {
            if !(j.is_finite() && j >= 0.0) {
                return Err(Error::Config("cart: numeric_jitter must be non-negative".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SplitRule {
    /// `left[level]` says where a level goes; levels not seen in training at
    /// this node follow the larger branch.
    Categories {
        left: Vec<bool>,
        seen: Vec<bool>,
        majority_left: bool,
    },
    /// `x <= threshold` goes left; Missing follows `missing_left`.
    Threshold { threshold: f64, missing_left: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CartNode {
    Split {
        /// Index into the tree's predictor list.
        variable: usize,
        rule: SplitRule,
        gain: f64,
        left: Box<CartNode>,
        right: Box<CartNode>,
    },
    Leaf { rows: Vec<usize> },
}

impl CartNode {
    pub fn depth(&self) -> usize {
        match self {
            CartNode::Leaf { .. } => 0,
            CartNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaves(&self) -> Vec<&[usize]> {
        match self {
            CartNode::Leaf { rows } => vec![rows.as_slice()],
            CartNode::Split { left, right, .. } => {
                let mut v = left.leaves();
                v.extend(right.leaves());
                v
            }
        }
    }
}

/// A predictor value as seen by the tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PredValue {
    Level(u32),
    Number(Option<f64>),
}

#[derive(Debug, Clone)]
pub(crate) enum PredColumn {
    /// Codes with Missing as level `levels - 1`.
    Levels { codes: Vec<u32>, levels: u32 },
    Numbers(Vec<Option<f64>>),
}

impl PredColumn {
    fn from_table(t: &MicroTable, var: usize) -> PredColumn {
        match t.column(var) {
            Column::Categorical(cells) => {
                let f = crate::data::Factor::from_levels(cells, t.schema().variables[var].categories.len());
                PredColumn::Levels {
                    codes: f.codes,
                    levels: f.levels,
                }
            }
            Column::Numeric(cells) => PredColumn::Numbers(cells.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum TargetColumn {
    Classes { codes: Vec<u32>, levels: u32 },
    /// Missing targets are carried in leaves but excluded from variance.
    Values(Vec<Option<f64>>),
}

/// Sufficient statistics of the target over a set of rows.
#[derive(Debug, Clone, PartialEq)]
enum Stats {
    Classes { counts: Vec<u64>, n: u64 },
    /// Count, sum and sum of squares of target values centred on the node mean.
    Moments { m: u64, s: f64, ss: f64 },
}

impl Stats {
    fn empty_like(&self) -> Stats {
        match self {
            Stats::Classes { counts, .. } => Stats::Classes {
                counts: vec![0; counts.len()],
                n: 0,
            },
            Stats::Moments { .. } => Stats::Moments { m: 0, s: 0.0, ss: 0.0 },
        }
    }

    fn add(&mut self, other: &Stats) {
        match (self, other) {
            (Stats::Classes { counts, n }, Stats::Classes { counts: c2, n: n2 }) => {
                for (a, b) in counts.iter_mut().zip(c2) {
                    *a += b;
                }
                *n += n2;
            }
            (Stats::Moments { m, s, ss }, Stats::Moments { m: m2, s: s2, ss: ss2 }) => {
                *m += m2;
                *s += s2;
                *ss += ss2;
            }
            _ => unreachable!("mixed statistics"),
        }
    }

    fn minus(&self, other: &Stats) -> Stats {
        match (self, other) {
            (Stats::Classes { counts, n }, Stats::Classes { counts: c2, n: n2 }) => Stats::Classes {
                counts: counts.iter().zip(c2).map(|(a, b)| a - b).collect(),
                n: n - n2,
            },
            (Stats::Moments { m, s, ss }, Stats::Moments { m: m2, s: s2, ss: ss2 }) => {
                Stats::Moments {
                    m: m - m2,
                    s: s - s2,
                    ss: ss - ss2,
                }
            }
            _ => unreachable!("mixed statistics"),
        }
    }

    /// Impurity times weight: `n * Gini` or `m * variance`.
    fn weighted_impurity(&self) -> f64 {
        match self {
            Stats::Classes { counts, n } => {
                if *n == 0 {
                    return 0.0;
                }
                let sq: u128 = counts.iter().map(|&c| c as u128 * c as u128).sum();
                *n as f64 - sq as f64 / *n as f64
            }
            Stats::Moments { m, s, ss } => {
                if *m == 0 {
                    return 0.0;
                }
                (ss - s * s / *m as f64).max(0.0)
            }
        }
    }

    fn weight(&self) -> u64 {
        match self {
            Stats::Classes { n, .. } => *n,
            Stats::Moments { m, .. } => *m,
        }
    }

    /// Impurity decrease of splitting `self` into `left` and its complement,
    /// on the per-row scale of the parent.
    fn gain(&self, left: &Stats) -> f64 {
        let right = self.minus(left);
        let w = self.weight();
        if w == 0 {
            return 0.0;
        }
        (self.weighted_impurity() - left.weighted_impurity() - right.weighted_impurity()) / w as f64
    }
}

struct Fitter<'a> {
    preds: &'a [PredColumn],
    target: &'a TargetColumn,
    params: CartParams,
}

/// Winning split at a node.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitChoice {
    pub variable: usize,
    pub rule: SplitRule,
    pub gain: f64,
}

impl<'a> Fitter<'a> {
    fn stats(&self, rows: &[usize], centre: f64) -> Stats {
        match self.target {
            TargetColumn::Classes { codes, levels } => {
                let mut counts = vec![0u64; *levels as usize];
                for &r in rows {
                    counts[codes[r] as usize] += 1;
                }
                Stats::Classes {
                    counts,
                    n: rows.len() as u64,
                }
            }
            TargetColumn::Values(vals) => {
                let (mut m, mut s, mut ss) = (0u64, 0.0, 0.0);
                for &r in rows {
                    if let Some(v) = vals[r] {
                        let d = v - centre;
                        m += 1;
                        s += d;
                        ss += d * d;
                    }
                }
                Stats::Moments { m, s, ss }
            }
        }
    }

    fn centre(&self, rows: &[usize]) -> f64 {
        match self.target {
            TargetColumn::Classes { .. } => 0.0,
            TargetColumn::Values(vals) => {
                let (n, s) = rows
                    .iter()
                    .filter_map(|&r| vals[r])
                    .fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
                if n == 0 {
                    0.0
                } else {
                    s / n as f64
                }
            }
        }
    }

    fn best_split(&self, rows: &[usize]) -> Option<SplitChoice> {
        let centre = self.centre(rows);
        let parent = self.stats(rows, centre);
        if parent.weighted_impurity() <= 0.0 {
            return None;
        }
        let mut best: Option<SplitChoice> = None;
        for (v, col) in self.preds.iter().enumerate() {
            let cand = match col {
                PredColumn::Levels { codes, levels } => {
                    self.best_categorical(rows, codes, *levels, &parent, centre)
                }
                PredColumn::Numbers(vals) => self.best_numeric(rows, vals, &parent, centre),
            };
            if let Some((rule, gain)) = cand {
                if best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(SplitChoice {
                        variable: v,
                        rule,
                        gain,
                    });
                }
            }
        }
        best
    }

    fn best_categorical(
        &self,
        rows: &[usize],
        codes: &[u32],
        levels: u32,
        parent: &Stats,
        centre: f64,
    ) -> Option<(SplitRule, f64)> {
        let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); levels as usize];
        for &r in rows {
            by_level[codes[r] as usize].push(r);
        }
        let present: Vec<u32> = (0..levels).filter(|&l| !by_level[l as usize].is_empty()).collect();
        if present.len() < 2 {
            return None;
        }
        let stats: Vec<Stats> = present
            .iter()
            .map(|&l| self.stats(&by_level[l as usize], centre))
            .collect();
        let sizes: Vec<usize> = present.iter().map(|&l| by_level[l as usize].len()).collect();
        let n = rows.len();
        let min_leaf = self.params.min_leaf;

        let mut best: Option<(Vec<bool>, f64)> = None;
        let mut consider = |mask: Vec<bool>, left: &Stats, n_left: usize| {
            if n_left < min_leaf || n - n_left < min_leaf {
                return;
            }
            let gain = parent.gain(left);
            if best.as_ref().is_none_or(|b| gain > b.1) {
                best = Some((mask, gain));
            }
        };

        let k = present.len();
        if k <= self.params.exhaustive_max_categories {
            // partitions with the first present level on the left
            for bits in 0u32..(1 << (k - 1)) {
                let mut mask = vec![false; k];
                mask[0] = true;
                for (j, m) in mask.iter_mut().enumerate().skip(1) {
                    *m = bits >> (j - 1) & 1 == 1;
                }
                if mask.iter().all(|&m| m) {
                    continue;
                }
                let mut left = parent.empty_like();
                let mut n_left = 0;
                for j in 0..k {
                    if mask[j] {
                        left.add(&stats[j]);
                        n_left += sizes[j];
                    }
                }
                consider(mask, &left, n_left);
            }
        } else {
            let order = ordering(&stats, parent);
            let mut left = parent.empty_like();
            let mut n_left = 0;
            for (pos, &j) in order.iter().enumerate().take(k - 1) {
                left.add(&stats[j]);
                n_left += sizes[j];
                let mut mask = vec![false; k];
                for &i in &order[..=pos] {
                    mask[i] = true;
                }
                consider(mask, &left, n_left);
            }
        }

        let (mask, gain) = best?;
        let mut left = vec![false; levels as usize];
        let mut seen = vec![false; levels as usize];
        let mut n_left = 0;
        for (j, &l) in present.iter().enumerate() {
            seen[l as usize] = true;
            left[l as usize] = mask[j];
            if mask[j] {
                n_left += sizes[j];
            }
        }
        Some((
            SplitRule::Categories {
                left,
                seen,
                majority_left: 2 * n_left >= n,
            },
            gain,
        ))
    }

    fn best_numeric(
        &self,
        rows: &[usize],
        vals: &[Option<f64>],
        parent: &Stats,
        centre: f64,
    ) -> Option<(SplitRule, f64)> {
        let mut present: Vec<(f64, usize)> = Vec::with_capacity(rows.len());
        let mut missing: Vec<usize> = Vec::new();
        for &r in rows {
            match vals[r] {
                Some(x) => present.push((x, r)),
                None => missing.push(r),
            }
        }
        if present.len() < 2 {
            return None;
        }
        present.sort_by(|a, b| a.0.total_cmp(&b.0));
        let miss_stats = self.stats(&missing, centre);
        let n = rows.len();
        let n_miss = missing.len();
        let min_leaf = self.params.min_leaf;

        let mut best: Option<(f64, bool, f64)> = None;
        let mut prefix = parent.empty_like();
        let mut i = 0;
        while i < present.len() {
            let x = present[i].0;
            let mut j = i;
            let mut step_rows = Vec::new();
            while j < present.len() && present[j].0 == x {
                step_rows.push(present[j].1);
                j += 1;
            }
            prefix.add(&self.stats(&step_rows, centre));
            if j == present.len() {
                break;
            }
            let threshold = x + (present[j].0 - x) / 2.0;
            let n_prefix = j;
            for missing_left in [false, true] {
                if n_miss == 0 && missing_left {
                    continue;
                }
                let (left, n_left) = if missing_left {
                    let mut l = prefix.clone();
                    l.add(&miss_stats);
                    (l, n_prefix + n_miss)
                } else {
                    (prefix.clone(), n_prefix)
                };
                if n_left < min_leaf || n - n_left < min_leaf {
                    continue;
                }
                let gain = parent.gain(&left);
                if best.is_none_or(|b| gain > b.2) {
                    best = Some((threshold, missing_left, gain));
                }
            }
            i = j;
        }
        let (threshold, mut missing_left, gain) = best?;
        if n_miss == 0 {
            let n_left = present.iter().filter(|p| p.0 <= threshold).count();
            missing_left = 2 * n_left >= n;
        }
        Some((
            SplitRule::Threshold {
                threshold,
                missing_left,
            },
            gain,
        ))
    }

    fn grow(&self, rows: Vec<usize>, depth: usize) -> CartNode {
        if rows.len() < 2 * self.params.min_leaf || depth >= self.params.max_depth {
            return CartNode::Leaf { rows };
        }
        let Some(choice) = self.best_split(&rows) else {
            return CartNode::Leaf { rows };
        };
        if choice.gain < self.params.min_split_improvement {
            return CartNode::Leaf { rows };
        }
        let (l, r): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&row| goes_left(&choice.rule, self.value(choice.variable, row)));
        CartNode::Split {
            variable: choice.variable,
            rule: choice.rule,
            gain: choice.gain,
            left: Box::new(self.grow(l, depth + 1)),
            right: Box::new(self.grow(r, depth + 1)),
        }
    }

    fn value(&self, var: usize, row: usize) -> PredValue {
        match &self.preds[var] {
            PredColumn::Levels { codes, .. } => PredValue::Level(codes[row]),
            PredColumn::Numbers(v) => PredValue::Number(v[row]),
        }
    }
}

/// Level order for the prefix-split reduction: by mean for numeric targets,
/// otherwise by the share of the node's most frequent class.
fn ordering(stats: &[Stats], parent: &Stats) -> Vec<usize> {
    let key: Vec<f64> = match parent {
        Stats::Moments { .. } => stats
            .iter()
            .map(|s| match s {
                Stats::Moments { m, s, .. } if *m > 0 => s / *m as f64,
                _ => f64::NEG_INFINITY,
            })
            .collect(),
        Stats::Classes { counts, .. } => {
            let top = counts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .map_or(0, |(i, _)| i);
            stats
                .iter()
                .map(|s| match s {
                    Stats::Classes { counts, n } if *n > 0 => counts[top] as f64 / *n as f64,
                    _ => 0.0,
                })
                .collect()
        }
    };
    let mut order: Vec<usize> = (0..stats.len()).collect();
    order.sort_by(|&a, &b| key[a].total_cmp(&key[b]).then(a.cmp(&b)));
    order
}

pub fn goes_left(rule: &SplitRule, value: PredValue) -> bool {
    match (rule, value) {
        (
            SplitRule::Categories {
                left,
                seen,
                majority_left,
            },
            PredValue::Level(l),
        ) => {
            let l = l as usize;
            if l < seen.len() && seen[l] {
                left[l]
            } else {
                *majority_left
            }
        }
        (
            SplitRule::Threshold {
                threshold,
                missing_left,
            },
            PredValue::Number(x),
        ) => match x {
            Some(x) => x <= *threshold,
            None => *missing_left,
        },
        // kind mismatch cannot arise from trees built by `cart_fit`
        _ => true,
    }
}

/// A fitted tree with the names it was trained on.
#[derive(Debug, Clone, PartialEq)]
pub struct CartTree {
    pub target: String,
    pub predictors: Vec<String>,
    pub root: CartNode,
}

fn target_column(t: &MicroTable, idx: usize) -> TargetColumn {
    match t.column(idx) {
        Column::Categorical(cells) => {
            let f = crate::data::Factor::from_levels(cells, t.schema().variables[idx].categories.len());
            TargetColumn::Classes {
                codes: f.codes,
                levels: f.levels,
            }
        }
        Column::Numeric(cells) => TargetColumn::Values(cells.clone()),
    }
}

fn prepare(t: &MicroTable, target: &str, predictors: &[&str]) -> Result<(Vec<PredColumn>, TargetColumn)> {
    if t.is_empty() {
        return Err(Error::EmptyTable);
    }
    if predictors.is_empty() {
        return Err(Error::Config("cart: no predictors".into()));
    }
    let ti = t.schema().index_of(target)?;
    let preds = predictors
        .iter()
        .map(|p| {
            let i = t.schema().index_of(p)?;
            if i == ti {
                return Err(Error::Config(format!("cart: `{p}` is both target and predictor")));
            }
            Ok(PredColumn::from_table(t, i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((preds, target_column(t, ti)))
}

/// Grow a tree for `target` on `predictors`. When no split qualifies the
/// result is a single leaf holding every row.
pub fn cart_fit(t: &MicroTable, target: &str, predictors: &[&str], params: &CartParams) -> Result<CartTree> {
    params.validate()?;
    let (preds, tcol) = prepare(t, target, predictors)?;
    let fitter = Fitter {
        preds: &preds,
        target: &tcol,
        params: *params,
    };
    Ok(CartTree {
        target: target.to_string(),
        predictors: predictors.iter().map(|s| s.to_string()).collect(),
        root: fitter.grow((0..t.n_rows()).collect(), 0),
    })
}

/// The split `cart_fit` would place at the root, if any.
pub fn root_split(t: &MicroTable, target: &str, predictors: &[&str], params: &CartParams) -> Result<Option<SplitChoice>> {
    params.validate()?;
    let (preds, tcol) = prepare(t, target, predictors)?;
    let fitter = Fitter {
        preds: &preds,
        target: &tcol,
        params: *params,
    };
    if t.n_rows() < 2 * params.min_leaf {
        return Ok(None);
    }
    Ok(fitter.best_split(&(0..t.n_rows()).collect::<Vec<_>>()))
}

fn pred_value(cell: Cell, missing_level: u32) -> PredValue {
    match cell {
        Cell::Category(c) => PredValue::Level(c),
        Cell::Number(x) => PredValue::Number(Some(x)),
        Cell::Missing => PredValue::Level(missing_level),
    }
}

impl CartTree {
    /// Training rows of the leaf that `row` (predictor values in predictor
    /// order) falls into.
    pub fn leaf_rows(&self, row: &[PredValue]) -> &[usize] {
        let mut node = &self.root;
        loop {
            match node {
                CartNode::Leaf { rows } => return rows,
                CartNode::Split {
                    variable,
                    rule,
                    left,
                    right,
                    ..
                } => {
                    node = if goes_left(rule, row[*variable]) { left } else { right };
                }
            }
        }
    }

    /// Convert cells of the training schema into tree inputs. Missing
    /// numeric cells become `Number(None)`.
    pub fn inputs(&self, training: &MicroTable, cells: &[Cell]) -> Vec<PredValue> {
        self.predictors
            .iter()
            .zip(cells)
            .map(|(name, &cell)| {
                let spec = training.schema().variable(name).expect("predictor in schema");
                if spec.is_categorical() {
                    pred_value(cell, spec.categories.len() as u32)
                } else {
                    match cell {
                        Cell::Number(x) => PredValue::Number(Some(x)),
                        _ => PredValue::Number(None),
                    }
                }
            })
            .collect()
    }
}

/// Route `row` to its leaf and return the target cell of a uniformly chosen
/// donor row from that leaf.
pub fn cart_draw<R: Rng + ?Sized>(
    tree: &CartTree,
    row: &[PredValue],
    training: &MicroTable,
    rng: &mut R,
    jitter: Option<f64>,
) -> Cell {
    let rows = tree.leaf_rows(row);
    let donor = rows[rng.random_range(0..rows.len())];
    let ti = training.schema().index_of(&tree.target).expect("target in schema");
    match (training.cell(donor, ti), jitter) {
        (Cell::Number(x), Some(h)) if h > 0.0 => Cell::Number(x + rng.random_range(-h..=h)),
        (cell, _) => cell,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Schema, VariableSpec};
    use crate::seed;

    fn table(p: Vec<Option<u32>>, t: Vec<Option<u32>>) -> MicroTable {
        let schema = Schema::new(vec![
            VariableSpec::categorical("p", ["a", "b", "c"]),
            VariableSpec::categorical("t", ["X", "Y"]),
        ])
        .unwrap();
        MicroTable::new(schema, vec![Column::Categorical(p), Column::Categorical(t)]).unwrap()
    }

    #[test]
    fn separable_binary_predictor_gives_depth_one() {
        let p: Vec<Option<u32>> = (0..100).map(|i| Some((i % 2) as u32)).collect();
        let t = p.clone();
        let tree = cart_fit(&table(p, t), "t", &["p"], &CartParams::default()).unwrap();
        assert_eq!(tree.root.depth(), 1);
        for leaf in tree.root.leaves() {
            let first = leaf[0] % 2;
            assert!(leaf.iter().all(|r| r % 2 == first));
        }
    }

    #[test]
    fn factorial_independence_gives_root_leaf() {
        // every (p, t) combination equally often
        let mut p = Vec::new();
        let mut t = Vec::new();
        for rep in 0..20 {
            for a in 0..3 {
                for b in 0..2 {
                    p.push(Some(a));
                    t.push(Some((b + rep) % 2));
                }
            }
        }
        let params = CartParams {
            min_split_improvement: 1e-3,
            ..CartParams::default()
        };
        let tree = cart_fit(&table(p, t), "t", &["p"], &params).unwrap();
        assert!(matches!(tree.root, CartNode::Leaf { ref rows } if rows.len() == 120));
    }

    #[test]
    fn unseen_level_routes_to_majority() {
        let rule = SplitRule::Categories {
            left: vec![true, false, false, false],
            seen: vec![true, true, false, false],
            majority_left: false,
        };
        assert!(goes_left(&rule, PredValue::Level(0)));
        assert!(!goes_left(&rule, PredValue::Level(2)));
        assert!(!goes_left(&rule, PredValue::Level(3)));
    }

    #[test]
    fn degenerate_leaf_always_draws_its_value() {
        let t = table(vec![Some(0); 3], vec![Some(1); 3]);
        let tree = cart_fit(&t, "t", &["p"], &CartParams::default()).unwrap();
        let mut rng = seed::rng(1);
        let input = tree.inputs(&t, &[Cell::Category(2)]);
        for _ in 0..20 {
            assert_eq!(cart_draw(&tree, &input, &t, &mut rng, None), Cell::Category(1));
        }
    }

    #[test]
    fn numeric_missing_direction_is_learned() {
        let schema = Schema::new(vec![
            VariableSpec::numeric("x"),
            VariableSpec::categorical("t", ["X", "Y"]),
        ])
        .unwrap();
        // missing x behaves like large x
        let mut xs = Vec::new();
        let mut ts = Vec::new();
        for i in 0..30 {
            xs.push(Some(i as f64));
            ts.push(Some((i >= 15) as u32));
        }
        for _ in 0..10 {
            xs.push(None);
            ts.push(Some(1));
        }
        let t = MicroTable::new(schema, vec![Column::Numeric(xs), Column::Categorical(ts)]).unwrap();
        let split = root_split(&t, "t", &["x"], &CartParams::default()).unwrap().unwrap();
        assert_eq!(
            split.rule,
            SplitRule::Threshold {
                threshold: 14.5,
                missing_left: false
            }
        );
        let parent_gini = 1.0 - (15.0f64 / 40.0).powi(2) - (25.0f64 / 40.0).powi(2);
        assert!((split.gain - parent_gini).abs() < 1e-12);
    }
}
