//! Attribution disclosure risk (TCAP).
//!
//! The intruder knows an original record's key values and looks the key tuple
//! up in the released table. Key classes whose within-class attribution
//! probability (WEAP) reaches the threshold yield the class's modal target as
//! the inferred value. TCAP is the share of matched original records for which
//! that inference is correct. Missing is an ordinary matchable level for keys
//! and a regular category for targets.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::binning::Binning;
use crate::data::{Factor, Level, MicroTable};
use crate::error::{Error, Result, ResultExt};
use crate::tabulate::{factor_pair, pack_keys, tuple_keys, FactorPair};

fn default_key_sizes() -> Vec<usize> {
    vec![3, 4, 5, 6]
}

fn default_threshold() -> f64 {
    1.0
}

/// Keys, targets and key-set sizes of the attack sweep.
///
/// A key size `k` uses the first `k` entries of `keys`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub keys: Vec<String>,
    pub targets: Vec<String>,
    #[serde(default = "default_key_sizes")]
    pub key_sizes: Vec<usize>,
    #[serde(default = "default_threshold")]
    pub weap_threshold: f64,
    /// Discretisation for numeric keys, by variable name.
    #[serde(default)]
    pub binning: BTreeMap<String, Binning>,
}

impl AttackConfig {
    pub fn new<S: Into<String>>(
        keys: impl IntoIterator<Item = S>,
        targets: impl IntoIterator<Item = S>,
    ) -> Self {
        AttackConfig {
            keys: keys.into_iter().map(Into::into).collect(),
            targets: targets.into_iter().map(Into::into).collect(),
            key_sizes: default_key_sizes(),
            weap_threshold: default_threshold(),
            binning: BTreeMap::new(),
        }
    }

    pub fn with_key_sizes(mut self, sizes: impl IntoIterator<Item = usize>) -> Self {
        self.key_sizes = sizes.into_iter().collect();
        self
    }

    pub fn with_binning(mut self, var: impl Into<String>, binning: Binning) -> Self {
        self.binning.insert(var.into(), binning);
        self
    }

    pub fn validate(&self, schema: &crate::data::Schema) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("attack: {msg}")));
        if self.keys.is_empty() || self.targets.is_empty() || self.key_sizes.is_empty() {
            return bad("keys, targets and key_sizes must be non-empty".into());
        }
        if !(self.weap_threshold > 0.0 && self.weap_threshold <= 1.0) {
            return bad(format!("weap_threshold {} not in (0, 1]", self.weap_threshold));
        }
        for (list, what) in [(&self.keys, "key"), (&self.targets, "target")] {
            for (i, name) in list.iter().enumerate() {
                if list[..i].contains(name) {
                    return bad(format!("duplicate {what} `{name}`"));
                }
                let spec = schema.variable(name)?;
                if !spec.is_categorical() && what == "target" {
                    return Err(Error::NotCategorical(name.clone()));
                }
                if !spec.is_categorical() && !self.binning.contains_key(name) {
                    return bad(format!("numeric key `{name}` needs a binning rule"));
                }
            }
        }
        for b in self.binning.values() {
            b.validate().map_err(|e| Error::Config(format!("attack binning: {e}")))?;
        }
        for &k in &self.key_sizes {
            if k == 0 || k > self.keys.len() {
                return bad(format!("key size {k} outside 1..={}", self.keys.len()));
            }
            for t in &self.targets {
                if self.keys[..k].contains(t) {
                    return bad(format!("target `{t}` is among the first {k} keys"));
                }
            }
        }
        Ok(())
    }
}

/// Modal target of one key class in the released table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeapEntry {
    pub modal: Level,
    pub weap: f64,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcapOutcome {
    pub raw_tcap: f64,
    pub matched_fraction: f64,
    pub matched: u64,
    pub correct: u64,
    /// Set when no original record fell into a retained key class.
    pub no_matches: bool,
}

/// Risk of one (target, key-set size) cell of the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRisk {
    pub target: String,
    pub key_size: usize,
    pub raw_tcap: f64,
    pub baseline: f64,
    pub marginal: f64,
    pub matched_fraction: f64,
    pub no_matches: bool,
}

/// Means over the (target x key size) sweep; `marginal` is the overall
/// disclosure risk score.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskScore {
    pub raw_tcap: f64,
    pub baseline: f64,
    pub marginal: f64,
    pub matched_fraction: f64,
    pub no_match_pairs: usize,
    pub pairs: Vec<PairRisk>,
}

struct ClassCounts {
    total: u64,
    by_target: Vec<u64>,
}

fn modal(counts: &[u64]) -> (u32, u64) {
    // first maximum: ties go to the lowest code
    let mut best = (0u32, 0u64);
    for (code, &c) in counts.iter().enumerate() {
        if c > best.1 {
            best = (code as u32, c);
        }
    }
    best
}

fn class_counts<K: Hash + Eq + Clone>(keys: &[K], target: &Factor) -> HashMap<K, ClassCounts> {
    let mut classes: HashMap<K, ClassCounts> = HashMap::new();
    for (k, &t) in keys.iter().zip(&target.codes) {
        let entry = classes.entry(k.clone()).or_insert_with(|| ClassCounts {
            total: 0,
            by_target: vec![0; target.levels as usize],
        });
        entry.total += 1;
        entry.by_target[t as usize] += 1;
    }
    classes
}

fn tcap_keyed<K: Hash + Eq + Clone>(
    orig_keys: &[K],
    orig_target: &Factor,
    synth_keys: &[K],
    synth_target: &Factor,
    threshold: f64,
) -> TcapOutcome {
    let retained: HashMap<K, u32> = class_counts(synth_keys, synth_target)
        .into_iter()
        .filter_map(|(k, cc)| {
            let (code, n) = modal(&cc.by_target);
            (n as f64 / cc.total as f64 >= threshold).then_some((k, code))
        })
        .collect();
    let mut matched = 0u64;
    let mut correct = 0u64;
    for (k, &t) in orig_keys.iter().zip(&orig_target.codes) {
        if let Some(&m) = retained.get(k) {
            matched += 1;
            if m == t {
                correct += 1;
            }
        }
    }
    let n = orig_keys.len() as f64;
    if matched == 0 {
        return TcapOutcome {
            raw_tcap: 0.0,
            matched_fraction: 0.0,
            matched,
            correct,
            no_matches: true,
        };
    }
    TcapOutcome {
        raw_tcap: correct as f64 / matched as f64,
        matched_fraction: matched as f64 / n,
        matched,
        correct,
        no_matches: false,
    }
}

/// TCAP from pre-coded factors sharing one code space per variable.
pub(crate) fn tcap_from_pairs(
    keys: &[&FactorPair],
    target: &FactorPair,
    threshold: f64,
) -> Result<TcapOutcome> {
    let n_orig = target.original.len();
    let n_synth = target.other.len();
    if n_orig == 0 {
        return Err(Error::EmptyTable);
    }
    if n_synth == 0 {
        return Err(Error::EmptySynth);
    }
    let ok: Vec<&Factor> = keys.iter().map(|p| &p.original).collect();
    let sk: Vec<&Factor> = keys.iter().map(|p| &p.other).collect();
    Ok(match (pack_keys(&ok, n_orig), pack_keys(&sk, n_synth)) {
        (Some(o), Some(s)) => tcap_keyed(&o, &target.original, &s, &target.other, threshold),
        _ => tcap_keyed(
            &tuple_keys(&ok, n_orig),
            &target.original,
            &tuple_keys(&sk, n_synth),
            &target.other,
            threshold,
        ),
    })
}

fn level_of(f: &Factor, code: u32) -> Level {
    (code != f.missing_code()).then_some(code)
}

/// Key classes of `synth` with their modal target, WEAP and size. Keys and
/// target must be categorical.
pub fn weap_table(
    synth: &MicroTable,
    keys: &[&str],
    target: &str,
) -> Result<BTreeMap<Vec<Level>, WeapEntry>> {
    if synth.is_empty() {
        return Err(Error::EmptySynth);
    }
    let key_factors = keys
        .iter()
        .map(|k| synth.factor(k))
        .collect::<Result<Vec<_>>>()?;
    let target = synth.factor(target)?;
    let refs: Vec<&Factor> = key_factors.iter().collect();
    let tuples = tuple_keys(&refs, synth.n_rows());
    Ok(class_counts(&tuples, &target)
        .into_iter()
        .map(|(k, cc)| {
            let (code, n) = modal(&cc.by_target);
            let levels = k
                .iter()
                .zip(&key_factors)
                .map(|(&c, f)| level_of(f, c))
                .collect();
            (
                levels,
                WeapEntry {
                    modal: level_of(&target, code),
                    weap: n as f64 / cc.total as f64,
                    count: cc.total,
                },
            )
        })
        .collect())
}

/// Raw TCAP of `synth` against `original` for categorical keys and target.
pub fn tcap_raw(
    original: &MicroTable,
    synth: &MicroTable,
    keys: &[&str],
    target: &str,
    weap_threshold: f64,
) -> Result<TcapOutcome> {
    let key_pairs = keys
        .iter()
        .map(|k| factor_pair(original, synth, k, None))
        .collect::<Result<Vec<_>>>()?;
    let target = factor_pair(original, synth, target, None)?;
    let refs: Vec<&FactorPair> = key_pairs.iter().collect();
    tcap_from_pairs(&refs, &target, weap_threshold)
}

fn baseline_from_factor(f: &Factor) -> f64 {
    let n = f.len() as f64;
    let sum_sq: u128 = f.counts().iter().map(|&c| (c as u128) * (c as u128)).sum();
    sum_sq as f64 / (n * n)
}

/// Probability of a correct guess when drawing the target at random from its
/// univariate distribution in the original data: `sum_c p_c^2`.
pub fn baseline_cap(original: &MicroTable, target: &str) -> Result<f64> {
    if original.is_empty() {
        return Err(Error::EmptyTable);
    }
    Ok(baseline_from_factor(&original.factor(target)?))
}

/// TCAP rescaled so the baseline maps to 0 and certainty to 1. Negative
/// values mean the released data attributes worse than the baseline guess.
pub fn marginal_tcap(raw: f64, baseline: f64) -> Result<f64> {
    if baseline >= 1.0 {
        return Err(Error::DegenerateBaseline);
    }
    Ok((raw - baseline) / (1.0 - baseline))
}

/// Mean marginal TCAP over every target and key-set size of `cfg`.
pub fn overall_risk(
    original: &MicroTable,
    synth: &MicroTable,
    cfg: &AttackConfig,
) -> Result<RiskScore> {
    if original.is_empty() {
        return Err(Error::EmptyTable);
    }
    if synth.is_empty() {
        return Err(Error::EmptySynth);
    }
    cfg.validate(original.schema())?;
    let mut coded: HashMap<&str, FactorPair> = HashMap::new();
    for name in cfg.keys.iter().chain(&cfg.targets) {
        if !coded.contains_key(name.as_str()) {
            let pair = factor_pair(original, synth, name, cfg.binning.get(name))
                .context_with(|| format!("variable {name}"))?;
            coded.insert(name, pair);
        }
    }

    let mut pairs = Vec::with_capacity(cfg.targets.len() * cfg.key_sizes.len());
    for target in &cfg.targets {
        let tp = &coded[target.as_str()];
        let baseline = baseline_from_factor(&tp.original);
        for &k in &cfg.key_sizes {
            let ctx = || format!("target={target} keys={k}");
            let keys: Vec<&FactorPair> = cfg.keys[..k].iter().map(|n| &coded[n.as_str()]).collect();
            let outcome = tcap_from_pairs(&keys, tp, cfg.weap_threshold).context_with(ctx)?;
            if outcome.no_matches {
                log::warn!("no original records matched a retained key class ({})", ctx());
            }
            let marginal = marginal_tcap(outcome.raw_tcap, baseline).context_with(ctx)?;
            pairs.push(PairRisk {
                target: target.clone(),
                key_size: k,
                raw_tcap: outcome.raw_tcap,
                baseline,
                marginal,
                matched_fraction: outcome.matched_fraction,
                no_matches: outcome.no_matches,
            });
        }
    }
    let m = pairs.len() as f64;
    let mean = |f: fn(&PairRisk) -> f64| pairs.iter().map(f).sum::<f64>() / m;
    Ok(RiskScore {
        raw_tcap: mean(|p| p.raw_tcap),
        baseline: mean(|p| p.baseline),
        marginal: mean(|p| p.marginal),
        matched_fraction: mean(|p| p.matched_fraction),
        no_match_pairs: pairs.iter().filter(|p| p.no_matches).count(),
        pairs,
    })
}
