//! Toy populations for exercising the pipeline without restricted data.
//!
//! Rows come from a latent-class mixture: draw a class, then draw every
//! variable independently given the class. Each variable's class-specific
//! distribution blends a shared marginal with a class-specific peaked one,
//! `(1 - dependence) * shared + dependence * peaked`, so `dependence = 0`
//! gives mutually independent columns and values near 1 give strong
//! pairwise association.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{save_csv, Column, MicroTable, Schema, VariableKind, VariableSpec};
use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FixtureVariable {
    /// Labels "1" to "k".
    Categorical { name: String, categories: usize },
    /// Integer-valued, within `[min, max]`.
    Numeric { name: String, min: f64, max: f64 },
}

impl FixtureVariable {
    pub fn name(&self) -> &str {
        match self {
            FixtureVariable::Categorical { name, .. } | FixtureVariable::Numeric { name, .. } => name,
        }
    }

    fn spec(&self) -> VariableSpec {
        match self {
            FixtureVariable::Categorical { name, categories } => {
                VariableSpec::categorical(name.clone(), (1..=*categories).map(|i| i.to_string()))
            }
            FixtureVariable::Numeric { name, .. } => VariableSpec::numeric(name.clone()),
        }
    }
}

fn cat(name: &str, categories: usize) -> FixtureVariable {
    FixtureVariable::Categorical {
        name: name.into(),
        categories,
    }
}

fn num(name: &str, min: f64, max: f64) -> FixtureVariable {
    FixtureVariable::Numeric {
        name: name.into(),
        min,
        max,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub rows: usize,
    pub variables: Vec<FixtureVariable>,
    #[serde(default = "default_classes")]
    pub classes: usize,
    /// Strength of association between variables, in `[0, 1]`.
    pub dependence: f64,
    /// Share of cells blanked out at random.
    #[serde(default)]
    pub missing_rate: f64,
}

fn default_classes() -> usize {
    8
}

impl FixtureSpec {
    /// Twelve variables shaped like a small census extract: two numeric
    /// (AGE, HOURS) and ten categorical ones.
    pub fn census(rows: usize, dependence: f64) -> Self {
        FixtureSpec {
            rows,
            variables: vec![
                cat("AREAP", 8),
                num("AGE", 0.0, 95.0),
                cat("SEX", 2),
                cat("MSTATUS", 5),
                cat("ETHGROUP", 6),
                cat("ECONPRIM", 7),
                cat("LTILL", 2),
                cat("FAMTYPE", 5),
                cat("TENURE", 6),
                cat("QUALNUM", 4),
                cat("SOCLASS", 7),
                num("HOURS", 0.0, 80.0),
            ],
            classes: default_classes(),
            dependence,
            missing_rate: 0.0,
        }
    }

    /// `categorical` variables `C1..` with `cardinality` levels each, then
    /// `numeric` variables `N1..` in `[0, 100]`.
    pub fn generic(rows: usize, categorical: usize, numeric: usize, cardinality: usize, dependence: f64) -> Self {
        let mut variables: Vec<_> = (1..=categorical).map(|i| cat(&format!("C{i}"), cardinality)).collect();
        variables.extend((1..=numeric).map(|i| num(&format!("N{i}"), 0.0, 100.0)));
        FixtureSpec {
            rows,
            variables,
            classes: default_classes(),
            dependence,
            missing_rate: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(format!("fixture: {m}")));
        if self.rows == 0 {
            return bad("rows must be >= 1".into());
        }
        if self.classes == 0 {
            return bad("classes must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.dependence) {
            return bad(format!("dependence {} not in [0, 1]", self.dependence));
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return bad(format!("missing_rate {} not in [0, 1)", self.missing_rate));
        }
        for v in &self.variables {
            match v {
                FixtureVariable::Categorical { name, categories } if *categories < 2 => {
                    return bad(format!("`{name}` needs at least 2 categories"));
                }
                FixtureVariable::Numeric { name, min, max } if !(min < max) => {
                    return bad(format!("`{name}` needs min < max"));
                }
                _ => {}
            }
        }
        self.schema().map(|_| ())
    }

    pub fn schema(&self) -> Result<Schema> {
        Schema::new(self.variables.iter().map(FixtureVariable::spec).collect())
    }
}

/// Flat Dirichlet draw.
fn random_simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

fn draw_index(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Per-variable, per-class generating parameters.
enum Model {
    Categorical(Vec<Vec<f64>>),
    Numeric { means: Vec<f64>, sd: f64, min: f64, max: f64 },
}

fn build_model(v: &FixtureVariable, spec: &FixtureSpec, rng: &mut ChaCha8Rng) -> Model {
    let d = spec.dependence;
    match *v {
        FixtureVariable::Categorical { categories: k, .. } => {
            let shared = random_simplex(rng, k);
            let per_class = (0..spec.classes)
                .map(|_| {
                    let peak = rng.random_range(0..k);
                    let peaked: Vec<f64> = (0..k).map(|j| if j == peak { 0.95 } else { 0.05 / (k - 1) as f64 }).collect();
                    shared.iter().zip(&peaked).map(|(s, p)| (1.0 - d) * s + d * p).collect()
                })
                .collect();
            Model::Categorical(per_class)
        }
        FixtureVariable::Numeric { min, max, .. } => {
            let centre = (min + max) / 2.0;
            let means = (0..spec.classes)
                .map(|_| centre + d * (rng.random_range(min..max) - centre))
                .collect();
            Model::Numeric {
                means,
                sd: (max - min) / 6.0,
                min,
                max,
            }
        }
    }
}

/// Generate a population. Identical `(spec, seed)` give identical tables.
pub fn generate(spec: &FixtureSpec, seed: u64) -> Result<MicroTable> {
    spec.validate()?;
    let schema = spec.schema()?;
    let class_weights = random_simplex(&mut seed::rng(seed::derive(seed, u64::MAX)), spec.classes)
        .into_iter()
        .map(|w| 0.5 / spec.classes as f64 + 0.5 * w)
        .collect::<Vec<_>>();
    let mut class_rng = seed::rng(seed::derive(seed, u64::MAX - 1));
    let classes: Vec<usize> = (0..spec.rows).map(|_| draw_index(&mut class_rng, &class_weights)).collect();

    let columns = spec
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let model = build_model(v, spec, &mut seed::rng(seed::derive(seed, 2 * i as u64)));
            let mut rng = seed::rng(seed::derive(seed, 2 * i as u64 + 1));
            let blank = |rng: &mut ChaCha8Rng| spec.missing_rate > 0.0 && rng.random::<f64>() < spec.missing_rate;
            match model {
                Model::Categorical(per_class) => Column::Categorical(
                    classes
                        .iter()
                        .map(|&c| {
                            let level = draw_index(&mut rng, &per_class[c]) as u32;
                            (!blank(&mut rng)).then_some(level)
                        })
                        .collect(),
                ),
                Model::Numeric { means, sd, min, max } => Column::Numeric(
                    classes
                        .iter()
                        .map(|&c| {
                            let x = (means[c] + sd * standard_normal(&mut rng)).round().clamp(min, max);
                            (!blank(&mut rng)).then_some(x)
                        })
                        .collect(),
                ),
            }
        })
        .collect();
    MicroTable::new(schema, columns)
}

/// Schema file written next to a fixture CSV: `toy.csv` -> `toy_schema.toml`.
pub fn schema_path_for(csv_path: &Path) -> PathBuf {
    let stem = csv_path.file_stem().and_then(|s| s.to_str()).unwrap_or("fixture");
    csv_path.with_file_name(format!("{stem}_schema.toml"))
}

/// Generate and write the CSV plus its schema; returns the schema path.
pub fn write_fixture(spec: &FixtureSpec, seed: u64, csv_path: impl AsRef<Path>) -> Result<PathBuf> {
    let csv_path = csv_path.as_ref();
    let table = generate(spec, seed)?;
    save_csv(&table, csv_path)?;
    let schema_path = schema_path_for(csv_path);
    table.schema().save(&schema_path)?;
    Ok(schema_path)
}

/// Bias-uncorrected Cramér's V between two categorical columns, Missing
/// excluded pairwise.
pub fn cramers_v(t: &MicroTable, a: &str, b: &str) -> Result<f64> {
    let (fa, fb) = (t.factor(a)?, t.factor(b)?);
    let (ka, kb) = (fa.levels as usize - 1, fb.levels as usize - 1);
    let mut table = vec![vec![0f64; kb]; ka];
    let mut n = 0.0;
    for (&x, &y) in fa.codes.iter().zip(&fb.codes) {
        if (x as usize) < ka && (y as usize) < kb {
            table[x as usize][y as usize] += 1.0;
            n += 1.0;
        }
    }
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..kb).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let mut chi2 = 0.0;
    for i in 0..ka {
        for j in 0..kb {
            let e = rows[i] * cols[j] / n;
            if e > 0.0 {
                chi2 += (table[i][j] - e).powi(2) / e;
            }
        }
    }
    let r_eff = rows.iter().filter(|&&r| r > 0.0).count();
    let c_eff = cols.iter().filter(|&&c| c > 0.0).count();
    let m = r_eff.min(c_eff).saturating_sub(1);
    if m == 0 || n == 0.0 {
        return Ok(0.0);
    }
    Ok((chi2 / (n * m as f64)).sqrt())
}

/// Mean Cramér's V over all pairs of categorical variables.
pub fn mean_cramers_v(t: &MicroTable) -> Result<f64> {
    let names: Vec<&str> = t
        .schema()
        .variables
        .iter()
        .filter(|v| v.kind == VariableKind::Categorical)
        .map(|v| v.name.as_str())
        .collect();
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            total += cramers_v(t, names[i], names[j])?;
            pairs += 1;
        }
    }
    Ok(if pairs == 0 { 0.0 } else { total / pairs as f64 })
}
