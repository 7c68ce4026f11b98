//! The command-line operations as library calls; the binary only parses
//! arguments and maps errors to exit codes.

use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{EvaluationConfig, SynthMethod};
use crate::data::{load_csv, save_csv, MicroTable, Schema};
use crate::equivalence::LocateOptions;
use crate::error::{Error, Result};
use crate::fixture::{write_fixture, FixtureSpec};
use crate::report::{self, EquivalenceLine, ScoreRow};
use crate::rumap;
use crate::sampling::{build_curve, CurveOptions, RUCurve};
use crate::seed;
use crate::synth::{load_external_synth, synth_cart, synth_independent, CartParams};

/// Config, its schema and the original table, validated together.
pub struct Loaded {
    pub config: EvaluationConfig,
    pub schema: Schema,
    pub original: MicroTable,
}

pub fn load_inputs(config: &Path, original: &Path, seed: Option<u64>) -> Result<Loaded> {
    let mut config = EvaluationConfig::load(config)?;
    if let Some(s) = seed {
        config = config.with_seed(s);
    }
    let schema = config.load_schema()?;
    config.validate(&schema)?;
    let original = load_csv(original, &schema).map_err(|e| e.context(original.display().to_string()))?;
    Ok(Loaded {
        config,
        schema,
        original,
    })
}

/// Score each synthetic file against the original: one row per file, then
/// their mean. Every file is attempted; the first failure is returned.
pub fn cmd_evaluate(inputs: &Loaded, synth_files: &[PathBuf], label: &str) -> Result<Vec<ScoreRow>> {
    if synth_files.is_empty() {
        return Err(Error::Config("evaluate needs at least one synthetic file".into()));
    }
    let eval = inputs.config.evaluation();
    let mut rows = Vec::new();
    let mut first_error = None;
    for path in synth_files {
        let scored = load_external_synth(path, &inputs.schema).and_then(|t| eval.score(&inputs.original, &t));
        match scored {
            Ok(s) => rows.push(ScoreRow::replicate(label, &path.display().to_string(), &s)),
            Err(e) => {
                let e = e.context(path.display().to_string());
                log::error!("{e}");
                first_error.get_or_insert(e);
            }
        }
    }
    if let Some(e) = first_error {
        return Err(e);
    }
    let mean = ScoreRow::mean(label, &rows);
    rows.push(mean);
    Ok(rows)
}

/// Replace any rows carrying `label` in an existing scores file by `rows`.
pub fn merge_scores(existing: Vec<ScoreRow>, rows: Vec<ScoreRow>) -> Vec<ScoreRow> {
    let label = rows.first().map(|r| r.label.clone());
    let mut out: Vec<ScoreRow> = existing.into_iter().filter(|r| Some(&r.label) != label.as_ref()).collect();
    out.extend(rows);
    out
}

pub fn cmd_curve(inputs: &Loaded) -> Result<RUCurve> {
    let s = &inputs.config.sampling;
    build_curve(
        &inputs.original,
        &s.fractions,
        &s.plan(),
        &inputs.config.evaluation(),
        CurveOptions {
            store_replicates: s.store_replicates,
        },
    )
}

/// Replicate rows next to a curve file: `curve.csv` -> `curve_replicates.csv`.
pub fn replicates_path_for(curve_path: &Path) -> PathBuf {
    let stem = curve_path.file_stem().and_then(|s| s.to_str()).unwrap_or("curve");
    curve_path.with_file_name(format!("{stem}_replicates.csv"))
}

pub fn cmd_equivalence(curve_csv: &Path, scores_csv: &Path, opts: LocateOptions) -> Result<Vec<EquivalenceLine>> {
    let curve = report::load_curve(curve_csv)?;
    let rows = report::load_scores(scores_csv)?;
    report::equivalence_report(&rows, &curve, opts)
}

pub fn cmd_rumap(curve_csv: &Path, scores_csv: Option<&Path>) -> Result<String> {
    let curve = report::load_curve(curve_csv)?;
    let points = match scores_csv {
        Some(p) => rumap::synthetic_points(&report::load_scores(p)?),
        None => Vec::new(),
    };
    Ok(rumap::render_svg(&curve, &points))
}

/// How a synthetic file was made, written next to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: SynthMethod,
    pub replicate: usize,
    /// Written as a string: TOML integers stop at `i64::MAX`.
    #[serde(with = "seed_string")]
    pub seed: u64,
    pub rows: usize,
    pub original_sha256: String,
    pub cart: Option<CartParams>,
}

mod seed_string {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u64, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

impl Provenance {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("provenance: {e}")))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("provenance serialises")
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(format!("{:x}", hasher.finalize()))
}

/// Seed of synthetic replicate `i` under a run seed.
pub fn synth_seed(run_seed: u64, replicate: usize) -> u64 {
    seed::derive(run_seed, replicate as u64)
}

/// Write `synth_1.csv` .. `synth_m.csv` into `out_dir`, each with a
/// `.provenance.toml` sidecar. Returns the CSV paths.
pub fn cmd_synthesize(inputs: &Loaded, original_path: &Path, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let cfg = &inputs.config.synth;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let digest = sha256_file(original_path)?;
    let rows = cfg.rows.unwrap_or(inputs.original.n_rows());
    (0..cfg.replicates)
        .map(|i| {
            let s = synth_seed(cfg.seed, i);
            let table = match cfg.method {
                SynthMethod::Cart => synth_cart(&inputs.original, rows, s, &cfg.cart)?,
                SynthMethod::Independent => synth_independent(&inputs.original, rows, s)?,
            };
            let path = out_dir.join(format!("synth_{}.csv", i + 1));
            save_csv(&table, &path)?;
            let prov = Provenance {
                method: cfg.method,
                replicate: i + 1,
                seed: s,
                rows,
                original_sha256: digest.clone(),
                cart: (cfg.method == SynthMethod::Cart).then_some(cfg.cart),
            };
            let side = path.with_extension("provenance.toml");
            std::fs::write(&side, prov.to_toml_string()).map_err(|e| Error::io(&side, e))?;
            Ok(path)
        })
        .collect()
}

pub fn cmd_make_fixture(spec: &FixtureSpec, seed: u64, out_csv: &Path) -> Result<PathBuf> {
    write_fixture(spec, seed, out_csv)
}
