use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ruequiv::commands::{self, Loaded};
use ruequiv::config::EvaluationConfig;
use ruequiv::equivalence::LocateOptions;
use ruequiv::fixture::FixtureSpec;
use ruequiv::report;
use ruequiv::{Error, Result};

/// Score synthetic microdata against its original and express risk and
/// utility as an equivalent sample fraction.
#[derive(Parser)]
#[command(name = "ruequiv", version)]
struct Cli {
    /// Worker threads for replicate evaluation (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score synthetic files against the original.
    Evaluate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        original: PathBuf,
        /// Synthetic CSV files, scored and averaged under one label.
        #[arg(required = true)]
        synth: Vec<PathBuf>,
        #[arg(long, default_value = "synthetic")]
        label: String,
        /// Keep other labels already in the output file.
        #[arg(long)]
        append: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the sample-fraction reference curve.
    Curve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Locate scored synthesizers on a curve.
    Equivalence {
        /// Only the `[equivalence]` section is read.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw the risk-utility map as SVG.
    Rumap {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        scores: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate synthetic replicates with a reference synthesizer.
    Synthesize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a toy population CSV and its schema.
    MakeFixture {
        #[arg(long, value_enum, default_value = "census")]
        preset: Preset,
        #[arg(long, default_value_t = 10_000)]
        rows: usize,
        #[arg(long, default_value_t = 0.9)]
        dependence: f64,
        /// Generic preset only.
        #[arg(long, default_value_t = 6)]
        categorical: usize,
        /// Generic preset only.
        #[arg(long, default_value_t = 2)]
        numeric: usize,
        /// Generic preset only.
        #[arg(long, default_value_t = 5)]
        cardinality: usize,
        #[arg(long, default_value_t = 0.0)]
        missing_rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Census,
    Generic,
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Error::Config(format!("--jobs: {e}")))?;
    }
    match cli.command {
        Command::Evaluate {
            config,
            original,
            synth,
            label,
            append,
            seed,
            out,
        } => {
            let inputs: Loaded = commands::load_inputs(&config, &original, seed)?;
            let mut rows = commands::cmd_evaluate(&inputs, &synth, &label)?;
            if append && out.exists() {
                rows = commands::merge_scores(report::load_scores(&out)?, rows);
            }
            report::save_scores(&rows, &out)
        }
        Command::Curve {
            config,
            original,
            seed,
            out,
        } => {
            let inputs = commands::load_inputs(&config, &original, seed)?;
            let curve = commands::cmd_curve(&inputs)?;
            report::save_curve(&curve, &out)?;
            if let Some(reps) = &curve.replicates {
                report::save_replicates(reps, commands::replicates_path_for(&out))?;
            }
            Ok(())
        }
        Command::Equivalence {
            config,
            curve,
            scores,
            out,
        } => {
            let opts = match config {
                Some(c) => LocateOptions::from(EvaluationConfig::load(c)?.equivalence),
                None => LocateOptions::default(),
            };
            let lines = commands::cmd_equivalence(&curve, &scores, opts)?;
            report::save_equivalence(&lines, &out)
        }
        Command::Rumap { curve, scores, out } => write_text(&out, &commands::cmd_rumap(&curve, scores.as_deref())?),
        Command::Synthesize {
            config,
            original,
            seed,
            out,
        } => {
            let inputs = commands::load_inputs(&config, &original, seed)?;
            for path in commands::cmd_synthesize(&inputs, &original, &out)? {
                log::info!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::MakeFixture {
            preset,
            rows,
            dependence,
            categorical,
            numeric,
            cardinality,
            missing_rate,
            seed,
            out,
        } => {
            let mut spec = match preset {
                Preset::Census => FixtureSpec::census(rows, dependence),
                Preset::Generic => FixtureSpec::generic(rows, categorical, numeric, cardinality, dependence),
            };
            spec.missing_rate = missing_rate;
            let schema = commands::cmd_make_fixture(&spec, seed, &out)?;
            log::info!("wrote {} and {}", out.display(), schema.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
