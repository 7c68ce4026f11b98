//! Express synthetic data as an equivalent sample fraction: score a few
//! synthesizers, place their mean utility and risk on the sample curve, and
//! print the report.
//!
//!     cargo run --release --example equivalence_report

use ruequiv::config::EvaluationConfig;
use ruequiv::equivalence::LocateOptions;
use ruequiv::fixture::{generate, FixtureSpec};
use ruequiv::report::{equivalence_report, write_equivalence, ScoreRow};
use ruequiv::sampling::{build_curve, CurveOptions, FractionGrid, ReplicatePlan};
use ruequiv::synth::{synth_cart, synth_independent};

fn main() -> ruequiv::Result<()> {
    let cfg = EvaluationConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/toy.toml"))?;
    let eval = cfg.evaluation();
    let original = generate(&FixtureSpec::census(4_000, 0.9), 2022)?;

    let grid = FractionGrid::new(vec![0.001, 0.005, 0.01, 0.05, 0.1, 0.2, 0.5, 0.9])?;
    let plan = ReplicatePlan { replicates: 8, base_seed: 1 };
    let curve = build_curve(&original, &grid, &plan, &eval, CurveOptions::default())?;

    let n = original.n_rows();
    let mut rows = Vec::new();
    for seed in 0..3 {
        let cart = synth_cart(&original, n, seed, &cfg.synth.cart)?;
        rows.push(ScoreRow::replicate("cart", &format!("cart_{seed}"), &eval.score(&original, &cart)?));
        let indep = synth_independent(&original, n, seed)?;
        rows.push(ScoreRow::replicate("independent", &format!("independent_{seed}"), &eval.score(&original, &indep)?));
    }
    rows.push(ScoreRow::replicate("original", "original", &eval.score(&original, &original)?));

    let lines = equivalence_report(&rows, &curve, LocateOptions::default())?;
    let mut out = Vec::new();
    write_equivalence(&lines, &mut out)?;
    print!("{}", String::from_utf8_lossy(&out));
    for l in &lines {
        println!(
            "{:<12} interpolated fraction: utility {:?}, risk {:?}",
            l.label, l.result.utility_interpolated, l.result.risk_interpolated
        );
    }
    Ok(())
}
