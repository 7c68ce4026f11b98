//! Utility of released tables: univariate and bivariate ratio of counts and
//! confidence-interval overlap of two logistic regressions.
//!
//!     cargo run --release --example utility_scores

use ruequiv::fixture::{generate, FixtureSpec};
use ruequiv::sampling::draw_sample;
use ruequiv::synth::{synth_cart, CartParams};
use ruequiv::utility::{utility_report, FitFailurePolicy, RegressionSpec, UtilityConfig};

fn spec(name: &str, target: &str, positive: &[&str], swap: &str) -> RegressionSpec {
    let mut predictors: Vec<String> = ["AGE", "ECONPRIM", "ETHGROUP", "LTILL", "QUALNUM", "SEX", "SOCLASS"]
        .map(String::from)
        .to_vec();
    predictors.push(swap.into());
    RegressionSpec {
        name: name.into(),
        target: target.into(),
        positive: positive.iter().map(|s| s.to_string()).collect(),
        predictors,
    }
}

fn main() -> ruequiv::Result<()> {
    let original = generate(&FixtureSpec::census(5_000, 0.9), 3)?;
    let mut cfg = UtilityConfig::new(vec![
        spec("married", "MSTATUS", &["2"], "TENURE"),
        spec("owner_occupied", "TENURE", &["1", "2"], "MSTATUS"),
    ]);
    cfg.fit_failure = FitFailurePolicy::ScoreZero;

    let released = [
        ("original", original.clone()),
        ("20% sample", draw_sample(&original, 0.2, 5)?),
        ("1% sample", draw_sample(&original, 0.01, 5)?),
        ("cart", synth_cart(&original, original.n_rows(), 5, &CartParams::default())?),
    ];
    for (label, table) in &released {
        let report = utility_report(&original, table, &cfg)?;
        let s = report.score;
        println!(
            "{label:<11} overall {:.4} | uni ROC {:.4} | bi ROC {:.4} | CIO {:.4}",
            s.overall, s.roc_univariate, s.roc_bivariate, s.cio
        );
        for m in &report.cio.models {
            match &m.failure {
                Some(why) => println!("    {:<15} scored 0: {why}", m.name),
                None => println!("    {:<15} {:.4} over {} coefficients", m.name, m.score, m.coefficients.len()),
            }
        }
    }
    Ok(())
}
