//! Attribution risk of a released table: raw TCAP, the baseline guess and
//! marginal TCAP, per target and key-set size.
//!
//!     cargo run --release --example tcap_risk

use ruequiv::binning::Binning;
use ruequiv::fixture::{generate, FixtureSpec};
use ruequiv::risk::{baseline_cap, overall_risk, weap_table, AttackConfig};
use ruequiv::sampling::draw_sample;
use ruequiv::synth::{synth_cart, synth_independent, CartParams};

fn main() -> ruequiv::Result<()> {
    let original = generate(&FixtureSpec::census(5_000, 0.9), 11)?;
    let attack = AttackConfig::new(
        ["AREAP", "AGE", "SEX", "MSTATUS", "ETHGROUP", "ECONPRIM"],
        ["LTILL", "FAMTYPE", "TENURE"],
    )
    .with_binning("AGE", Binning::Width { width: 1.0, origin: 0.0 });

    for target in &attack.targets {
        println!("baseline {target}: {:.4}", baseline_cap(&original, target)?);
    }

    let classes = weap_table(&original, &["AREAP", "SEX", "MSTATUS"], "TENURE")?;
    let unanimous = classes.values().filter(|e| e.weap == 1.0).count();
    println!("\n{} key classes on 3 keys, {unanimous} unanimous for TENURE", classes.len());

    let released = [
        ("original", original.clone()),
        ("10% sample", draw_sample(&original, 0.1, 1)?),
        ("cart", synth_cart(&original, original.n_rows(), 1, &CartParams::default())?),
        ("independent", synth_independent(&original, original.n_rows(), 1)?),
    ];
    for (label, table) in &released {
        let risk = overall_risk(&original, table, &attack)?;
        println!(
            "\n{label}: marginal TCAP {:.4} (raw {:.4}, baseline {:.4}, {} pairs without matches)",
            risk.marginal, risk.raw_tcap, risk.baseline, risk.no_match_pairs
        );
        for p in &risk.pairs {
            println!(
                "  {:<8} keys={}  raw={:.4}  marginal={:+.4}  matched={:.3}",
                p.target, p.key_size, p.raw_tcap, p.marginal, p.matched_fraction
            );
        }
    }
    Ok(())
}
