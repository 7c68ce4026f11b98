//! Toy populations with controllable association strength.
//!
//!     cargo run --release --example make_fixture

use ruequiv::fixture::{generate, mean_cramers_v, write_fixture, FixtureSpec};

fn main() -> ruequiv::Result<()> {
    for dependence in [0.0, 0.3, 0.6, 0.9, 1.0] {
        let t = generate(&FixtureSpec::generic(10_000, 6, 2, 5, dependence), 1)?;
        println!("dependence {dependence:.1}: mean Cramér's V {:.3}", mean_cramers_v(&t)?);
    }

    let mut spec = FixtureSpec::census(1_000, 0.9);
    spec.missing_rate = 0.02;
    let csv = std::env::temp_dir().join("census_toy.csv");
    let schema = write_fixture(&spec, 2022, &csv)?;
    println!("\nwrote {} and {}", csv.display(), schema.display());
    Ok(())
}
