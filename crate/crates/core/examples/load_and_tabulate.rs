//! Write a toy population to disk, load it back against its schema and
//! tabulate a few variables.
//!
//!     cargo run --example load_and_tabulate

use ruequiv::binning::Binning;
use ruequiv::data::{column_proportions, load_csv, Schema};
use ruequiv::fixture::{write_fixture, FixtureSpec};
use ruequiv::tabulate::factor_pair;

fn main() -> ruequiv::Result<()> {
    let dir = std::env::temp_dir().join("ruequiv-load");
    std::fs::create_dir_all(&dir).map_err(|e| ruequiv::Error::io(&dir, e))?;
    let csv = dir.join("people.csv");
    let schema_path = write_fixture(&FixtureSpec::census(2_000, 0.8), 7, &csv)?;

    let schema = Schema::load(&schema_path)?;
    let table = load_csv(&csv, &schema)?;
    println!("{} rows x {} variables from {}", table.n_rows(), schema.len(), csv.display());

    let tenure = schema.index_of("TENURE")?;
    println!("\nTENURE proportions (Missing included):");
    for (level, p) in column_proportions(&table, "TENURE", true)? {
        println!("  {:>9}  {p:.4}", table.level_label(tenure, level));
    }

    // Numeric variables are tabulated through a binning rule; the cut points
    // come from the original and apply to both tables.
    let half = table.take_rows(&(0..table.n_rows()).step_by(2).collect::<Vec<_>>());
    let age = factor_pair(&table, &half, "AGE", Some(&Binning::Width { width: 10.0, origin: 0.0 }))?;
    let (full, sub) = (age.original.counts(), age.other.counts());
    println!("\nAGE in 10-year bins, full table vs every other row:");
    for (bin, (a, b)) in full.iter().zip(&sub).enumerate() {
        let label = if bin as u32 == age.levels - 1 { "missing".to_string() } else { format!("bin {bin}") };
        println!("  {label:>9}  {a:>5}  {b:>5}");
    }
    Ok(())
}
