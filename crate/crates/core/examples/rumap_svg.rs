//! Draw a risk-utility map: the sample curve plus synthetic points,
//! including one below the baseline risk.
//!
//!     cargo run --example rumap_svg

use ruequiv::rumap::{save_svg, RUPoint};
use ruequiv::sampling::{CurvePoint, RUCurve};

fn main() -> ruequiv::Result<()> {
    let fractions = [0.001, 0.01, 0.03, 0.1, 0.3, 0.6, 0.9];
    let points = fractions
        .iter()
        .map(|&f: &f64| CurvePoint {
            fraction: f,
            mean_utility: 1.0 - 0.75 * (1.0 - f).powi(3) - 0.05 * (-f * 30.0).exp(),
            sd_utility: 0.0,
            mean_risk: 0.55 + 0.45 * f,
            sd_risk: 0.0,
            n_replicates: 1,
        })
        .collect();
    let curve = RUCurve::from_points(points)?;
    let synthetic = [
        RUPoint::synthetic("cart", 0.77, 0.52),
        RUPoint::synthetic("gan", 0.55, 0.18),
        RUPoint::synthetic("dp", 0.35, -0.08),
    ];
    let out = std::env::temp_dir().join("rumap.svg");
    save_svg(&curve, &synthetic, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}
