//! Risk-utility map as a standalone SVG: the sample curve as a labelled
//! polyline, synthetic datasets as distinct markers, and a legend.
//!
//! Output depends only on the inputs, so reruns are byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use crate::equivalence::format_percent;
use crate::error::{Error, Result};
use crate::report::ScoreRow;
use crate::sampling::RUCurve;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Sample,
    Synthetic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RUPoint {
    pub label: String,
    pub utility: f64,
    pub risk: f64,
    pub kind: PointKind,
    pub fraction: Option<f64>,
}

impl RUPoint {
    pub fn synthetic(label: impl Into<String>, utility: f64, risk: f64) -> Self {
        RUPoint {
            label: label.into(),
            utility,
            risk,
            kind: PointKind::Synthetic,
            fraction: None,
        }
    }
}

/// Curve points (terminal included) as sample points labelled by fraction.
pub fn sample_points(curve: &RUCurve) -> Vec<RUPoint> {
    curve
        .with_terminal()
        .into_iter()
        .map(|p| RUPoint {
            label: format_percent(p.fraction),
            utility: p.mean_utility,
            risk: p.mean_risk,
            kind: PointKind::Sample,
            fraction: Some(p.fraction),
        })
        .collect()
}

/// One synthetic point per label: the mean over its replicate rows.
pub fn synthetic_points(rows: &[ScoreRow]) -> Vec<RUPoint> {
    crate::report::group_scores(rows)
        .into_iter()
        .map(|(label, v)| {
            let n = v.len() as f64;
            let u = v.iter().map(|p| p.0).sum::<f64>() / n;
            let r = v.iter().map(|p| p.1).sum::<f64>() / n;
            RUPoint::synthetic(label, u, r)
        })
        .collect()
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, u: f64) -> f64 {
        LEFT + u.clamp(0.0, 1.0) * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, r: f64) -> f64 {
        let h = HEIGHT - TOP - BOTTOM;
        TOP + (self.y_max - r) / (self.y_max - self.y_min) * h
    }
}

fn marker(shape: usize, x: f64, y: f64, colour: &str) -> String {
    let s = 6.0;
    match shape % 4 {
        0 => format!(
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{colour}"/>"#,
            x - s,
            y - s,
            2.0 * s,
            2.0 * s
        ),
        1 => format!(
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{colour}"/>"#,
            x,
            y - s,
            x - s,
            y + s,
            x + s,
            y + s
        ),
        2 => format!(
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{colour}"/>"#,
            x,
            y - s,
            x + s,
            y,
            x,
            y + s,
            x - s,
            y
        ),
        _ => format!(
            r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="{colour}" stroke-width="3"/>"#,
            x - s,
            y - s,
            x + s,
            y + s,
            x - s,
            y + s,
            x + s,
            y - s
        ),
    }
}

/// Render the map. The risk axis spans at least `[0, 1]` and extends in
/// steps of 0.1 to cover every point.
pub fn render_svg(curve: &RUCurve, synthetic: &[RUPoint]) -> String {
    let samples = sample_points(curve);
    let all_risk = samples.iter().chain(synthetic).map(|p| p.risk);
    let lo = all_risk.clone().fold(0.0f64, f64::min);
    let hi = all_risk.fold(1.0f64, f64::max);
    let frame = Frame {
        y_min: (lo * 10.0).floor() / 10.0,
        y_max: (hi * 10.0).ceil() / 10.0,
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // axes and ticks
    let (x0, x1) = (frame.x(0.0), frame.x(1.0));
    let (yb, yt) = (frame.y(frame.y_min), frame.y(frame.y_max));
    let _ = writeln!(s, r#"<g class="axes" stroke="black">"#);
    let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{yb:.2}" x2="{x1:.2}" y2="{yb:.2}"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{yb:.2}" x2="{x0:.2}" y2="{yt:.2}"/>"#);
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="ticks">"#);
    for i in 0..=5 {
        let u = i as f64 / 5.0;
        let x = frame.x(u);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{yb:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{u:.1}</text>"#,
            yb + 5.0,
            yb + 18.0
        );
    }
    let steps = ((frame.y_max - frame.y_min) * 10.0).round() as i64;
    let stride = if steps > 12 { 2 } else { 1 };
    for i in (0..=steps).step_by(stride) {
        let r = frame.y_min + i as f64 / 10.0;
        let y = frame.y(r);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{r:.1}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(s, "</g>");
    if frame.y_min < 0.0 {
        let y = frame.y(0.0);
        let _ = writeln!(
            s,
            r##"<line class="zero" x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#999999" stroke-dasharray="4 3"/>"##
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">Utility</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle" font-size="13">Risk (marginal TCAP)</text>"#,
        (yb + yt) / 2.0
    );

    // sample curve
    let coords: Vec<String> = samples
        .iter()
        .map(|p| format!("{:.2},{:.2}", frame.x(p.utility), frame.y(p.risk)))
        .collect();
    let _ = writeln!(s, r#"<g class="samples">"#);
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
        coords.join(" ")
    );
    for p in &samples {
        let (x, y) = (frame.x(p.utility), frame.y(p.risk));
        let _ = writeln!(
            s,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#1f77b4"/><text x="{:.2}" y="{:.2}" font-size="9">{}</text>"##,
            x + 4.0,
            y - 4.0,
            escape(&p.label)
        );
    }
    let _ = writeln!(s, "</g>");

    // synthetic markers
    for (i, p) in synthetic.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let (x, y) = (frame.x(p.utility), frame.y(p.risk));
        let _ = writeln!(
            s,
            r#"<g class="synthetic">{}<text x="{:.2}" y="{:.2}">{}</text></g>"#,
            marker(i, x, y, colour),
            x + 9.0,
            y + 4.0,
            escape(&p.label)
        );
    }

    // legend
    let lx = WIDTH - RIGHT + 20.0;
    let mut ly = TOP + 10.0;
    let _ = writeln!(s, r#"<g class="legend">"#);
    let _ = writeln!(
        s,
        r##"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="#1f77b4" stroke-width="1.5"/><text x="{:.2}" y="{:.2}">Samples</text>"##,
        lx + 16.0,
        lx + 22.0,
        ly + 4.0
    );
    for (i, p) in synthetic.iter().enumerate() {
        ly += 20.0;
        let _ = writeln!(
            s,
            r#"{}<text x="{:.2}" y="{:.2}">{}</text>"#,
            marker(i, lx + 8.0, ly, PALETTE[i % PALETTE.len()]),
            lx + 22.0,
            ly + 4.0,
            escape(&p.label)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

pub fn save_svg(curve: &RUCurve, synthetic: &[RUPoint], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_svg(curve, synthetic)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::CurvePoint;

    fn curve() -> RUCurve {
        let p = |fraction, u, r| CurvePoint {
            fraction,
            mean_utility: u,
            mean_risk: r,
            sd_utility: 0.0,
            sd_risk: 0.0,
            n_replicates: 1,
        };
        RUCurve::from_points(vec![p(0.01, 0.4, 0.05), p(0.1, 0.7, 0.3)]).unwrap()
    }

    #[test]
    fn curve_only() {
        let svg = render_svg(&curve(), &[]);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(!svg.contains(r#"class="synthetic""#));
        assert!(svg.contains(">1%</text>"));
        assert!(svg.contains(">100%</text>"));
        assert!(!svg.contains(r#"class="zero""#));
    }

    #[test]
    fn negative_risk_extends_axis() {
        let svg = render_svg(&curve(), &[RUPoint::synthetic("dp", 0.2, -0.1)]);
        assert!(svg.contains(">-0.1</text>"));
        assert!(svg.contains(r#"class="zero""#));
        assert_eq!(svg.matches(r#"class="synthetic""#).count(), 1);
        let legend = &svg[svg.find(r#"class="legend""#).unwrap()..];
        assert!(legend.contains(">dp</text>"));
    }

    #[test]
    fn labels_escaped_and_output_stable() {
        let pts = [RUPoint::synthetic("a<b>&c", 0.5, 0.5)];
        let svg = render_svg(&curve(), &pts);
        assert!(svg.contains("a&lt;b&gt;&amp;c"));
        assert_eq!(svg, render_svg(&curve(), &pts));
    }
}
