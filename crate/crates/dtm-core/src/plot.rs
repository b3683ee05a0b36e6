//! Dependency-light SVG line plots: density curves and CLT overlays.
//!
//! Fixed 800x600 viewBox, straight polylines, palette keyed by label.

use crate::kde::{self, DensityEstimate};
use crate::validate::CltResult;
use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
    "#1f78b4", "#b2182b",
];

/// One named curve.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn palette_color(label: &str, labels_sorted: &[&str]) -> &'static str {
    let idx = labels_sorted.iter().position(|l| *l == label).unwrap_or(0);
    PALETTE[idx % PALETTE.len()]
}

/// Render series into a single 800x600 SVG document. Colors are assigned by
/// the sorted order of the distinct labels, so the same label always maps
/// to the same color.
pub fn line_plot_svg(series: &[Series]) -> String {
    let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
    let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in &s.points {
            xs = (xs.0.min(x), xs.1.max(x));
            ys = (ys.0.min(y), ys.1.max(y));
        }
    }
    if !xs.0.is_finite() || xs.1 <= xs.0 {
        xs = (0.0, 1.0);
    }
    if !ys.0.is_finite() || ys.1 <= ys.0 {
        ys = (0.0, 1.0);
    }
    let span_x = xs.1 - xs.0;
    let span_y = ys.1 - ys.0;
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN + (x - xs.0) / span_x * (WIDTH - 2.0 * MARGIN),
            HEIGHT - MARGIN - (y - ys.0) / span_y * (HEIGHT - 2.0 * MARGIN),
        )
    };

    let mut labels: Vec<&str> = series.iter().map(|s| s.label.as_str()).collect();
    labels.sort_unstable();
    labels.dedup();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    // axes
    let (x0, y0) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"black\"/>",
        WIDTH - MARGIN
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{MARGIN}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{x0}\" y=\"{}\" font-size=\"12\">{:.4}</text>",
        HEIGHT - MARGIN / 3.0,
        xs.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{:.4}</text>",
        WIDTH - MARGIN,
        HEIGHT - MARGIN / 3.0,
        xs.1
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{MARGIN}\" font-size=\"12\">{:.4}</text>",
        MARGIN / 6.0,
        ys.1
    );

    for s in series {
        if s.points.len() < 2 {
            continue;
        }
        let color = palette_color(&s.label, &labels);
        let mut path = String::new();
        for &(x, y) in &s.points {
            let (px, py) = to_px(x, y);
            let _ = write!(path, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            path.trim_end()
        );
    }
    // legend
    for (i, label) in labels.iter().enumerate() {
        let y = MARGIN + 16.0 * i as f64;
        let color = palette_color(label, &labels);
        let _ = writeln!(
            svg,
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{color}\"/>",
            WIDTH - MARGIN - 140.0,
            y
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\">{label}</text>",
            WIDTH - MARGIN - 125.0,
            y + 9.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// One curve per density estimate, labeled.
pub fn density_plot_svg(estimates: &[(&str, &DensityEstimate)]) -> String {
    let series: Vec<Series> = estimates
        .iter()
        .map(|(label, est)| Series {
            label: label.to_string(),
            points: est.grid.iter().copied().zip(est.values.iter().copied()).collect(),
        })
        .collect();
    line_plot_svg(&series)
}

/// Overlay of the smoothed Monte Carlo statistic distributions against
/// their limiting normal density.
pub fn clt_overlay_svg(result: &CltResult) -> String {
    let sd = result.target_variance.sqrt();
    let normal_pdf = |x: f64| {
        (-0.5 * x * x / result.target_variance).exp()
            / (sd * (2.0 * std::f64::consts::PI).sqrt())
    };
    let grid: Vec<f64> = (0..257).map(|i| -4.0 * sd + 8.0 * sd * i as f64 / 256.0).collect();
    let mut series = vec![Series {
        label: "normal limit".into(),
        points: grid.iter().map(|&x| (x, normal_pdf(x))).collect(),
    }];
    for (label, stats) in
        [("plugin", &result.plugin_stats), ("oracle", &result.oracle_stats)]
    {
        if let Ok(bw) = kde::bandwidth_select(stats, kde::BandwidthRule::SilvermanN5) {
            if let Ok(est) = kde::kde_estimate(
                stats,
                kde::Kernel::Biweight,
                bw,
                kde::GridSpec::Span { points: 257 },
            ) {
                series.push(Series {
                    label: label.into(),
                    points: est.grid.iter().copied().zip(est.values.iter().copied()).collect(),
                });
            }
        }
    }
    line_plot_svg(&series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_has_fixed_viewbox_and_curves() {
        let series = vec![
            Series { label: "a".into(), points: vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.5)] },
            Series { label: "b".into(), points: vec![(0.0, 1.0), (2.0, 0.0)] },
        ];
        let svg = line_plot_svg(&series);
        assert!(svg.contains("viewBox=\"0 0 800 600\""));
        assert_eq!(svg.matches("<polyline").count(), 2);
        // same label set -> same colors regardless of order
        let svg2 = line_plot_svg(&[series[1].clone(), series[0].clone()]);
        for color in [PALETTE[0], PALETTE[1]] {
            assert_eq!(svg.contains(color), svg2.contains(color));
        }
    }
}
