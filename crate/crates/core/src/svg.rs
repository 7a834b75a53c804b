//! Self-contained SVG regret plots: one median line per labeled series with
//! a shaded 95% band, no external renderer involved.

use crate::aggregate::AggregateStats;
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// One curve to draw.
#[derive(Clone, Debug)]
pub struct LabeledStats {
    pub label: String,
    pub stats: AggregateStats,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PlotOptions {
    /// Log-scale the time axis.
    pub log_x: bool,
}

/// Renders the series to an SVG file.
pub fn emit_svg_plot(series: &[LabeledStats], opts: &PlotOptions, path: &Path) -> Result<()> {
    let svg = render_svg(series, opts)?;
    std::fs::write(path, svg).map_err(|e| Error::io(format!("writing plot {}", path.display()), e))
}

/// Renders the series to an SVG string.
pub fn render_svg(series: &[LabeledStats], opts: &PlotOptions) -> Result<String> {
    if series.is_empty() || series.iter().all(|s| s.stats.is_empty()) {
        return Err(Error::EmptySeries);
    }

    let x_min = series
        .iter()
        .flat_map(|s| s.stats.t.first().copied())
        .min()
        .unwrap() as f64;
    let x_max = series
        .iter()
        .flat_map(|s| s.stats.t.last().copied())
        .max()
        .unwrap() as f64;
    let y_max = series
        .iter()
        .flat_map(|s| s.stats.hi95.iter().copied())
        .fold(0.0f64, f64::max)
        .max(1e-12);

    let x_of = |t: f64| -> f64 {
        let frac = if opts.log_x {
            let lo = x_min.max(1.0).ln();
            let hi = x_max.max(x_min.max(1.0) * 1.0000001).ln();
            (t.max(1.0).ln() - lo) / (hi - lo)
        } else if x_max > x_min {
            (t - x_min) / (x_max - x_min)
        } else {
            0.5
        };
        MARGIN_LEFT + frac * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    };
    let y_of = |r: f64| -> f64 {
        let frac = r / y_max;
        HEIGHT - MARGIN_BOTTOM - frac * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##
    );

    // axes
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        svg,
        r##"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="#333333" stroke-width="1"/>"##
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="#333333" stroke-width="1"/>"##
    );

    // ticks
    for i in 0..=4 {
        let frac = i as f64 / 4.0;
        let t = if opts.log_x {
            (x_min.max(1.0).ln() + frac * (x_max.max(1.0).ln() - x_min.max(1.0).ln())).exp()
        } else {
            x_min + frac * (x_max - x_min)
        };
        let x = x_of(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="#333333" stroke-width="1"/>"##,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r##"<text x="{x}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"##,
            y0 + 20.0,
            format_tick(t)
        );

        let r = frac * y_max;
        let y = y_of(r);
        let _ = writeln!(
            svg,
            r##"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="#333333" stroke-width="1"/>"##,
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            r##"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"##,
            x0 - 9.0,
            y + 4.0,
            format_tick(r)
        );
    }

    // axis labels
    let _ = writeln!(
        svg,
        r##"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">time step</text>"##,
        (x0 + x1) / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        r##"<text x="18" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 18 {})">cumulative regret</text>"##,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    // bands first, lines on top
    for (idx, s) in series.iter().enumerate() {
        if s.stats.is_empty() {
            continue;
        }
        let color = PALETTE[idx % PALETTE.len()];
        let mut band = String::from("M");
        for (i, &t) in s.stats.t.iter().enumerate() {
            let _ = write!(band, " {:.2},{:.2}", x_of(t as f64), y_of(s.stats.hi95[i]));
            if i == 0 {
                band.push_str(" L");
            }
        }
        for (i, &t) in s.stats.t.iter().enumerate().rev() {
            let _ = write!(band, " {:.2},{:.2}", x_of(t as f64), y_of(s.stats.lo95[i]));
        }
        band.push_str(" Z");
        let _ = writeln!(
            svg,
            r#"<path d="{band}" fill="{color}" fill-opacity="0.15" stroke="none"/>"#
        );
    }
    for (idx, s) in series.iter().enumerate() {
        if s.stats.is_empty() {
            continue;
        }
        let color = PALETTE[idx % PALETTE.len()];
        let points: Vec<String> = s
            .stats
            .t
            .iter()
            .enumerate()
            .map(|(i, &t)| format!("{:.2},{:.2}", x_of(t as f64), y_of(s.stats.median[i])))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
            points.join(" ")
        );
    }

    // legend
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let ly = MARGIN_TOP + 8.0 + idx as f64 * 18.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/>"#,
            x0 + 12.0,
            x0 + 40.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13">{}</text>"#,
            x0 + 46.0,
            ly + 4.0,
            escape_xml(&s.label)
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 10_000.0 || v.abs() < 0.01 {
        format!("{v:.1e}")
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
