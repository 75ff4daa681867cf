//! Tiny deterministic SVG line plots, enough to eyeball a run without
//! pulling in a plotting stack. Fixed canvas, linear axes, one polyline per
//! series, legend in the top-left corner.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;

pub struct Series<'a> {
    pub label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub color: &'a str,
}

fn data_range(series: &[Series], pick: for<'a> fn(&'a Series<'a>) -> &'a [f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in series {
        for &v in pick(s) {
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        // Degenerate span: pad so the line sits mid-plot.
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Render a line plot. Non-finite points break the polyline instead of
/// producing invalid coordinates.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (x_lo, x_hi) = data_range(series, |s| s.xs);
    let (y_lo, y_hi) = data_range(series, |s| s.ys);
    let to_px = |x: f64, y: f64| {
        let px = MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
        let py = HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);
        (px, py)
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="25" font-family="monospace" font-size="16" text-anchor="middle">{title}</text>"#,
        WIDTH / 2.0
    );

    // Axes.
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black" stroke-width="1"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black" stroke-width="1"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    );
    // End-of-axis value labels and axis names.
    let _ = writeln!(
        out,
        r#"<text x="{m}" y="{y}" font-family="monospace" font-size="11">{x_lo:.3}</text>"#,
        m = MARGIN,
        y = HEIGHT - MARGIN + 18.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{y}" font-family="monospace" font-size="11" text-anchor="end">{x_hi:.3}</text>"#,
        x = WIDTH - MARGIN,
        y = HEIGHT - MARGIN + 18.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{y}" font-family="monospace" font-size="11" text-anchor="end">{y_lo:.3}</text>"#,
        x = MARGIN - 6.0,
        y = HEIGHT - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{y}" font-family="monospace" font-size="11" text-anchor="end">{y_hi:.3}</text>"#,
        x = MARGIN - 6.0,
        y = MARGIN + 4.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{x:.2}" y="{y}" font-family="monospace" font-size="13" text-anchor="middle">{x_label}</text>"#,
        x = WIDTH / 2.0,
        y = HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{y:.2}" font-family="monospace" font-size="13" text-anchor="middle" transform="rotate(-90 18 {y:.2})">{y_label}</text>"#,
        y = HEIGHT / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let mut points = String::new();
        let mut segments: Vec<String> = Vec::new();
        for (&x, &y) in s.xs.iter().zip(s.ys) {
            if x.is_finite() && y.is_finite() {
                let (px, py) = to_px(x, y);
                let _ = write!(points, "{px:.2},{py:.2} ");
            } else if !points.is_empty() {
                segments.push(std::mem::take(&mut points));
            }
        }
        if !points.is_empty() {
            segments.push(points);
        }
        for seg in segments {
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                seg.trim_end(),
                s.color
            );
        }
        let ly = MARGIN + 16.0 * i as f64 + 8.0;
        let _ = writeln!(
            out,
            r#"<line x1="{x}" y1="{ly}" x2="{x2}" y2="{ly}" stroke="{c}" stroke-width="2"/>"#,
            x = MARGIN + 8.0,
            x2 = MARGIN + 32.0,
            c = s.color
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-family="monospace" font-size="12">{l}</text>"#,
            x = MARGIN + 38.0,
            y = ly + 4.0,
            l = s.label
        );
    }
    out.push_str("</svg>\n");
    out
}
