//! Minimal SVG renderer for log-log scatter plots with fitted slopes.

use std::fmt::Write;

/// One plotted scheme: points plus an optional fitted power law.
#[derive(Debug, Clone)]
pub struct Series {
    /// Legend label.
    pub name: String,
    /// Data points, positive coordinates.
    pub points: Vec<(f64, f64)>,
    /// Fitted `(slope, intercept)` in natural-log space, drawn dashed.
    pub fit: Option<(f64, f64)>,
}

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 48.0;
const MARGIN_B: f64 = 64.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Renders a log-log scatter plot, one `<g class="series">` per scheme and
/// a dashed fitted line per series that has one.
pub fn render_loglog(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .collect();
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if pts.is_empty() {
        x_min = 0.1;
        x_max = 10.0;
        y_min = 0.1;
        y_max = 10.0;
    }
    // Pad the log range so markers stay inside the frame.
    let (mut lx0, mut lx1) = (x_min.ln(), x_max.ln());
    let (mut ly0, mut ly1) = (y_min.ln(), y_max.ln());
    let pad = |a: &mut f64, b: &mut f64| {
        let w = (*b - *a).max(1e-9);
        *a -= 0.06 * w;
        *b += 0.06 * w;
    };
    pad(&mut lx0, &mut lx1);
    pad(&mut ly0, &mut ly1);

    let px = |lx: f64| MARGIN_L + (lx - lx0) / (lx1 - lx0) * (WIDTH - MARGIN_L - MARGIN_R);
    let py = |ly: f64| HEIGHT - MARGIN_B - (ly - ly0) / (ly1 - ly0) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = write!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = write!(
        svg,
        r#"<text x="{:.1}" y="28" font-family="sans-serif" font-size="17" font-weight="bold">{}</text>"#,
        MARGIN_L,
        escape(title)
    );

    // Frame and decade grid lines.
    let _ = write!(
        svg,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{:.1}" height="{:.1}" fill="none" stroke="#333" stroke-width="1"/>"##,
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    );
    for d in decades(x_min, x_max) {
        let x = px(d.ln());
        let _ = write!(
            svg,
            r##"<line x1="{x:.1}" y1="{MARGIN_T}" x2="{x:.1}" y2="{:.1}" stroke="#ddd" stroke-width="0.7"/>"##,
            HEIGHT - MARGIN_B
        );
        let _ = write!(
            svg,
            r#"<text x="{x:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            HEIGHT - MARGIN_B + 18.0,
            format_tick(d)
        );
    }
    for d in decades(y_min, y_max) {
        let y = py(d.ln());
        let _ = write!(
            svg,
            r##"<line x1="{MARGIN_L}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd" stroke-width="0.7"/>"##,
            WIDTH - MARGIN_R
        );
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            MARGIN_L - 6.0,
            y + 4.0,
            format_tick(d)
        );
    }
    let _ = write!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        MARGIN_L + (WIDTH - MARGIN_L - MARGIN_R) / 2.0,
        HEIGHT - 16.0,
        escape(xlabel)
    );
    let _ = write!(
        svg,
        r#"<text x="20" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        MARGIN_T + (HEIGHT - MARGIN_T - MARGIN_B) / 2.0,
        MARGIN_T + (HEIGHT - MARGIN_T - MARGIN_B) / 2.0,
        escape(ylabel)
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = write!(svg, r#"<g class="series" data-scheme="{}">"#, escape(&s.name));

        let mut sorted: Vec<(f64, f64)> =
            s.points.iter().copied().filter(|&(x, y)| x > 0.0 && y > 0.0).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

        if sorted.len() > 1 {
            let path: Vec<String> = sorted
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x.ln()), py(y.ln())))
                .collect();
            let _ = write!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.6"/>"#,
                path.join(" ")
            );
        }
        for &(x, y) in &sorted {
            let _ = write!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.4" fill="{color}"/>"#,
                px(x.ln()),
                py(y.ln())
            );
        }
        if let Some((slope, intercept)) = s.fit {
            if sorted.len() > 1 {
                let (xa, xb) = (sorted[0].0.ln(), sorted[sorted.len() - 1].0.ln());
                let ya = intercept + slope * xa;
                let yb = intercept + slope * xb;
                let _ = write!(
                    svg,
                    r#"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="1.3" stroke-dasharray="6 4"/>"#,
                    px(xa),
                    py(ya),
                    px(xb),
                    py(yb)
                );
            }
        }

        // Legend entry.
        let ly = MARGIN_T + 18.0 + 22.0 * i as f64;
        let lx = WIDTH - MARGIN_R + 14.0;
        let _ = write!(
            svg,
            r#"<rect x="{lx:.1}" y="{:.1}" width="12" height="12" fill="{color}"/>"#,
            ly - 10.0
        );
        let label = match s.fit {
            Some((slope, _)) => format!("{} ({slope:.2})", s.name),
            None => s.name.clone(),
        };
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{ly:.1}" font-family="sans-serif" font-size="13">{}</text>"#,
            lx + 18.0,
            escape(&label)
        );
        let _ = write!(svg, "</g>");
    }

    svg.push_str("</svg>\n");
    svg
}

fn decades(min: f64, max: f64) -> Vec<f64> {
    if !(min > 0.0 && max >= min) {
        return vec![];
    }
    let lo = min.log10().floor() as i32;
    let hi = max.log10().ceil() as i32;
    (lo..=hi).map(|e| 10f64.powi(e)).collect()
}

fn format_tick(v: f64) -> String {
    let e = v.log10().round() as i32;
    if (-3..=3).contains(&e) {
        format!("{v}")
    } else {
        format!("1e{e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
