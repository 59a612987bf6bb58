//! Minimal SVG line plots computed from CSV text alone.

use std::fmt::Write;

use anyhow::{bail, Context, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

/// Plots `y_column` against the first column of a CSV with an optional block
/// of `#` comment lines before the header. Non-numeric cells are skipped.
pub fn polyline_svg(csv: &str, y_column: &str) -> Result<String> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines.next().context("CSV has no header")?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let y_index = columns
        .iter()
        .position(|c| *c == y_column)
        .with_context(|| format!("CSV has no column named {y_column}"))?;

    let points: Vec<(f64, f64)> = lines
        .filter_map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            let x = cells.first()?.trim().parse::<f64>().ok()?;
            let y = cells.get(y_index)?.trim().parse::<f64>().ok()?;
            (x.is_finite() && y.is_finite()).then_some((x, y))
        })
        .collect();
    if points.len() < 2 {
        bail!("need at least two numeric rows to plot");
    }

    let (x_lo, x_hi) = bounds(points.iter().map(|p| p.0));
    let (y_lo, y_hi) = bounds(points.iter().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<path d="M{l} {t} V{b} H{r}" fill="none" stroke="black" stroke-width="1"/>"#,
        l = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    if y_lo < 0.0 && y_hi > 0.0 {
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN}" y1="{y:.2}" x2="{x2}" y2="{y:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            y = sy(0.0),
            x2 = WIDTH - MARGIN
        );
    }
    let label = |out: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{text}</text>"#
        );
    };
    label(&mut out, MARGIN, HEIGHT - MARGIN + 16.0, "start", fmt_tick(x_lo));
    label(&mut out, WIDTH - MARGIN, HEIGHT - MARGIN + 16.0, "end", fmt_tick(x_hi));
    label(&mut out, MARGIN - 4.0, HEIGHT - MARGIN, "end", fmt_tick(y_lo));
    label(&mut out, MARGIN - 4.0, MARGIN + 4.0, "end", fmt_tick(y_hi));
    label(
        &mut out,
        WIDTH / 2.0,
        MARGIN - 16.0,
        "middle",
        format!("{} vs {}", y_column, columns[0]),
    );

    out.push_str(r##"<polyline fill="none" stroke="#1f5fa8" stroke-width="1.2" points=""##);
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.2},{:.2}", sx(*x), sy(*y));
    }
    out.push_str("\"/>\n</svg>\n");
    Ok(out)
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

fn fmt_tick(v: f64) -> String {
    format!("{v:.4}")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "# process: mg\nt,value\n0,0\n0.5,1.5\n1,-0.5\n";

    #[test]
    fn plots_named_column() {
        let svg = polyline_svg(CSV, "value").unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        let points = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(points.split(' ').count(), 3);
        assert_eq!(svg, polyline_svg(CSV, "value").unwrap());
    }

    #[test]
    fn constant_series_gets_a_range() {
        let svg = polyline_svg("s,value\n0.1,1\n0.2,1\n", "value").unwrap();
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn rejects_missing_column_and_short_input() {
        assert!(polyline_svg(CSV, "nope").is_err());
        assert!(polyline_svg("t,value\n0,1\n", "value").is_err());
        assert!(polyline_svg("", "value").is_err());
    }
}
