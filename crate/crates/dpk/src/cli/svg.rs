//! Minimal SVG line/scatter emitter: fixed 800x600 canvas, linear axes with
//! tick labels. Plots column 1 against column 0 of a table.

use std::fmt::Write;

use super::Table;

const W: f64 = 800.0;
const H: f64 = 600.0;
const MARGIN: f64 = 60.0;

pub fn render(table: &Table) -> Result<String, String> {
    if table.columns.len() < 2 {
        return Err("svg output needs at least two columns".into());
    }
    let pts: Vec<(f64, f64)> = table.rows.iter().map(|r| (r[0], r[1])).collect();
    if pts.len() < 2 {
        return Err("svg output needs at least two rows".into());
    }
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 == x1 {
        x1 = x0 + 1.0;
    }
    if y0 == y1 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-family="monospace" font-size="14">{} ({} vs {})</text>"#,
        W / 2.0,
        table.command,
        table.columns[1],
        table.columns[0]
    );
    // axes
    let _ = writeln!(
        s,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN
    );
    // ticks
    for i in 0..=5 {
        let fx = x0 + (x1 - x0) * i as f64 / 5.0;
        let fy = y0 + (y1 - y0) * i as f64 / 5.0;
        let px = sx(fx);
        let py = sy(fy);
        let _ = writeln!(
            s,
            r#"<line x1="{px}" y1="{b}" x2="{px}" y2="{b2}" stroke="black"/><text x="{px}" y="{ty}" text-anchor="middle" font-family="monospace" font-size="10">{fx:.3}</text>"#,
            b = H - MARGIN,
            b2 = H - MARGIN + 5.0,
            ty = H - MARGIN + 18.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{m2}" y1="{py}" x2="{m}" y2="{py}" stroke="black"/><text x="{tx}" y="{py}" text-anchor="end" font-family="monospace" font-size="10">{fy:.3}</text>"#,
            m = MARGIN,
            m2 = MARGIN - 5.0,
            tx = MARGIN - 8.0
        );
    }
    // polyline + points
    let mut path = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let _ = write!(
            path,
            "{}{:.2},{:.2}",
            if i == 0 { "" } else { " " },
            sx(x),
            sy(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<polyline points="{path}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#
    );
    for &(x, y) in &pts {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="steelblue"/>"#,
            sx(x),
            sy(y)
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
