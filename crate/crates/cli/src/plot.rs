//! Static SVG line charts of sweep results.

use std::fmt::Write as _;

use crate::sweep::{SweepCell, SweepKind};

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 56.0;
const COLOURS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Groups cells into series. Degree sweeps plot the metric against `d`, one
/// line per `n`; the non-sparse sweep plots against `n`, one line per
/// degree function.
pub fn sweep_series(kind: SweepKind, cells: &[SweepCell]) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    for c in cells {
        let (label, x) = match kind {
            SweepKind::NonsparseLoss => (format!("d = {}", c.d_spec), c.n as f64),
            _ => (format!("n = {}", c.n), c.d as f64),
        };
        match out.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push((x, c.metric)),
            None => out.push(Series { label, points: vec![(x, c.metric)] }),
        }
    }
    for s in &mut out {
        s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

pub fn sweep_svg(kind: SweepKind, cells: &[SweepCell]) -> String {
    let (x_label, y_label) = match kind {
        SweepKind::SuccessProb => ("d", "decided fraction"),
        SweepKind::SelfWinningFrac => ("d", "self-winning fraction"),
        SweepKind::NonsparseLoss => ("n", "winner != owner fraction"),
        SweepKind::Timing => ("d", "seconds"),
    };
    line_chart(kind.name(), x_label, y_label, &sweep_series(kind, cells))
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts = || series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (0.0f64, f64::NEG_INFINITY);
    for &(x, y) in pts() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y1) = (0.0, 1.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, escape(title));
    let (left, right, top, bottom) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
    let _ = writeln!(svg, r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#, sx(xv), bottom + 16.0, tick(xv));
        let _ = writeln!(svg, r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#, left - 6.0, sy(yv) + 4.0, tick(yv));
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 12.0, escape(x_label));
    let _ = writeln!(svg, r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#, H / 2.0, H / 2.0, escape(y_label));
    for (i, s) in series.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let path: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#, path.join(" "));
        for &(x, y) in &s.points {
            let _ = writeln!(svg, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{colour}"/>"#, sx(x), sy(y));
        }
        let ly = top + 16.0 * i as f64;
        let _ = writeln!(svg, r#"<text x="{}" y="{ly}" fill="{colour}">{}</text>"#, right - 90.0, escape(&s.label));
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick(v: f64) -> String {
    if v.abs() >= 100.0 || v.fract() == 0.0 {
        format!("{v:.0}")
    } else if v.abs() >= 0.01 {
        format!("{v:.2}")
    } else {
        format!("{v:.1e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
