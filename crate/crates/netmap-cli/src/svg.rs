//! Deterministic SVG emission for slope-function graphs and half-space
//! plots. Element order is sorted and coordinates use fixed precision, so
//! identical inputs give byte-identical files.

use netmap_core::arith::{CirclePoint, ExtRational, Slope};
use netmap_core::halfspace::ExclusionCertificate;
use std::fmt::Write as _;

const W: f64 = 800.0;
const H: f64 = 800.0;
const MARGIN: f64 = 40.0;

fn fmt(v: f64) -> String {
    format!("{v:.4}")
}

/// Scatter plot of the slope function: a dot at `(s, μ(s))` for every
/// finite pair. Returns the SVG document as a string.
pub fn slope_graph(results: &[(ExtRational, Slope)], max: u32) -> String {
    let bound = max as f64;
    let scale = (W - 2.0 * MARGIN) / (2.0 * bound);
    let to_x = |v: f64| MARGIN + (v + bound) * scale;
    let to_y = |v: f64| H - MARGIN - (v + bound) * scale;

    let mut points: Vec<(String, String)> = Vec::new();
    for (s, image) in results {
        let Some(sr) = s.to_rat() else { continue };
        let Slope::Rational(im) = image else { continue };
        let Some(ir) = im.to_rat() else { continue };
        let x = rat_f64(&sr);
        let y = rat_f64(&ir);
        if x.abs() > bound || y.abs() > bound {
            continue;
        }
        points.push((fmt(to_x(x)), fmt(to_y(y))));
    }
    points.sort();
    points.dedup();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    // Axes through the origin.
    let cx = fmt(to_x(0.0));
    let cy = fmt(to_y(0.0));
    let _ = writeln!(
        svg,
        r#"<line x1="{m}" y1="{cy}" x2="{r}" y2="{cy}" stroke="black" stroke-width="1"/>"#,
        m = fmt(MARGIN),
        r = fmt(W - MARGIN),
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{cx}" y1="{m}" x2="{cx}" y2="{b}" stroke="black" stroke-width="1"/>"#,
        m = fmt(MARGIN),
        b = fmt(H - MARGIN),
    );
    for (x, y) in &points {
        let _ = writeln!(svg, r#"<circle cx="{x}" cy="{y}" r="1.2" fill="black"/>"#);
    }
    let _ = writeln!(svg, "</svg>");
    svg
}

fn rat_f64(r: &netmap_core::Rat) -> f64 {
    let n = num_traits::ToPrimitive::to_f64(r.numer()).unwrap_or(f64::NAN);
    let d = num_traits::ToPrimitive::to_f64(r.denom()).unwrap_or(f64::NAN);
    n / d
}

/// Half-space plot over the boundary strip: one grey disc (or half-plane)
/// per excluded interval, black boundary, drawn over the real axis.
pub fn halfspace_plot(certs: &[ExclusionCertificate], max: u32) -> String {
    let bound = max as f64;
    let scale = (W - 2.0 * MARGIN) / (2.0 * bound);
    let to_x = |v: f64| MARGIN + (v + bound) * scale;
    let axis_y = H - MARGIN;

    // Collect (center, radius) pairs for bounded arcs, half-plane strips for
    // arcs through or bounded by ∞.
    let mut discs: Vec<(String, String)> = Vec::new();
    let mut strips: Vec<(String, String)> = Vec::new();
    for cert in certs {
        let (a, b) = cert.interval.endpoints();
        match (a, b) {
            (CirclePoint::Finite(p), CirclePoint::Finite(q)) => {
                let (x1, x2) = (p.to_f64(), q.to_f64());
                if x1 < x2 {
                    let c = (x1 + x2) / 2.0;
                    let r = (x2 - x1) / 2.0;
                    discs.push((fmt(to_x(c)), fmt(r * scale)));
                } else {
                    // Wraps through ∞: two half-strips.
                    strips.push((fmt(to_x(x1)), fmt(to_x(bound))));
                    strips.push((fmt(to_x(-bound)), fmt(to_x(x2))));
                }
            }
            (CirclePoint::Finite(p), CirclePoint::Infinity) => {
                strips.push((fmt(to_x(p.to_f64())), fmt(to_x(bound))));
            }
            (CirclePoint::Infinity, CirclePoint::Finite(q)) => {
                strips.push((fmt(to_x(-bound)), fmt(to_x(q.to_f64()))));
            }
            _ => {}
        }
    }
    discs.sort();
    discs.dedup();
    strips.sort();
    strips.dedup();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    for (x1, x2) in &strips {
        let _ = writeln!(
            svg,
            r#"<rect x="{x1}" y="{m}" width="{w}" height="{h}" fill="lightgrey" stroke="black" stroke-width="0.5"/>"#,
            m = fmt(MARGIN),
            w = fmt(x2.parse::<f64>().unwrap_or(0.0) - x1.parse::<f64>().unwrap_or(0.0)),
            h = fmt(axis_y - MARGIN),
        );
    }
    for (cx, r) in &discs {
        let _ = writeln!(
            svg,
            r#"<path d="M {x1} {ay} A {r} {r} 0 0 1 {x2} {ay} Z" fill="grey" stroke="black" stroke-width="0.75"/>"#,
            x1 = fmt(cx.parse::<f64>().unwrap_or(0.0) - r.parse::<f64>().unwrap_or(0.0)),
            x2 = fmt(cx.parse::<f64>().unwrap_or(0.0) + r.parse::<f64>().unwrap_or(0.0)),
            ay = fmt(axis_y),
        );
    }
    let _ = writeln!(
        svg,
        r#"<line x1="{m}" y1="{ay}" x2="{r}" y2="{ay}" stroke="black" stroke-width="1"/>"#,
        m = fmt(MARGIN),
        r = fmt(W - MARGIN),
        ay = fmt(axis_y),
    );
    let _ = writeln!(svg, "</svg>");
    svg
}
