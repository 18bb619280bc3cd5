//! Flat scatter plots of `(λ2, λ3)` on the unit disc.

use std::fmt::Write as _;

use crate::analysis::BlochVector;

const SIZE: f64 = 512.0;
const MARGIN: f64 = 16.0;
const PALETTE: [&str; 8] = [
    "#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2",
];

fn to_canvas(l2: f64, l3: f64) -> (f64, f64) {
    let half = SIZE / 2.0;
    let radius = half - MARGIN;
    (half + l2 * radius, half - l3 * radius)
}

/// One colour per series; `λ2` runs left to right, `λ3` bottom to top.
pub fn scatter(series: &[(&str, &[BlochVector])]) -> String {
    let half = SIZE / 2.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<circle cx="{half}" cy="{half}" r="{}" fill="none" stroke="#999999" stroke-width="1"/>"##,
        half - MARGIN
    );
    let _ = writeln!(
        s,
        r##"<line x1="{MARGIN}" y1="{half}" x2="{}" y2="{half}" stroke="#999999" stroke-width="1"/>"##,
        SIZE - MARGIN
    );
    let _ = writeln!(
        s,
        r##"<line x1="{half}" y1="{MARGIN}" x2="{half}" y2="{}" stroke="#999999" stroke-width="1"/>"##,
        SIZE - MARGIN
    );
    for (i, (label, points)) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(s, r#"<g fill="{colour}" data-series="{label}">"#);
        for b in points.iter() {
            let (x, y) = to_canvas(b.l2, b.l3);
            let _ = writeln!(s, r#"<rect x="{x:.2}" y="{y:.2}" width="1" height="1"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_unit_disc_onto_canvas() {
        assert_eq!(to_canvas(0.0, 0.0), (256.0, 256.0));
        assert_eq!(to_canvas(1.0, 0.0), (496.0, 256.0));
        assert_eq!(to_canvas(0.0, 1.0), (256.0, 16.0));
        assert_eq!(to_canvas(0.0, -1.0), (256.0, 496.0));
    }

    #[test]
    fn one_rect_per_point() {
        let pts = [
            BlochVector::new(0.0, 0.5, -0.5),
            BlochVector::new(0.0, -0.1, 0.2),
        ];
        let svg = scatter(&[("S1", &pts)]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches(r#"width="1" height="1""#).count(), 2);
        assert!(svg.contains(r#"x="376.00" y="376.00""#));
    }
}
