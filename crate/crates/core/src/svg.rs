//! Overlay plot of a reconstructed boundary against a reference.

use std::fmt::Write as _;

/// Two closed polylines in one SVG document; the view box is the bounding
/// box of both curves with a 5% margin. `y` is flipped so the picture has
/// the usual orientation.
pub fn overlay_svg(estimate: &[(f64, f64)], reference: Option<&[(f64, f64)]>) -> String {
    let all = estimate.iter().chain(reference.unwrap_or(&[]));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(-y);
        y1 = y1.max(-y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let pad = 0.05 * span;
    let stroke = span / 400.0;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="600">"#,
        x0 - pad,
        y0 - pad,
        x1 - x0 + 2.0 * pad,
        y1 - y0 + 2.0 * pad
    )
    .expect("string write");
    let polyline = |out: &mut String, pts: &[(f64, f64)], colour: &str, dash: &str| {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.6},{:.6}", -y)).collect();
        writeln!(
            out,
            r#"  <polygon points="{}" fill="none" stroke="{colour}" stroke-width="{stroke:.6}"{dash}/>"#,
            coords.join(" ")
        )
        .expect("string write");
    };
    if let Some(r) = reference {
        polyline(&mut out, r, "black", "");
    }
    polyline(&mut out, estimate, "crimson", &format!(r#" stroke-dasharray="{:.6}""#, 4.0 * stroke));
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn view_box_has_margin() {
        let sq = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let svg = overlay_svg(&sq, None);
        assert!(svg.contains(r#"viewBox="-0.05 -1.05 1.1 1.1""#), "{svg}");
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(overlay_svg(&sq, Some(&sq)).matches("<polygon").count(), 2);
    }
}
