//! SVG drawings: dashed boundary, solid diameter segments.

use std::fmt::Write;

use smallgon_core::{Point2, Polygon};

/// Pixels per unit length.
pub const SCALE: f64 = 400.0;
const MARGIN: f64 = 20.0;

/// Draws `polygon` with one `<line>` per boundary edge and per diameter pair.
///
/// The y axis points up in polygon coordinates and down on screen, so the
/// drawing is flipped to keep the polygon upright.
pub fn render(polygon: &Polygon) -> String {
    let v = polygon.vertices();
    let (min_x, max_x) = bounds(v.iter().map(|p| p.x));
    let (min_y, max_y) = bounds(v.iter().map(|p| p.y));
    let to_screen = |p: Point2| {
        (
            MARGIN + (p.x - min_x) * SCALE,
            MARGIN + (max_y - p.y) * SCALE,
        )
    };
    let width = 2.0 * MARGIN + (max_x - min_x) * SCALE;
    let height = 2.0 * MARGIN + (max_y - min_y) * SCALE;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    out.push_str(
        "<style>\
         .boundary{stroke:#000;stroke-width:1.5;stroke-dasharray:6 4;fill:none}\
         .diameter{stroke:#000;stroke-width:1.5}\
         .vertex{fill:#000}\
         </style>\n",
    );
    let mut line = |class: &str, a: Point2, b: Point2| {
        let (x1, y1) = to_screen(a);
        let (x2, y2) = to_screen(b);
        let _ = writeln!(
            out,
            r#"<line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#
        );
    };
    let n = v.len();
    for i in 0..n {
        line("boundary", v[i], v[(i + 1) % n]);
    }
    for &(i, j) in &polygon.diameter().edges {
        line("diameter", v[i], v[j]);
    }
    for &p in v {
        let (x, y) = to_screen(p);
        let _ = writeln!(
            out,
            r#"<circle class="vertex" cx="{x:.3}" cy="{y:.3}" r="3"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallgon_core::{b_family, q_family, regular};

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!(r#"class="{class}""#)).count()
    }

    #[test]
    fn square_has_both_diagonals() {
        let svg = render(regular(4).unwrap().polygon());
        assert_eq!(count(&svg, "boundary"), 4);
        assert_eq!(count(&svg, "diameter"), 2);
    }

    #[test]
    fn b8_segments() {
        let svg = render(b_family(8).unwrap().polygon());
        assert_eq!(count(&svg, "boundary"), 8);
        assert_eq!(count(&svg, "diameter"), 8);
    }

    #[test]
    fn q4_is_triangle_with_pendant() {
        let svg = render(q_family(4).unwrap().polygon());
        assert_eq!(count(&svg, "boundary"), 4);
        assert_eq!(count(&svg, "diameter"), 4);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn drawing_is_upright() {
        // the top vertex (0, 1) lands near the top edge of the canvas
        let p = regular(4).unwrap();
        let svg = render(p.polygon());
        let max_y = p.vertices().iter().map(|v| v.y).fold(0.0, f64::max);
        assert!(max_y > 0.7);
        assert!(svg.contains(&format!(r#"cy="{MARGIN:.3}""#)));
    }
}
