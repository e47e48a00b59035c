use std::fmt::Write as _;

use crate::geom::Point;
use crate::instance::{Instance, Solution};

const VIEW: f64 = 1000.0;
const MARGIN: f64 = 20.0;

/// SVG drawing: outer boundary in black, holes filled gray, pieces in
/// translucent colors. Output depends only on the inputs.
pub fn render_svg(inst: &Instance, sol: Option<&Solution>) -> String {
    let (lo, hi) = inst.region.bbox();
    let (lo, hi) = (lo.to_f64(), hi.to_f64());
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(f64::MIN_POSITIVE);
    let k = (VIEW - 2.0 * MARGIN) / span;
    let map = |p: &Point| {
        let (x, y) = p.to_f64();
        (MARGIN + (x - lo.0) * k, VIEW - MARGIN - (y - lo.1) * k)
    };
    let coords = |pts: &[Point]| {
        pts.iter()
            .map(|p| {
                let (x, y) = map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
    };
    let path = |pts: &[Point]| format!("M{}Z", coords(pts).join("L"));

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW} {VIEW}" width="{VIEW}" height="{VIEW}">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<path d="{}" fill="white" stroke="black" stroke-width="1.5"/>"#,
        path(inst.region.outer().vertices())
    )
    .unwrap();
    for h in inst.region.holes() {
        writeln!(s, r#"<path d="{}" fill="gray" stroke="dimgray" stroke-width="0.5"/>"#, path(h.vertices())).unwrap();
    }
    if let Some(sol) = sol {
        let n = sol.pieces.len().max(1);
        for (i, piece) in sol.pieces.iter().enumerate() {
            // golden-angle hue steps keep neighbors in the list apart
            let hue = (i as f64 * 137.508) % 360.0;
            writeln!(
                s,
                r#"<polygon points="{}" fill="hsl({hue:.1},70%,55%)" fill-opacity="{:.2}" stroke="hsl({hue:.1},70%,35%)" stroke-width="0.5"/>"#,
                coords(piece).join(" "),
                (0.25f64).max(0.6 - 0.002 * n as f64),
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
