//! Minimal static SVG output: DD-plot scatter and depth-coloured curves.

use crate::analysis::DDPoint;
use crate::curve::Curve;
use std::fmt::Write;

const SIZE: f64 = 480.0;
const PAD: f64 = 24.0;

struct Frame {
    lo: [f64; 2],
    scale: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = [f64; 2]>) -> Frame {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if !lo[0].is_finite() {
            return Frame { lo: [0.0, 0.0], scale: 1.0 };
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let scale = if span > 0.0 { (SIZE - 2.0 * PAD) / span } else { 1.0 };
        Frame { lo, scale }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (PAD + (p[0] - self.lo[0]) * self.scale, SIZE - PAD - (p[1] - self.lo[1]) * self.scale)
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
}

/// Yellow at 0 to red at 1.
pub fn ramp(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let g = (255.0 * (1.0 - t)).round() as u8;
    format!("#ff{g:02x}00")
}

/// DD-plot with the diagonal; label 0 in blue, label 1 in orange.
pub fn dd_scatter(points: &[DDPoint]) -> String {
    let top = points.iter().map(|p| p.d0.max(p.d1)).fold(0.0, f64::max).max(1e-12);
    let frame = Frame::fit([[0.0, 0.0], [top, top]].into_iter());
    let mut out = String::new();
    header(&mut out);
    let (x0, y0) = frame.map([0.0, 0.0]);
    let (x1, y1) = frame.map([top, top]);
    let _ = writeln!(out, "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y1:.2}\" stroke=\"gray\" stroke-dasharray=\"4\"/>");
    let _ = writeln!(out, "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>");
    let _ = writeln!(out, "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>");
    for p in points {
        let (x, y) = frame.map([p.d0, p.d1]);
        let color = if p.label == 0 { "#1f77b4" } else { "#ff7f0e" };
        let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"{color}\"><title>{}</title></circle>", escape(&p.id));
    }
    out.push_str("</svg>\n");
    out
}

fn xy(p: &[f64]) -> [f64; 2] {
    [p[0], p.get(1).copied().unwrap_or(0.0)]
}

/// Curves as polylines (first two coordinates), coloured by depth relative to
/// the largest depth; the deepest curve is drawn last in blue.
pub fn depth_polylines(curves: &[Curve], depths: &[f64]) -> String {
    let frame = Frame::fit(curves.iter().flat_map(|c| c.vertices().map(xy)));
    let top = depths.iter().copied().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..curves.len().min(depths.len())).collect();
    order.sort_by(|&a, &b| depths[a].total_cmp(&depths[b]).then(a.cmp(&b)));
    let mut out = String::new();
    header(&mut out);
    for (rank, &i) in order.iter().enumerate() {
        let color = if rank + 1 == order.len() {
            "#0000cc".to_string()
        } else {
            ramp(if top > 0.0 { depths[i] / top } else { 0.0 })
        };
        let pts: Vec<String> = curves[i]
            .vertices()
            .map(|p| {
                let (x, y) = frame.map(xy(p));
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"><title>{} {:.4}</title></polyline>",
            pts.join(" "),
            escape(curves[i].id()),
            depths[i]
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_ends() {
        assert_eq!(ramp(0.0), "#ffff00");
        assert_eq!(ramp(1.0), "#ff0000");
    }

    #[test]
    fn polylines_are_well_formed() {
        let a = Curve::new("a<1>", 2, vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let b = Curve::new("b", 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = depth_polylines(&[a, b], &[0.2, 0.4]);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert_eq!(s.matches("<polyline").count(), 2);
        assert!(s.contains("a&lt;1&gt;"));
    }
}
