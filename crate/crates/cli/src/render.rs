//! SVG pictures of curve systems on the flat torus.
//!
//! The unit square with opposite sides glued is drawn at 512×512, y up. The
//! class `(p,q)` is the closed geodesic `start + t·(p,q)`, `t ∈ [0,1]`, cut
//! into one segment per square it passes through. Each curve starts at its
//! own generic point so distinct curves meet transversally away from the
//! square's edges.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::ToPrimitive;
use torus_curves::{CurveClass, CurveSystem};

use crate::error::CliError;

pub const SIZE: f64 = 512.0;
pub const STROKE_WIDTH: u32 = 2;

/// A segment in unit-square coordinates.
pub type Segment = ((f64, f64), (f64, f64));

fn start_point(index: usize) -> (f64, f64) {
    let k = index as f64 + 1.0;
    ((0.5 + k * std::f64::consts::SQRT_2).fract(), (0.5 + k * std::f64::consts::PI).fract())
}

/// The pieces of `start + t·(p,q)` inside the unit square.
pub fn wrapped_segments(p: f64, q: f64, start: (f64, f64)) -> Vec<Segment> {
    let mut cuts = vec![0.0, 1.0];
    for (x0, v) in [(start.0, p), (start.1, q)] {
        if v == 0.0 {
            continue;
        }
        let (lo, hi) = if v > 0.0 { (x0, x0 + v) } else { (x0 + v, x0) };
        let mut k = lo.floor() + 1.0;
        while k < hi {
            cuts.push((k - x0) / v);
            k += 1.0;
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let at = |t: f64| (start.0 + t * p, start.1 + t * q);
            let mid = at((w[0] + w[1]) / 2.0);
            let (sx, sy) = (mid.0.floor(), mid.1.floor());
            let (a, b) = (at(w[0]), at(w[1]));
            ((a.0 - sx, a.1 - sy), (b.0 - sx, b.1 - sy))
        })
        .collect()
}

fn px(pt: (f64, f64)) -> (f64, f64) {
    (pt.0 * SIZE, (1.0 - pt.1) * SIZE)
}

/// SVG 1.1 text for a system. Empty curves are skipped with a warning.
pub fn svg_document(sys: &CurveSystem) -> String {
    let n = sys.len().max(1);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = SIZE
    );
    let _ = writeln!(out, r#"  <rect x="0" y="0" width="{s}" height="{s}" fill="white" stroke="black" stroke-width="1"/>"#, s = SIZE);
    for (i, curve) in sys.curves.iter().enumerate() {
        let (p, q) = match curve {
            CurveClass::Vector(p, q) => (p.to_f64().unwrap_or(0.0), q.to_f64().unwrap_or(0.0)),
            CurveClass::Empty => {
                log::warn!("curve {} is empty and is not drawn", i + 1);
                continue;
            }
        };
        let mut d = String::new();
        for (a, b) in wrapped_segments(p, q, start_point(i)) {
            let (a, b) = (px(a), px(b));
            let _ = write!(d, "M{:.3} {:.3}L{:.3} {:.3}", a.0, a.1, b.0, b.1);
        }
        let hue = i as f64 * (360.0 / n as f64);
        let _ = writeln!(
            out,
            r#"  <path id="curve-{}" d="{d}" fill="none" stroke="hsl({hue:.1},70%,40%)" stroke-width="{STROKE_WIDTH}"/>"#,
            i + 1
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_svg(sys: &CurveSystem, out: &Path) -> Result<(), CliError> {
    std::fs::write(out, svg_document(sys)).map_err(|e| CliError::io(out, e))
}
