//! SVG 1.1 rendering of laid out patterns.

use std::fmt::Write;

use crate::cell_complex::DiskComplex;
use crate::pattern_engine::{Layout, PatternSolution};

#[derive(Clone, Debug, PartialEq)]
pub struct SvgOptions {
    pub circles: bool,
    pub primal: bool,
    pub dual: bool,
    /// Per-face values mapped linearly to the fill opacity of the circles.
    pub color_by: Option<Vec<f64>>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            circles: true,
            primal: true,
            dual: false,
            color_by: None,
        }
    }
}

/// Screen y coordinate, snapped to zero below the printed precision so
/// that no `-0.000000` appears.
fn flip(y: f64) -> f64 {
    snap(-y)
}

fn snap(x: f64) -> f64 {
    if x.abs() < 5e-7 {
        0.0
    } else {
        x
    }
}

const HEADER: &str = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";

/// Fill opacity of each face: the field range mapped onto `[0, 1]`, or 0.5
/// for a constant field.
pub fn fill_opacities(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .map(|v| if hi > lo { (v - lo) / (hi - lo) } else { 0.5 })
        .collect()
}

/// Render circles (centre `z_f`, radius `R_f`), primal edges between
/// intersection points and dual edges between centres. The y axis points up.
pub fn render_svg(c: &DiskComplex, l: &Layout, pattern: &PatternSolution, opts: &SvgOptions) -> String {
    let mut s = String::from(HEADER);
    let nf = l.z_f.len().min(pattern.radii.len());
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |x: f64, y: f64, r: f64| {
        x0 = x0.min(x - r);
        x1 = x1.max(x + r);
        y0 = y0.min(y - r);
        y1 = y1.max(y + r);
    };
    for f in 0..nf {
        grow(
            l.z_f[f].re,
            flip(l.z_f[f].im),
            if opts.circles { pattern.radii[f] } else { 0.0 },
        );
    }
    if opts.primal {
        for z in &l.z_v {
            grow(z.re, flip(z.im), 0.0);
        }
    }
    if !(x1 > x0 || y1 > y0) {
        s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 1 1\" width=\"1\" height=\"1\"/>\n");
        return s;
    }
    let size = (x1 - x0).max(y1 - y0);
    let m = 0.05 * size;
    let (vx, vy, vw, vh) = (x0 - m, y0 - m, x1 - x0 + 2.0 * m, y1 - y0 + 2.0 * m);
    let stroke = 0.002 * size;
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{vx:.6} {vy:.6} {vw:.6} {vh:.6}\" width=\"800\" height=\"{:.0}\">",
        800.0 * vh / vw
    );
    if opts.circles {
        let opacity = opts.color_by.as_deref().map(fill_opacities);
        let _ = writeln!(s, "<g id=\"circles\" stroke=\"#1f4e79\" stroke-width=\"{stroke:.6}\">");
        for f in 0..nf {
            let fill = match &opacity {
                Some(o) => format!("fill=\"#2e75b6\" fill-opacity=\"{:.4}\"", o[f]),
                None => "fill=\"none\"".to_string(),
            };
            let _ = writeln!(
                s,
                "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" {fill}/>",
                snap(l.z_f[f].re),
                flip(l.z_f[f].im),
                pattern.radii[f]
            );
        }
        s.push_str("</g>\n");
    }
    let polyline = |s: &mut String, a: num_complex::Complex64, b: num_complex::Complex64| {
        let _ = writeln!(
            s,
            "<polyline points=\"{:.6},{:.6} {:.6},{:.6}\"/>",
            snap(a.re),
            flip(a.im),
            snap(b.re),
            flip(b.im)
        );
    };
    if opts.primal {
        let _ = writeln!(
            s,
            "<g id=\"primal\" stroke=\"#000000\" stroke-width=\"{stroke:.6}\" fill=\"none\">"
        );
        for e in c.edges() {
            polyline(&mut s, l.z_v[e.tail], l.z_v[e.head]);
        }
        s.push_str("</g>\n");
    }
    if opts.dual {
        let _ = writeln!(
            s,
            "<g id=\"dual\" stroke=\"#c00000\" stroke-width=\"{stroke:.6}\" fill=\"none\">"
        );
        for (_, f, g) in c.dual_edges() {
            polyline(&mut s, l.z_f[f], l.z_f[g]);
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}
