//! Injectivity check of a layout: do the face polygons overlap?

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cell_complex::DiskComplex;

use super::Layout;

/// Default relative tolerance of the orientation tests.
pub const EMBED_EPS: f64 = 1e-12;

/// Outcome of [`embeddedness_check`]. A pair `(f, f)` marks a face whose
/// polygon is not positively oriented.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddednessReport {
    pub embedded: bool,
    pub overlaps: Vec<(usize, usize)>,
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn orient(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    cross(b - a, p - a)
}

/// Proper crossing of two segments; touching within `tol` does not count.
fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64, tol: f64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    let lq = (q2 - q1).norm() * tol;
    let lp = (p2 - p1).norm() * tol;
    ((d1 > lq && d2 < -lq) || (d1 < -lq && d2 > lq)) && ((d3 > lp && d4 < -lp) || (d3 < -lp && d4 > lp))
}

/// Strictly inside a polygon: away from every edge by more than `tol` and
/// with nonzero winding number.
fn strictly_inside(poly: &[Complex64], p: Complex64, tol: f64) -> bool {
    let n = poly.len();
    let mut winding = 0i32;
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        let len = (b - a).norm();
        let t = ((p - a).re * (b - a).re + (p - a).im * (b - a).im) / (len * len).max(f64::MIN_POSITIVE);
        let closest = a + (b - a) * t.clamp(0.0, 1.0);
        if (p - closest).norm() <= tol {
            return false;
        }
        if a.im <= p.im {
            if b.im > p.im && orient(a, b, p) > 0.0 {
                winding += 1;
            }
        } else if b.im <= p.im && orient(a, b, p) < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

/// Pairwise overlap test of the face polygons, with candidate pairs taken
/// from a uniform grid over the bounding boxes. `eps` scales with the
/// layout diameter.
pub fn embeddedness_check(l: &Layout, c: &DiskComplex, eps: f64) -> EmbeddednessReport {
    let nf = c.num_faces();
    let polys: Vec<Vec<Complex64>> = (0..nf)
        .map(|f| c.face_vertices(f).iter().map(|&v| l.z_v[v]).collect())
        .collect();
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut boxes = Vec::with_capacity(nf);
    let mut mean_size = 0.0;
    for p in &polys {
        let (mut bl, mut bh) = (p[0], p[0]);
        for z in p {
            bl = Complex64::new(bl.re.min(z.re), bl.im.min(z.im));
            bh = Complex64::new(bh.re.max(z.re), bh.im.max(z.im));
        }
        lo = Complex64::new(lo.re.min(bl.re), lo.im.min(bl.im));
        hi = Complex64::new(hi.re.max(bh.re), hi.im.max(bh.im));
        mean_size += (bh.re - bl.re).max(bh.im - bl.im);
        boxes.push((bl, bh));
    }
    let mut overlaps = Vec::new();
    if nf == 0 {
        return EmbeddednessReport {
            embedded: true,
            overlaps,
        };
    }
    let scale = (hi.re - lo.re).max(hi.im - lo.im).max(f64::MIN_POSITIVE);
    let tol = eps * scale;

    for (f, p) in polys.iter().enumerate() {
        let area2: f64 = (0..p.len()).map(|k| cross(p[k], p[(k + 1) % p.len()])).sum();
        if !(area2 > tol * scale) {
            overlaps.push((f, f));
        }
    }

    let cell = (mean_size / nf as f64).max(scale / 4096.0).max(f64::MIN_POSITIVE);
    let key = |z: Complex64| {
        (
            ((z.re - lo.re) / cell).floor() as i64,
            ((z.im - lo.im) / cell).floor() as i64,
        )
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (f, (bl, bh)) in boxes.iter().enumerate() {
        let (x0, y0) = key(*bl);
        let (x1, y1) = key(*bh);
        for x in x0..=x1 {
            for y in y0..=y1 {
                grid.entry((x, y)).or_default().push(f);
            }
        }
    }
    let mut candidates: HashSet<(usize, usize)> = HashSet::new();
    for faces in grid.values() {
        for (a, &f) in faces.iter().enumerate() {
            for &g in &faces[a + 1..] {
                candidates.insert((f.min(g), f.max(g)));
            }
        }
    }
    let mut candidates: Vec<(usize, usize)> = candidates.into_iter().collect();
    candidates.sort_unstable();

    for (f, g) in candidates {
        let (bf, bg) = (boxes[f], boxes[g]);
        if bf.1.re < bg.0.re - tol || bg.1.re < bf.0.re - tol || bf.1.im < bg.0.im - tol || bg.1.im < bf.0.im - tol {
            continue;
        }
        if faces_overlap(c, &polys, f, g, tol) {
            overlaps.push((f, g));
        }
    }
    overlaps.sort_unstable();
    EmbeddednessReport {
        embedded: overlaps.is_empty(),
        overlaps,
    }
}

fn faces_overlap(c: &DiskComplex, polys: &[Vec<Complex64>], f: usize, g: usize, tol: f64) -> bool {
    let vf = c.face_vertices(f);
    let vg = c.face_vertices(g);
    let (pf, pg) = (&polys[f], &polys[g]);
    for a in 0..vf.len() {
        let (a0, a1) = (vf[a], vf[(a + 1) % vf.len()]);
        for b in 0..vg.len() {
            let (b0, b1) = (vg[b], vg[(b + 1) % vg.len()]);
            if a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1 {
                continue;
            }
            if segments_cross(pf[a], pf[(a + 1) % vf.len()], pg[b], pg[(b + 1) % vg.len()], tol) {
                return true;
            }
        }
    }
    let shared: HashSet<usize> = vf.iter().copied().filter(|v| vg.contains(v)).collect();
    for (k, v) in vf.iter().enumerate() {
        if !shared.contains(v) && strictly_inside(pg, pf[k], tol) {
            return true;
        }
    }
    for (k, v) in vg.iter().enumerate() {
        if !shared.contains(v) && strictly_inside(pf, pg[k], tol) {
            return true;
        }
    }
    let centroid = |p: &[Complex64]| p.iter().sum::<Complex64>() / p.len() as f64;
    strictly_inside(pg, centroid(pf), tol) || strictly_inside(pf, centroid(pg), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_squares() -> (DiskComplex, Layout) {
        let c = DiskComplex::from_faces(6, vec![vec![0, 1, 4, 3], vec![1, 2, 5, 4]]).unwrap();
        let z_v = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]
            .map(|(x, y)| Complex64::new(x, y))
            .to_vec();
        let l = Layout {
            z_v,
            z_f: vec![Complex64::new(0.5, 0.5), Complex64::new(1.5, 0.5)],
            gluing_residual: 0.0,
        };
        (c, l)
    }

    #[test]
    fn adjacent_squares_are_embedded() {
        let (c, l) = two_squares();
        let rep = embeddedness_check(&l, &c, EMBED_EPS);
        assert!(rep.embedded && rep.overlaps.is_empty());
    }

    #[test]
    fn folded_square_overlaps() {
        let (c, mut l) = two_squares();
        // fold the second square back over the first
        l.z_v[2] = Complex64::new(0.3, 0.0);
        l.z_v[5] = Complex64::new(0.3, 1.0);
        let rep = embeddedness_check(&l, &c, EMBED_EPS);
        assert!(!rep.embedded);
        assert!(
            rep.overlaps.contains(&(0, 1)) || rep.overlaps.contains(&(1, 1)),
            "{rep:?}"
        );
    }

    #[test]
    fn sheared_square_crosses() {
        let (c, mut l) = two_squares();
        // edge 2-5 now cuts the top edge of the first square
        l.z_v[5] = Complex64::new(0.2, 1.5);
        let rep = embeddedness_check(&l, &c, EMBED_EPS);
        assert!(!rep.embedded, "{rep:?}");
    }
}
