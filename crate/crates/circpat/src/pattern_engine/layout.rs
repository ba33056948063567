//! Planar layout of a pattern by gluing kites along the dual graph.

use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cell_complex::DiskComplex;
use crate::error::{Error, Result};

use super::PatternSolution;

/// Positions of intersection points (`z_v`) and circumcentres (`z_f`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub z_v: Vec<Complex64>,
    pub z_f: Vec<Complex64>,
    /// Largest distance between a placement of a point and its average.
    pub gluing_residual: f64,
}

impl Layout {
    /// Largest distance between any two laid out points; exact up to 4000
    /// points, a two-sweep estimate (within a factor 2) beyond.
    pub fn diameter(&self) -> f64 {
        let pts: Vec<Complex64> = self.z_v.iter().chain(&self.z_f).copied().collect();
        let mut d: f64 = 0.0;
        if pts.len() <= 4000 {
            for (k, a) in pts.iter().enumerate() {
                for b in &pts[k + 1..] {
                    d = d.max((a - b).norm());
                }
            }
            return d;
        }
        let c = pts.iter().sum::<Complex64>() / pts.len() as f64;
        let far = pts
            .iter()
            .copied()
            .fold(c, |m, p| if (p - c).norm() > (m - c).norm() { p } else { m });
        pts.iter().fold(0.0, |m, p| m.max((p - far).norm()))
    }

    /// Apply `z -> a z + b` to every point.
    pub fn transformed(&self, a: Complex64, b: Complex64) -> Layout {
        Layout {
            z_v: self.z_v.iter().map(|z| a * z + b).collect(),
            z_f: self.z_f.iter().map(|z| a * z + b).collect(),
            gluing_residual: self.gluing_residual * a.norm(),
        }
    }

    /// Active boundary vertices in counter-clockwise boundary order.
    pub fn boundary_polygon(&self, c: &DiskComplex) -> Vec<usize> {
        c.boundary_cycle()
            .iter()
            .map(|&e| c.edge(e).tail)
            .filter(|&v| c.is_active_vertex(v))
            .collect()
    }

    /// Centre and radius of the disk with the area and centroid of the
    /// boundary polygon through the active boundary vertices.
    pub fn disk_frame(&self, c: &DiskComplex) -> (Complex64, f64) {
        let poly: Vec<Complex64> = self.boundary_polygon(c).iter().map(|&v| self.z_v[v]).collect();
        let (area, centroid) = polygon_area_centroid(&poly);
        if area <= 0.0 {
            let n = self.z_f.len().max(1) as f64;
            let ctr = self.z_f.iter().sum::<Complex64>() / n;
            let r = self.z_f.iter().fold(0.0f64, |m, z| m.max((z - ctr).norm()));
            return (ctr, r.max(f64::MIN_POSITIVE));
        }
        (centroid, (area / PI).sqrt())
    }
}

/// Signed area and centroid of a closed polygon.
pub fn polygon_area_centroid(poly: &[Complex64]) -> (f64, Complex64) {
    let n = poly.len();
    if n < 3 {
        return (0.0, Complex64::new(0.0, 0.0));
    }
    let mut a2 = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for k in 0..n {
        let p = poly[k];
        let q = poly[(k + 1) % n];
        let cr = p.re * q.im - q.re * p.im;
        a2 += cr;
        cx += (p.re + q.re) * cr;
        cy += (p.im + q.im) * cr;
    }
    if a2 == 0.0 {
        return (0.0, poly[0]);
    }
    (0.5 * a2, Complex64::new(cx / (3.0 * a2), cy / (3.0 * a2)))
}

/// Reduce an angle to `[-pi, pi)`.
fn wrap_angle(t: f64) -> f64 {
    (t + PI).rem_euclid(2.0 * PI) - PI
}

/// Angular offset of every vertex of a face from the first one, measured
/// around the circumcentre. Interior edges span `2 alpha`; the remaining
/// turn is split equally among the boundary edges of the face.
fn face_offsets(c: &DiskComplex, pattern: &PatternSolution, f: usize) -> Vec<f64> {
    let edges = c.face_edges(f);
    let n = edges.len();
    let mut arcs = vec![f64::NAN; n];
    let mut used = 0.0;
    let mut free_edges = 0;
    for (k, &e) in edges.iter().enumerate() {
        match pattern.kites.alpha_at(c, e, f) {
            Some(a) => {
                arcs[k] = 2.0 * a;
                used += 2.0 * a;
            }
            None => free_edges += 1,
        }
    }
    let share = if free_edges > 0 {
        (2.0 * PI - used) / free_edges as f64
    } else {
        0.0
    };
    let mut off = vec![0.0; n];
    for k in 1..n {
        let a = if arcs[k - 1].is_nan() { share } else { arcs[k - 1] };
        off[k] = off[k - 1] + a;
    }
    off
}

/// Lay the pattern out in the plane. The seed edge (default: the first
/// interior edge) has its left circumcentre at the origin and its chord
/// pointing along the positive real axis.
pub fn layout(c: &DiskComplex, pattern: &PatternSolution, seed_edge: Option<usize>) -> Result<Layout> {
    let nf = c.num_faces();
    let nv = c.num_vertices();
    if nf == 0 {
        return Ok(Layout {
            z_v: vec![Complex64::new(0.0, 0.0); nv],
            z_f: Vec::new(),
            gluing_residual: 0.0,
        });
    }
    if pattern.radii.len() != nf {
        return Err(Error::InvalidSpec(format!(
            "{} radii for {} faces",
            pattern.radii.len(),
            nf
        )));
    }
    let offsets: Vec<Vec<f64>> = (0..nf).map(|f| face_offsets(c, pattern, f)).collect();
    let r = &pattern.radii;

    let (root, theta0) = match seed_edge.or_else(|| c.dual_edges().next().map(|(e, _, _)| e)) {
        Some(e) => {
            if e >= c.num_edges() || c.is_boundary_edge(e) {
                return Err(Error::InvalidSpec(format!("seed edge {e} is not an interior edge")));
            }
            let f = c.edge(e).left;
            let k = c.face_edges(f).iter().position(|&x| x == e).unwrap();
            let a = pattern.kites.alpha_at(c, e, f).unwrap();
            (f, -PI / 2.0 - offsets[f][k] - a)
        }
        None => (0, 0.0),
    };

    // (centre, frame angle) of each face along a breadth-first tree
    let mut frame: Vec<Option<(Complex64, f64)>> = vec![None; nf];
    frame[root] = Some((Complex64::new(0.0, 0.0), theta0));
    let mut centre_votes: Vec<Vec<Complex64>> = vec![Vec::new(); nf];
    centre_votes[root].push(Complex64::new(0.0, 0.0));
    let mut q = VecDeque::from([root]);
    while let Some(f) = q.pop_front() {
        let (zf, tf) = frame[f].unwrap();
        for (k, &e) in c.face_edges(f).iter().enumerate() {
            let Some(g) = c
                .edges()
                .get(e)
                .and_then(|ed| ed.right.map(|rr| if ed.left == f { rr } else { ed.left }))
            else {
                continue;
            };
            let af = pattern.kites.alpha_at(c, e, f).unwrap();
            let ag = pattern.kites.alpha_at(c, e, g).unwrap();
            let beta = tf + offsets[f][k] + af;
            let zg = zf + Complex64::from_polar(r[f] * af.cos() + r[g] * ag.cos(), beta);
            if frame[g].is_none() {
                let next = c.face_vertices(f)[(k + 1) % c.face_vertices(f).len()];
                let m = c.face_position(g, next).unwrap();
                frame[g] = Some((zg, wrap_angle(beta + PI - ag - offsets[g][m])));
                centre_votes[g].push(zg);
                q.push_back(g);
            } else {
                centre_votes[g].push(zg);
            }
        }
    }
    if frame.iter().any(|f| f.is_none()) {
        return Err(Error::InvalidComplex(vec!["dual graph is disconnected".into()]));
    }

    let mut residual: f64 = 0.0;
    let z_f: Vec<Complex64> = centre_votes
        .iter()
        .map(|votes| {
            let avg = votes.iter().sum::<Complex64>() / votes.len() as f64;
            for v in votes {
                residual = residual.max((v - avg).norm());
            }
            avg
        })
        .collect();

    let mut vertex_votes: Vec<Vec<Complex64>> = vec![Vec::new(); nv];
    for f in 0..nf {
        let (zf, tf) = frame[f].unwrap();
        for (k, &v) in c.face_vertices(f).iter().enumerate() {
            vertex_votes[v].push(zf + Complex64::from_polar(r[f], tf + offsets[f][k]));
        }
    }
    let z_v: Vec<Complex64> = vertex_votes
        .iter()
        .map(|votes| {
            if votes.is_empty() {
                return Complex64::new(0.0, 0.0);
            }
            let avg = votes.iter().sum::<Complex64>() / votes.len() as f64;
            for v in votes {
                residual = residual.max((v - avg).norm());
            }
            avg
        })
        .collect();

    Ok(Layout {
        z_v,
        z_f,
        gluing_residual: residual,
    })
}

/// Similarity `z -> a z + b` minimising `sum |a src + b - dst|^2`, the
/// aligned copy of `src`, and the largest remaining distance.
pub fn procrustes_align(src: &[Complex64], dst: &[Complex64]) -> (Complex64, Complex64, Vec<Complex64>, f64) {
    assert_eq!(src.len(), dst.len());
    let n = src.len().max(1) as f64;
    let ms = src.iter().sum::<Complex64>() / n;
    let md = dst.iter().sum::<Complex64>() / n;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (s, d) in src.iter().zip(dst) {
        let s0 = s - ms;
        num += s0.conj() * (d - md);
        den += s0.norm_sqr();
    }
    let a = if den > 0.0 { num / den } else { Complex64::new(1.0, 0.0) };
    let b = md - a * ms;
    let aligned: Vec<Complex64> = src.iter().map(|s| a * s + b).collect();
    let err = aligned.iter().zip(dst).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    (a, b, aligned, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell_complex::AngleData;

    fn single_kite() -> (DiskComplex, PatternSolution) {
        let c = DiskComplex::from_faces(4, vec![vec![0, 1, 2], vec![1, 0, 3]]).unwrap();
        let th = AngleData::constant(&c, PI / 2.0, 0.1);
        let p = PatternSolution::from_radii(&c, &th, vec![1.0, 1.0]);
        (c, p)
    }

    #[test]
    fn unit_kite_is_a_unit_square() {
        let (c, p) = single_kite();
        let l = layout(&c, &p, None).unwrap();
        let s2 = 2f64.sqrt();
        assert!(((l.z_v[0] - l.z_v[1]).norm() - s2).abs() < 1e-15);
        assert!(((l.z_f[0] - l.z_f[1]).norm() - s2).abs() < 1e-15);
        for f in 0..2 {
            for v in 0..2 {
                assert!(((l.z_f[f] - l.z_v[v]).norm() - 1.0).abs() < 1e-15);
            }
        }
        assert!(l.z_f[0].norm() < 1e-15);
        assert!((l.z_v[1] - l.z_v[0]).im.abs() < 1e-15);
        assert!(l.gluing_residual < 1e-15);
    }

    #[test]
    fn boundary_seed_rejected() {
        let (c, p) = single_kite();
        let e = (0..c.num_edges()).find(|&e| c.is_boundary_edge(e)).unwrap();
        assert!(layout(&c, &p, Some(e)).is_err());
    }

    #[test]
    fn procrustes_recovers_similarity() {
        let src: Vec<Complex64> = (0..7)
            .map(|k| Complex64::from_polar(1.0 + k as f64, 0.9 * k as f64))
            .collect();
        let (a0, b0) = (Complex64::new(0.3, -1.2), Complex64::new(4.0, 2.0));
        let dst: Vec<Complex64> = src.iter().map(|z| a0 * z + b0).collect();
        let (a, b, _, err) = procrustes_align(&src, &dst);
        assert!((a - a0).norm() < 1e-13 && (b - b0).norm() < 1e-12 && err < 1e-12);
    }

    #[test]
    fn polygon_area_and_centroid() {
        let sq = [(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)].map(|(x, y)| Complex64::new(x, y));
        let (a, ctr) = polygon_area_centroid(&sq);
        assert_eq!(a, 4.0);
        assert_eq!(ctr, Complex64::new(1.0, 1.0));
        assert!((wrap_angle(3.0 * PI) + PI).abs() < 1e-15);
    }
}
