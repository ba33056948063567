//! Angle and edge-ratio bounds of a layout's straight-line decompositions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cell_complex::DiskComplex;
use crate::pattern_engine::Layout;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodEmbeddingReport {
    pub min_angle: f64,
    pub max_ratio: f64,
    /// `min_angle > eta` and `max_ratio < d`.
    pub pass: bool,
}

#[derive(Default)]
struct Acc {
    min_angle: f64,
    max_ratio: f64,
}

impl Acc {
    /// Interior angles and adjacent-edge length ratios of a positively
    /// oriented polygon.
    fn polygon(&mut self, p: &[Complex64]) {
        let n = p.len();
        if n < 3 {
            return;
        }
        for k in 0..n {
            let prev = p[(k + n - 1) % n];
            let next = p[(k + 1) % n];
            let a = prev - p[k];
            let b = next - p[k];
            // counter-clockwise turn from the outgoing to the incoming edge
            let mut ang = (a / b).arg();
            if ang < 0.0 {
                ang += 2.0 * PI;
            }
            self.min_angle = self.min_angle.min(ang);
            let (la, lb) = (a.norm(), b.norm());
            self.max_ratio = self.max_ratio.max((la / lb).max(lb / la));
        }
    }
}

/// Smallest interior angle and largest ratio of adjacent edge lengths over
/// the primal faces, the dual polygons around interior vertices and the
/// kites, with the verdict for the bounds `(d, eta)`.
pub fn good_embedding_report(l: &Layout, c: &DiskComplex, d: f64, eta: f64) -> GoodEmbeddingReport {
    let mut acc = Acc {
        min_angle: f64::INFINITY,
        max_ratio: 1.0,
    };
    for f in 0..c.num_faces() {
        let p: Vec<Complex64> = c.face_vertices(f).iter().map(|&v| l.z_v[v]).collect();
        acc.polygon(&p);
    }
    for v in c.interior_vertices() {
        // faces around v in counter-clockwise order are the left faces of
        // the outgoing edges and the right faces of the incoming ones
        let p: Vec<Complex64> = c
            .vertex_edges(v)
            .iter()
            .map(|&e| {
                let ed = c.edge(e);
                if ed.tail == v {
                    l.z_f[ed.left]
                } else {
                    l.z_f[ed.right.unwrap()]
                }
            })
            .collect();
        acc.polygon(&p);
    }
    for (e, f, g) in c.dual_edges() {
        let ed = c.edge(e);
        acc.polygon(&[l.z_v[ed.tail], l.z_f[g], l.z_v[ed.head], l.z_f[f]]);
    }
    GoodEmbeddingReport {
        min_angle: acc.min_angle,
        max_ratio: acc.max_ratio,
        pass: acc.min_angle > eta && acc.max_ratio < d,
    }
}
