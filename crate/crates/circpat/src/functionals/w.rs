//! Lobachevsky functional in central-angle variables and its derivatives.

use std::f64::consts::PI;

use crate::cell_complex::DiskComplex;
use crate::error::{Error, Result};
use crate::kite_geometry::{lobachevsky, primal_weight_from_angles, KiteTable};

use super::sparse::SparseSym;
use super::VertexField;

/// Fraction of the distance to the admissibility boundary a step may consume.
pub const FRACTION_TO_BOUNDARY: f64 = 0.05;

/// Shifted angles `(alpha_ref_left + d/2, alpha_ref_right - d/2)` with `d = v_j - v_i`.
pub fn shifted_angles(v_i: f64, v_j: f64, alpha_left_ref: f64, alpha_right_ref: f64) -> (f64, f64) {
    let d = v_j - v_i;
    (alpha_left_ref + 0.5 * d, alpha_right_ref - 0.5 * d)
}

fn in_closed(a: f64) -> bool {
    (0.0..=PI).contains(&a)
}

fn in_open(a: f64) -> bool {
    a > 0.0 && a < PI
}

/// Edge term of W at vertex values `(v_i, v_j)`; defined on the closed
/// admissible interval.
pub fn w_edge(v_i: f64, v_j: f64, alpha_left_ref: f64, alpha_right_ref: f64) -> Result<f64> {
    let (a, b) = shifted_angles(v_i, v_j, alpha_left_ref, alpha_right_ref);
    if !(in_closed(a) && in_closed(b)) {
        return Err(Error::Domain(format!("shifted angles ({a}, {b}) leave [0, pi]")));
    }
    Ok(w_edge_unchecked(v_i, v_j, alpha_left_ref, alpha_right_ref))
}

fn w_edge_unchecked(v_i: f64, v_j: f64, al: f64, ar: f64) -> f64 {
    let (a, b) = shifted_angles(v_i, v_j, al, ar);
    2.0 * (lobachevsky(a) + lobachevsky(b) - lobachevsky(al) - lobachevsky(ar))
        + (v_i - v_j) * (ar.sin() / al.sin()).ln()
}

/// `K_ij = log(sin a / sin b) - log(sin alpha_ref_left / sin alpha_ref_right)`
/// at the shifted angles `(a, b)`.
pub fn k_edge(v_i: f64, v_j: f64, alpha_left_ref: f64, alpha_right_ref: f64) -> Result<f64> {
    let (a, b) = shifted_angles(v_i, v_j, alpha_left_ref, alpha_right_ref);
    if !(in_open(a) && in_open(b)) {
        return Err(Error::Domain(format!("shifted angles ({a}, {b}) leave (0, pi)")));
    }
    Ok((a.sin() / b.sin()).ln() - (alpha_left_ref.sin() / alpha_right_ref.sin()).ln())
}

fn ref_kite(kites: &KiteTable, e: usize) -> (f64, f64) {
    let k = kites.kites[e].expect("interior edge without kite");
    (k.alpha_left, k.alpha_right)
}

/// Strict admissibility of `v` for the reference kites.
pub fn is_admissible(c: &DiskComplex, kites: &KiteTable, v: &[f64]) -> bool {
    min_shifted_angle(c, kites, v) > 0.0 && max_shifted_angle(c, kites, v) < PI
}

/// Smallest shifted angle over all interior edges.
pub fn min_shifted_angle(c: &DiskComplex, kites: &KiteTable, v: &[f64]) -> f64 {
    c.dual_edges()
        .map(|(e, _, _)| {
            let ed = c.edge(e);
            let (al, ar) = ref_kite(kites, e);
            let (a, b) = shifted_angles(v[ed.tail], v[ed.head], al, ar);
            a.min(b)
        })
        .fold(f64::INFINITY, f64::min)
}

fn max_shifted_angle(c: &DiskComplex, kites: &KiteTable, v: &[f64]) -> f64 {
    c.dual_edges()
        .map(|(e, _, _)| {
            let ed = c.edge(e);
            let (al, ar) = ref_kite(kites, e);
            let (a, b) = shifted_angles(v[ed.tail], v[ed.head], al, ar);
            a.max(b)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Sum of W edge terms; `None` outside the closed admissible set.
pub fn total_w(c: &DiskComplex, kites: &KiteTable, v: &VertexField) -> Option<f64> {
    let mut sum = 0.0;
    for (e, _, _) in c.dual_edges() {
        let ed = c.edge(e);
        let (al, ar) = ref_kite(kites, e);
        sum += w_edge(v.values[ed.tail], v.values[ed.head], al, ar).ok()?;
    }
    Some(sum)
}

/// Gradient of W: the entry at vertex `i` is `sum_j K_ij(v)`.
pub fn grad_w(c: &DiskComplex, kites: &KiteTable, v: &VertexField) -> Result<Vec<f64>> {
    let mut g = vec![0.0; c.num_vertices()];
    for (e, _, _) in c.dual_edges() {
        let ed = c.edge(e);
        let (al, ar) = ref_kite(kites, e);
        let k = k_edge(v.values[ed.tail], v.values[ed.head], al, ar)?;
        g[ed.tail] += k;
        g[ed.head] -= k;
    }
    Ok(g)
}

/// Hessian of W: minus the primal Laplacian with weights
/// `(cot a + cot b) / 2` at the shifted angles.
pub fn hessian_w(c: &DiskComplex, kites: &KiteTable, v: &VertexField) -> Result<SparseSym> {
    let mut h = SparseSym::new(c.num_vertices());
    for (e, _, _) in c.dual_edges() {
        let ed = c.edge(e);
        let (al, ar) = ref_kite(kites, e);
        let (a, b) = shifted_angles(v.values[ed.tail], v.values[ed.head], al, ar);
        if !(in_open(a) && in_open(b)) {
            return Err(Error::Domain(format!(
                "edge {e}: shifted angles ({a}, {b}) leave (0, pi)"
            )));
        }
        h.add_edge(ed.tail, ed.head, -primal_weight_from_angles(a, b));
    }
    Ok(h)
}

/// Scaling holonomy `sum_j log(sin a / sin b)` at every vertex.
pub fn holonomy(c: &DiskComplex, kites: &KiteTable, v: &[f64]) -> Vec<f64> {
    let mut h = vec![0.0; c.num_vertices()];
    for (e, _, _) in c.dual_edges() {
        let ed = c.edge(e);
        let (al, ar) = ref_kite(kites, e);
        let (a, b) = shifted_angles(v[ed.tail], v[ed.head], al, ar);
        let l = (a.sin() / b.sin()).ln();
        h[ed.tail] += l;
        h[ed.head] -= l;
    }
    h
}

/// W as a [`super::Energy`] with the fraction-to-boundary guard.
pub struct WEnergy<'a> {
    pub complex: &'a DiskComplex,
    pub kites: &'a KiteTable,
}

impl super::Energy for WEnergy<'_> {
    fn dim(&self) -> usize {
        self.complex.num_vertices()
    }

    fn value(&self, x: &[f64]) -> Option<f64> {
        total_w(self.complex, self.kites, &VertexField::fixed(x.to_vec()))
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        grad_w(self.complex, self.kites, &VertexField::fixed(x.to_vec())).unwrap_or_else(|_| vec![f64::NAN; x.len()])
    }

    fn hessian(&self, x: &[f64]) -> SparseSym {
        hessian_w(self.complex, self.kites, &VertexField::fixed(x.to_vec())).unwrap_or_else(|_| SparseSym::new(x.len()))
    }

    fn is_admissible(&self, x: &[f64]) -> bool {
        is_admissible(self.complex, self.kites, x)
    }

    fn max_step(&self, x: &[f64], dir: &[f64]) -> f64 {
        let mut t: f64 = f64::INFINITY;
        let keep = 1.0 - FRACTION_TO_BOUNDARY;
        for (e, _, _) in self.complex.dual_edges() {
            let ed = self.complex.edge(e);
            let (al, ar) = ref_kite(self.kites, e);
            let (a, b) = shifted_angles(x[ed.tail], x[ed.head], al, ar);
            // a moves by t*d/2, b by -t*d/2
            let d = dir[ed.head] - dir[ed.tail];
            if d < 0.0 {
                t = t.min(keep * a / (-0.5 * d));
            } else if d > 0.0 {
                t = t.min(keep * b / (0.5 * d));
            }
        }
        t
    }
}
