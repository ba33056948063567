//! Conjugation between log-radius and central-angle data, and discrete
//! harmonic conjugates of tangent vectors.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::cell_complex::{AngleData, DiskComplex};
use crate::error::{Error, Result};
use crate::functionals::w::shifted_angles;
use crate::functionals::{FaceField, VertexField};
use crate::kite_geometry::{half_angle_at, EdgeWeights};

use super::PatternSolution;

/// Default closedness threshold for [`conjugate_u_to_v`].
pub const CONJUGATE_CLOSEDNESS_TOL: f64 = 1e-9;

/// Default closedness threshold for the tangent conjugates.
pub const TANGENT_CLOSEDNESS_TOL: f64 = 1e-8;

/// Integrate per-edge differences `x_head - x_tail` (given on interior
/// edges) over a breadth-first spanning tree of the active vertices rooted
/// at `root`. Returns the values and the largest mismatch on co-tree edges.
pub fn integrate_vertex_differences(c: &DiskComplex, diffs: &[f64], root: usize) -> Result<(Vec<f64>, f64)> {
    let n = c.num_vertices();
    if root >= n || !c.is_active_vertex(root) {
        return Err(Error::InvalidSpec(format!("root vertex {root} has no interior edge")));
    }
    let mut x = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut tree_edge = vec![false; c.num_edges()];
    seen[root] = true;
    let mut q = VecDeque::from([root]);
    while let Some(i) = q.pop_front() {
        for (e, j) in c.vertex_neighbors(i) {
            if seen[j] {
                continue;
            }
            let ed = c.edge(e);
            x[j] = if ed.tail == i { x[i] + diffs[e] } else { x[i] - diffs[e] };
            seen[j] = true;
            tree_edge[e] = true;
            q.push_back(j);
        }
    }
    if (0..n).any(|i| c.is_active_vertex(i) && !seen[i]) {
        return Err(Error::InvalidComplex(vec![
            "interior edges do not connect the active vertices".into(),
        ]));
    }
    let closedness = c
        .dual_edges()
        .filter(|(e, _, _)| !tree_edge[*e])
        .map(|(e, _, _)| {
            let ed = c.edge(e);
            (x[ed.head] - x[ed.tail] - diffs[e]).abs()
        })
        .fold(0.0, f64::max);
    fill_inactive_vertices(c, &mut x);
    Ok((x, closedness))
}

/// Integrate per-edge differences `y_right - y_left` over a breadth-first
/// spanning tree of the dual graph rooted at face `root`.
pub fn integrate_face_differences(c: &DiskComplex, diffs: &[f64], root: usize) -> Result<(Vec<f64>, f64)> {
    let n = c.num_faces();
    if root >= n {
        return Err(Error::InvalidSpec(format!("root face {root} out of range")));
    }
    let mut y = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut tree_edge = vec![false; c.num_edges()];
    seen[root] = true;
    let mut q = VecDeque::from([root]);
    while let Some(f) = q.pop_front() {
        for (e, g) in c.face_neighbors(f) {
            if seen[g] {
                continue;
            }
            y[g] = if c.edge(e).left == f {
                y[f] + diffs[e]
            } else {
                y[f] - diffs[e]
            };
            seen[g] = true;
            tree_edge[e] = true;
            q.push_back(g);
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidComplex(vec!["dual graph is disconnected".into()]));
    }
    let closedness = c
        .dual_edges()
        .filter(|(e, _, _)| !tree_edge[*e])
        .map(|(e, f, g)| (y[g] - y[f] - diffs[e]).abs())
        .fold(0.0, f64::max);
    Ok((y, closedness))
}

/// Give vertices without interior edges values interpolated linearly along
/// the boundary run of their face between the neighbouring active vertices.
pub fn fill_inactive_vertices(c: &DiskComplex, x: &mut [f64]) {
    for f in 0..c.num_faces() {
        let cyc = c.face_vertices(f);
        let n = cyc.len();
        let Some(start) = (0..n).find(|&k| c.is_active_vertex(cyc[k])) else {
            continue;
        };
        let mut k = start;
        loop {
            // k is active; find the next active position
            let mut m = 1;
            while m < n && !c.is_active_vertex(cyc[(k + m) % n]) {
                m += 1;
            }
            let a = x[cyc[k]];
            let b = x[cyc[(k + m) % n]];
            for s in 1..m {
                x[cyc[(k + s) % n]] = a + (b - a) * s as f64 / m as f64;
            }
            k = (k + m) % n;
            if k == start {
                break;
            }
        }
    }
}

fn default_root(c: &DiskComplex) -> usize {
    (0..c.num_vertices()).find(|&i| c.is_active_vertex(i)).unwrap_or(0)
}

/// Output of [`conjugate_u_to_v`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugateResult {
    pub v: VertexField,
    pub closedness: f64,
}

/// Central-angle data of the pattern with radii `e^u R_ref`:
/// `v_j - v_i = 2 (alpha_{phi psi}(u) - alpha_ref_{phi psi})`, integrated from
/// `root` (default: the first active vertex) with `v_root = 0`.
pub fn conjugate_u_to_v(
    c: &DiskComplex,
    th: &AngleData,
    reference: &PatternSolution,
    u: &FaceField,
    root: Option<usize>,
) -> Result<ConjugateResult> {
    let mut diffs = vec![0.0; c.num_edges()];
    for (e, f, g) in c.dual_edges() {
        let k = reference.kites.kites[e].expect("interior edge without kite");
        let x = (reference.radii[f] / reference.radii[g]).ln() + u.values[f] - u.values[g];
        diffs[e] = 2.0 * (half_angle_at(x, th.theta[e]) - k.alpha_left);
    }
    let (v, closedness) = integrate_vertex_differences(c, &diffs, root.unwrap_or_else(|| default_root(c)))?;
    if !(closedness <= CONJUGATE_CLOSEDNESS_TOL) {
        return Err(Error::ClosednessFailure {
            residual: closedness,
            threshold: CONJUGATE_CLOSEDNESS_TOL,
        });
    }
    let free = (0..c.num_vertices()).map(|i| !c.is_boundary_vertex(i)).collect();
    Ok(ConjugateResult {
        v: VertexField::new(v, free),
        closedness,
    })
}

/// Radii of the pattern with central-angle data `v` over `reference`,
/// integrated over the dual graph from `gauge_face`, whose radius is kept.
pub fn pattern_from_angles(
    c: &DiskComplex,
    th: &AngleData,
    reference: &PatternSolution,
    v: &[f64],
    gauge_face: usize,
) -> Result<PatternSolution> {
    let mut diffs = vec![0.0; c.num_edges()];
    for (e, _, _) in c.dual_edges() {
        let k = reference.kites.kites[e].expect("interior edge without kite");
        let ed = c.edge(e);
        let (a, b) = shifted_angles(v[ed.tail], v[ed.head], k.alpha_left, k.alpha_right);
        if !(a > 0.0 && b > 0.0 && a < std::f64::consts::PI && b < std::f64::consts::PI) {
            return Err(Error::Domain(format!(
                "edge {e}: shifted angles ({a}, {b}) leave (0, pi)"
            )));
        }
        diffs[e] = (a.sin() / b.sin()).ln();
    }
    let (logr, _) = integrate_face_differences(c, &diffs, gauge_face)?;
    let base = reference.radii[gauge_face].ln();
    let radii = logr.iter().map(|l| (l + base).exp()).collect();
    Ok(PatternSolution::from_radii(c, th, radii))
}

/// Conjugate of a face tangent `w` that is harmonic for `c_dual` at the
/// interior faces: `x_j - x_i = (w_psi - w_phi) / c_ij`.
pub fn harmonic_conjugate_tangent(c: &DiskComplex, weights: &EdgeWeights, w: &FaceField) -> Result<(VertexField, f64)> {
    let mut diffs = vec![0.0; c.num_edges()];
    for (e, f, g) in c.dual_edges() {
        diffs[e] = (w.values[g] - w.values[f]) / weights.c_primal[e];
    }
    let (x, closedness) = integrate_vertex_differences(c, &diffs, default_root(c))?;
    if !(closedness <= TANGENT_CLOSEDNESS_TOL) {
        return Err(Error::ClosednessFailure {
            residual: closedness,
            threshold: TANGENT_CLOSEDNESS_TOL,
        });
    }
    let free = (0..c.num_vertices()).map(|i| !c.is_boundary_vertex(i)).collect();
    Ok((VertexField::new(x, free), closedness))
}

/// Conjugate of a vertex tangent `x` that is harmonic for `c_primal` at the
/// interior vertices: `y_psi - y_phi = c_ij (x_i - x_j)`. Composed with
/// [`harmonic_conjugate_tangent`] it gives minus the identity up to constants.
pub fn harmonic_conjugate_vertex(c: &DiskComplex, weights: &EdgeWeights, x: &VertexField) -> Result<(FaceField, f64)> {
    let mut diffs = vec![0.0; c.num_edges()];
    for (e, _, _) in c.dual_edges() {
        let ed = c.edge(e);
        diffs[e] = weights.c_primal[e] * (x.values[ed.tail] - x.values[ed.head]);
    }
    let (y, closedness) = integrate_face_differences(c, &diffs, 0)?;
    if !(closedness <= TANGENT_CLOSEDNESS_TOL) {
        return Err(Error::ClosednessFailure {
            residual: closedness,
            threshold: TANGENT_CLOSEDNESS_TOL,
        });
    }
    let free = (0..c.num_faces()).map(|f| !c.is_boundary_face(f)).collect();
    Ok((FaceField::new(y, free), closedness))
}
