//! Dirichlet energies and harmonic extension on the dual and primal graphs.
//!
//! Both graphs use the interior edges only: faces are joined across
//! interior edges, and vertices along them.

use crate::cell_complex::DiskComplex;
use crate::error::{Error, Result};
use crate::functionals::sparse::{solve_spd, SparseSym};
use crate::functionals::{FaceField, VertexField};

/// Which graph a field lives on.
#[derive(Clone, Copy, Debug)]
pub enum Field<'a> {
    Faces(&'a [f64]),
    Vertices(&'a [f64]),
}

/// `sum_e w_e (difference across e)^2` over interior edges. `weights` is
/// indexed by edge; `None` means unit weights.
pub fn dirichlet_energy(c: &DiskComplex, field: Field<'_>, weights: Option<&[f64]>) -> f64 {
    c.dual_edges()
        .map(|(e, f, g)| {
            let d = match field {
                Field::Faces(u) => u[f] - u[g],
                Field::Vertices(v) => {
                    let ed = c.edge(e);
                    v[ed.tail] - v[ed.head]
                }
            };
            weights.map_or(1.0, |w| w[e]) * d * d
        })
        .sum()
}

/// Edges of the dual graph as `(phi, psi, weight)`.
pub fn face_graph(c: &DiskComplex, weights: Option<&[f64]>) -> Vec<(usize, usize, f64)> {
    c.dual_edges()
        .map(|(e, f, g)| (f, g, weights.map_or(1.0, |w| w[e])))
        .collect()
}

/// Interior edges of the primal graph as `(tail, head, weight)`.
pub fn vertex_graph(c: &DiskComplex, weights: Option<&[f64]>) -> Vec<(usize, usize, f64)> {
    c.dual_edges()
        .map(|(e, _, _)| {
            let ed = c.edge(e);
            (ed.tail, ed.head, weights.map_or(1.0, |w| w[e]))
        })
        .collect()
}

/// Solve the weighted Laplace equation at the free nodes with the fixed
/// nodes as Dirichlet data. Free nodes without edges keep their value.
pub fn harmonic_extension_graph(
    n: usize,
    edges: &[(usize, usize, f64)],
    values: &[f64],
    free: &[bool],
) -> Result<Vec<f64>> {
    let mut has_edge = vec![false; n];
    for &(i, j, w) in edges {
        if !(w > 0.0) {
            return Err(Error::Domain(format!("non-positive weight {w} on edge {i}-{j}")));
        }
        has_edge[i] = true;
        has_edge[j] = true;
    }
    let solve_mask: Vec<bool> = (0..n).map(|i| free[i] && has_edge[i]).collect();
    let mut lap = SparseSym::new(n);
    let mut rhs = vec![0.0; n];
    for &(i, j, w) in edges {
        lap.add_edge(i, j, w);
        if solve_mask[i] && !solve_mask[j] {
            rhs[i] += w * values[j];
        }
        if solve_mask[j] && !solve_mask[i] {
            rhs[j] += w * values[i];
        }
    }
    let (a, map) = lap.restrict(&solve_mask);
    let b: Vec<f64> = (0..n).filter(|&i| solve_mask[i]).map(|i| rhs[i]).collect();
    let x = solve_spd(&a, &b)?;
    let mut out = values.to_vec();
    for i in 0..n {
        if solve_mask[i] {
            out[i] = x[map[i]];
        }
    }
    Ok(out)
}

/// Harmonic extension of the fixed entries of a face field; `weights`
/// per edge (for instance `c_dual`), or unit weights.
pub fn harmonic_extension_faces(c: &DiskComplex, weights: Option<&[f64]>, data: &FaceField) -> Result<FaceField> {
    if data.free.iter().all(|f| *f) {
        return Err(Error::InvalidSpec(
            "harmonic extension needs at least one fixed face".into(),
        ));
    }
    let values = harmonic_extension_graph(c.num_faces(), &face_graph(c, weights), &data.values, &data.free)?;
    Ok(FaceField::new(values, data.free.clone()))
}

/// Harmonic extension of the fixed entries of a vertex field; `weights`
/// per edge (for instance `c_primal`), or unit weights.
pub fn harmonic_extension_vertices(
    c: &DiskComplex,
    weights: Option<&[f64]>,
    data: &VertexField,
) -> Result<VertexField> {
    if data.free.iter().all(|f| *f) {
        return Err(Error::InvalidSpec(
            "harmonic extension needs at least one fixed vertex".into(),
        ));
    }
    let values = harmonic_extension_graph(c.num_vertices(), &vertex_graph(c, weights), &data.values, &data.free)?;
    Ok(VertexField::new(values, data.free.clone()))
}

/// Weighted Laplacian `sum_j w (x_j - x_i)` at every node of a graph.
pub fn graph_laplacian_apply(n: usize, edges: &[(usize, usize, f64)], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for &(i, j, w) in edges {
        out[i] += w * (x[j] - x[i]);
        out[j] += w * (x[i] - x[j]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli_io::square_grid;

    #[test]
    fn checkerboard_energy() {
        let c = square_grid(2);
        // two-colour the dual graph
        let mut colour = vec![0.0; 4];
        let mut stack = vec![0];
        let mut seen = [false; 4];
        seen[0] = true;
        while let Some(f) = stack.pop() {
            for (_, g) in c.face_neighbors(f) {
                if !seen[g] {
                    seen[g] = true;
                    colour[g] = 1.0 - colour[f];
                    stack.push(g);
                }
            }
        }
        assert_eq!(dirichlet_energy(&c, Field::Faces(&colour), None), 4.0);
        assert_eq!(dirichlet_energy(&c, Field::Faces(&[2.5; 4]), None), 0.0);
    }

    #[test]
    fn constant_boundary_extends_constant() {
        let c = square_grid(4);
        let free: Vec<bool> = (0..c.num_faces()).map(|f| !c.is_boundary_face(f)).collect();
        let h = harmonic_extension_faces(&c, None, &FaceField::new(vec![1.5; c.num_faces()], free)).unwrap();
        assert!(h.values.iter().all(|v| (v - 1.5).abs() < 1e-14));
        let lap = graph_laplacian_apply(c.num_faces(), &face_graph(&c, None), &h.values);
        assert!(lap.iter().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn all_free_is_rejected() {
        let c = square_grid(2);
        assert!(harmonic_extension_faces(&c, None, &FaceField::new(vec![0.0; 4], vec![true; 4])).is_err());
    }
}
