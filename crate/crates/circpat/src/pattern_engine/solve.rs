//! Boundary value problems for radii and central angles.

use serde::{Deserialize, Serialize};

use crate::analysis::energy::{dirichlet_energy, harmonic_extension_faces, harmonic_extension_vertices, Field};
use crate::cell_complex::{AngleData, DiskComplex};
use crate::error::{Error, Result};
use crate::functionals::w::{holonomy, is_admissible};
use crate::functionals::{
    newton_solve, FaceField, NewtonOptions, Sense, SolveReport, VertexField, WEnergy, WStarEnergy,
};

use super::conjugate::pattern_from_angles;
use super::PatternSolution;

/// Solver settings shared by the pattern workflows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct SolveOptions {
    pub newton: NewtonOptions,
    /// Face whose radius pins the scale of angle-parametrised patterns.
    pub gauge_face: Option<usize>,
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        let mut o = SolveOptions::default();
        o.newton.tol = tol;
        o
    }
}

fn check_boundary_faces_fixed(c: &DiskComplex, data: &FaceField) -> Result<()> {
    if data.len() != c.num_faces() {
        return Err(Error::InvalidSpec(format!(
            "face field has {} entries for {} faces",
            data.len(),
            c.num_faces()
        )));
    }
    if let Some(f) = c.boundary_faces().into_iter().find(|&f| data.free[f]) {
        return Err(Error::InvalidSpec(format!("boundary face {f} is not fixed")));
    }
    if !data.is_finite() {
        return Err(Error::InvalidSpec("face field has non-finite entries".into()));
    }
    Ok(())
}

/// Minimise W* plus the curvature defect of `reference`, starting from the
/// harmonic extension of the fixed entries of `data`.
fn solve_log_radii(
    c: &DiskComplex,
    th: &AngleData,
    reference: &FaceField,
    data: &FaceField,
    opts: &SolveOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    check_boundary_faces_fixed(c, data)?;
    let start = harmonic_extension_faces(c, None, data)?;
    let energy = WStarEnergy::new(c, th, reference);
    newton_solve(&energy, &start.values, &data.free, Sense::Minimize, &opts.newton)
}

/// Radii solving the angle-sum equation at interior faces with prescribed
/// log-radii on the fixed faces.
pub fn uniformize(
    c: &DiskComplex,
    th: &AngleData,
    boundary_log_radii: &FaceField,
    opts: &SolveOptions,
) -> Result<(PatternSolution, SolveReport)> {
    let reference = FaceField::zeros(c.num_faces());
    let (x, report) = solve_log_radii(c, th, &reference, boundary_log_radii, opts)?;
    let radii = x.iter().map(|v| v.exp()).collect();
    Ok((PatternSolution::from_radii(c, th, radii), report))
}

/// Result of a deformation in log-radius variables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeformRadii {
    pub u: FaceField,
    pub pattern: PatternSolution,
    pub report: SolveReport,
    /// Combinatorial Dirichlet energy of `u`.
    pub energy: f64,
}

/// Deform `reference` by log-radii `u`, fixed on the boundary faces and
/// solved for in the interior.
pub fn deform_radii(
    c: &DiskComplex,
    th: &AngleData,
    reference: &PatternSolution,
    boundary_u: &FaceField,
    opts: &SolveOptions,
) -> Result<DeformRadii> {
    let ref_log = FaceField::fixed(reference.log_radii());
    let (x, report) = solve_log_radii(c, th, &ref_log, boundary_u, opts)?;
    let radii = x.iter().zip(&reference.radii).map(|(u, r)| u.exp() * r).collect();
    let pattern = PatternSolution::from_radii(c, th, radii);
    let energy = dirichlet_energy(c, Field::Faces(&x), None);
    Ok(DeformRadii {
        u: FaceField::new(x, boundary_u.free.clone()),
        pattern,
        report,
        energy,
    })
}

/// Result of a deformation in central-angle variables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeformAngles {
    pub v: VertexField,
    pub pattern: PatternSolution,
    pub report: SolveReport,
    /// Largest scaling holonomy over interior vertices.
    pub holonomy_residual: f64,
}

/// Gauss-Seidel sweeps moving each free vertex to the middle of the
/// interval its neighbours allow.
fn repair_admissibility(c: &DiskComplex, reference: &PatternSolution, v: &mut [f64], free: &[bool]) {
    for _ in 0..500 {
        if is_admissible(c, &reference.kites, v) {
            return;
        }
        for i in 0..c.num_vertices() {
            if !free[i] {
                continue;
            }
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for (e, j) in c.vertex_neighbors(i) {
                let k = reference.kites.kites[e].unwrap();
                let ed = c.edge(e);
                // with d = v_head - v_tail: -2 alpha_left < d < 2 alpha_right
                if ed.tail == i {
                    lo = lo.max(v[j] - 2.0 * k.alpha_right);
                    hi = hi.min(v[j] + 2.0 * k.alpha_left);
                } else {
                    lo = lo.max(v[j] - 2.0 * k.alpha_left);
                    hi = hi.min(v[j] + 2.0 * k.alpha_right);
                }
            }
            if lo < hi {
                v[i] = 0.5 * (lo + hi);
            }
        }
    }
}

/// Deform `reference` by central-angle data `v`, fixed on the boundary
/// vertices and obtained in the interior by maximising W.
pub fn deform_angles(
    c: &DiskComplex,
    th: &AngleData,
    reference: &PatternSolution,
    boundary_v: &VertexField,
    opts: &SolveOptions,
) -> Result<DeformAngles> {
    if boundary_v.len() != c.num_vertices() {
        return Err(Error::InvalidSpec(format!(
            "vertex field has {} entries for {} vertices",
            boundary_v.len(),
            c.num_vertices()
        )));
    }
    if let Some(i) = (0..c.num_vertices()).find(|&i| c.is_boundary_vertex(i) && boundary_v.free[i]) {
        return Err(Error::InvalidSpec(format!("boundary vertex {i} is not fixed")));
    }
    if !boundary_v.is_finite() {
        return Err(Error::InvalidSpec("vertex field has non-finite entries".into()));
    }
    let free: Vec<bool> = (0..c.num_vertices())
        .map(|i| boundary_v.free[i] && c.is_active_vertex(i))
        .collect();
    let data = VertexField::new(boundary_v.values.clone(), free.clone());
    let mut start = if free.iter().any(|f| *f) {
        harmonic_extension_vertices(c, None, &data)?.values
    } else {
        data.values.clone()
    };
    repair_admissibility(c, reference, &mut start, &free);
    if !is_admissible(c, &reference.kites, &start) {
        return Err(Error::InadmissibleBoundary);
    }
    let energy = WEnergy {
        complex: c,
        kites: &reference.kites,
    };
    let (v, report) = newton_solve(&energy, &start, &free, Sense::Maximize, &opts.newton)?;
    let hol = holonomy(c, &reference.kites, &v);
    let holonomy_residual = c.interior_vertices().iter().fold(0.0f64, |m, &i| m.max(hol[i].abs()));
    let gauge = opts
        .gauge_face
        .unwrap_or_else(|| c.boundary_faces().first().copied().unwrap_or(0));
    let pattern = pattern_from_angles(c, th, reference, &v, gauge)?;
    Ok(DeformAngles {
        v: VertexField::new(v, boundary_v.free.clone()),
        pattern,
        report,
        holonomy_residual,
    })
}

/// Smallest shifted angle of `v` against the reference kites.
pub fn min_shifted_angle(c: &DiskComplex, reference: &PatternSolution, v: &[f64]) -> f64 {
    crate::functionals::w::min_shifted_angle(c, &reference.kites, v)
}
