//! Dilogarithm functional in log-radius variables and its derivatives.

use std::f64::consts::PI;

use crate::cell_complex::{AngleData, DiskComplex};
use crate::error::{Error, Result};
use crate::kite_geometry::special::im_dilog_unchecked;
use crate::kite_geometry::{dual_weight_log, half_angle_at};

use super::sparse::SparseSym;
use super::FaceField;

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < PI {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta = {theta} outside (0, pi)")))
    }
}

/// Edge term of W* at log-radius changes `(u_phi, u_psi)` relative to a
/// reference with `log(R_phi / R_psi) = ref_log_ratio`.
pub fn wstar_edge(u_phi: f64, u_psi: f64, ref_log_ratio: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(wstar_edge_unchecked(u_phi - u_psi, ref_log_ratio, theta))
}

pub(crate) fn wstar_edge_unchecked(du: f64, rho: f64, theta: f64) -> f64 {
    let x = du + rho;
    let a_left = half_angle_at(rho, theta);
    let a_right = half_angle_at(-rho, theta);
    im_dilog_unchecked(x, theta) + im_dilog_unchecked(-x, theta)
        - im_dilog_unchecked(rho, theta)
        - im_dilog_unchecked(-rho, theta)
        + (a_left - a_right) * du
}

/// `K*_{phi psi} = 2 alpha_ref - 2 alpha(u)` at the left centre.
pub fn kstar_edge(u_phi: f64, u_psi: f64, ref_log_ratio: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(kstar_unchecked(u_phi - u_psi, ref_log_ratio, theta))
}

pub(crate) fn kstar_unchecked(du: f64, rho: f64, theta: f64) -> f64 {
    2.0 * half_angle_at(rho, theta) - 2.0 * half_angle_at(du + rho, theta)
}

/// Sum of edge terms of W* over interior edges.
pub fn total_wstar(c: &DiskComplex, th: &AngleData, reference: &FaceField, u: &FaceField) -> f64 {
    c.dual_edges()
        .map(|(e, f, g)| {
            let rho = reference.values[f] - reference.values[g];
            wstar_edge_unchecked(u.values[f] - u.values[g], rho, th.theta[e])
        })
        .sum()
}

/// Gradient of W*: the entry at face `phi` is `sum_psi K*_{phi psi}(u)`.
/// `reference` holds the log-radii of the reference pattern.
pub fn grad_wstar(c: &DiskComplex, th: &AngleData, reference: &FaceField, u: &FaceField) -> Vec<f64> {
    let mut g = vec![0.0; c.num_faces()];
    for (e, f, h) in c.dual_edges() {
        let rho = reference.values[f] - reference.values[h];
        let k = kstar_unchecked(u.values[f] - u.values[h], rho, th.theta[e]);
        g[f] += k;
        g[h] -= k;
    }
    g
}

/// Hessian of W*: the dual Laplacian with weights `c*` at radii `e^u R_ref`.
pub fn hessian_wstar(c: &DiskComplex, th: &AngleData, reference: &FaceField, u: &FaceField) -> SparseSym {
    let mut h = SparseSym::new(c.num_faces());
    for (e, f, g) in c.dual_edges() {
        let x = (u.values[f] + reference.values[f]) - (u.values[g] + reference.values[g]);
        h.add_edge(f, g, dual_weight_log(x, th.theta[e]));
    }
    h
}

/// Linear correction making the reference's own angle-sum defect part of
/// the equation: `kappa_phi = 2 pi - 2 sum_psi alpha_ref` at interior faces.
pub(crate) fn curvature_defect(c: &DiskComplex, th: &AngleData, reference: &FaceField) -> Vec<f64> {
    let mut sums = vec![0.0; c.num_faces()];
    for (e, f, g) in c.dual_edges() {
        let rho = reference.values[f] - reference.values[g];
        sums[f] += half_angle_at(rho, th.theta[e]);
        sums[g] += half_angle_at(-rho, th.theta[e]);
    }
    (0..c.num_faces())
        .map(|f| {
            if c.is_boundary_face(f) {
                0.0
            } else {
                2.0 * PI - 2.0 * sums[f]
            }
        })
        .collect()
}

/// W* plus the linear defect term; its critical points on the free faces
/// are exactly the solutions of the angle-sum equation.
pub struct WStarEnergy<'a> {
    pub complex: &'a DiskComplex,
    pub angles: &'a AngleData,
    pub reference: &'a FaceField,
    pub kappa: Vec<f64>,
}

impl<'a> WStarEnergy<'a> {
    pub fn new(complex: &'a DiskComplex, angles: &'a AngleData, reference: &'a FaceField) -> Self {
        let kappa = curvature_defect(complex, angles, reference);
        WStarEnergy {
            complex,
            angles,
            reference,
            kappa,
        }
    }

    fn field(&self, x: &[f64]) -> FaceField {
        FaceField::fixed(x.to_vec())
    }
}

impl super::Energy for WStarEnergy<'_> {
    fn dim(&self) -> usize {
        self.complex.num_faces()
    }

    fn value(&self, x: &[f64]) -> Option<f64> {
        let v = total_wstar(self.complex, self.angles, self.reference, &self.field(x))
            + self.kappa.iter().zip(x).map(|(k, u)| k * u).sum::<f64>();
        v.is_finite().then_some(v)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = grad_wstar(self.complex, self.angles, self.reference, &self.field(x));
        for (gi, k) in g.iter_mut().zip(&self.kappa) {
            *gi += k;
        }
        g
    }

    fn hessian(&self, x: &[f64]) -> SparseSym {
        hessian_wstar(self.complex, self.angles, self.reference, &self.field(x))
    }
}
