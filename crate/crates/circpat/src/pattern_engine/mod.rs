//! Pattern workflows: solving, deforming, conjugating and laying out.

pub mod conjugate;
pub mod embed;
pub mod layout;
pub mod solve;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cell_complex::{AngleData, DiskComplex};
use crate::kite_geometry::{EdgeWeights, KiteTable};

pub use conjugate::{
    conjugate_u_to_v, harmonic_conjugate_tangent, harmonic_conjugate_vertex, pattern_from_angles, ConjugateResult,
};
pub use embed::{embeddedness_check, EmbeddednessReport};
pub use layout::{layout, procrustes_align, Layout};
pub use solve::{deform_angles, deform_radii, uniformize, DeformAngles, DeformRadii, SolveOptions};

/// A circle pattern given by its radii, with derived kites and weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternSolution {
    pub radii: Vec<f64>,
    pub kites: KiteTable,
    pub weights: EdgeWeights,
    /// Largest `|2 sum alpha - 2 pi|` over interior faces.
    pub residual: f64,
}

impl PatternSolution {
    pub fn from_radii(c: &DiskComplex, th: &AngleData, radii: Vec<f64>) -> PatternSolution {
        let kites = KiteTable::from_radii(c, th, &radii);
        let weights = EdgeWeights::from_radii(c, th, &radii);
        let residual = angle_sum_residual(c, &kites);
        PatternSolution {
            radii,
            kites,
            weights,
            residual,
        }
    }

    pub fn log_radii(&self) -> Vec<f64> {
        self.radii.iter().map(|r| r.ln()).collect()
    }
}

/// `2 sum_psi alpha_{phi psi}` at every face (interior edges only).
pub fn central_angle_sums(c: &DiskComplex, kites: &KiteTable) -> Vec<f64> {
    let mut sums = vec![0.0; c.num_faces()];
    for (e, f, g) in c.dual_edges() {
        if let Some(k) = kites.kites[e] {
            sums[f] += 2.0 * k.alpha_left;
            sums[g] += 2.0 * k.alpha_right;
        }
    }
    sums
}

/// Largest deviation of the central angle sum from `2 pi` over interior faces.
pub fn angle_sum_residual(c: &DiskComplex, kites: &KiteTable) -> f64 {
    central_angle_sums(c, kites)
        .iter()
        .enumerate()
        .filter(|(f, _)| !c.is_boundary_face(*f))
        .fold(0.0, |m, (_, s)| m.max((s - 2.0 * PI).abs()))
}
