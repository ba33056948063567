//! Discrete analogue of the Hilbert transform: boundary log-radii to
//! boundary central angles through a deformation and its conjugate.

use serde::{Deserialize, Serialize};

use crate::cell_complex::{AngleData, DiskComplex};
use crate::error::Result;
use crate::functionals::FaceField;
use crate::pattern_engine::{conjugate_u_to_v, deform_radii, Layout, PatternSolution, SolveOptions};

use super::pairing::{normalized_to_unit_disk, BoundarySample};

/// Output of [`hilbert_transform_theta`] with the intermediate fields.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HilbertResult {
    /// Mean-normalised `v` at the active boundary vertices.
    pub output: BoundarySample,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub closedness: f64,
}

/// Interpolate `boundary_u` onto the boundary circumcentres, solve for the
/// log-radius deformation, conjugate it, and sample the central angles at
/// the boundary vertices by their angle in the normalised layout.
pub fn hilbert_transform_theta(
    c: &DiskComplex,
    th: &AngleData,
    reference: &PatternSolution,
    layout_ref: &Layout,
    boundary_u: &BoundarySample,
    opts: &SolveOptions,
) -> Result<HilbertResult> {
    let ln = normalized_to_unit_disk(c, layout_ref);
    let nf = c.num_faces();
    let mut values = vec![0.0; nf];
    let mut free = vec![true; nf];
    for f in c.boundary_faces() {
        values[f] = boundary_u.interpolate(ln.z_f[f].arg());
        free[f] = false;
    }
    let dr = deform_radii(c, th, reference, &FaceField::new(values, free), opts)?;
    let conj = conjugate_u_to_v(c, th, reference, &dr.u, None)?;
    let pairs = ln
        .boundary_polygon(c)
        .into_iter()
        .map(|v| (ln.z_v[v].arg(), conj.v.values[v]));
    let output = BoundarySample::from_pairs(pairs)?.mean_normalized();
    Ok(HilbertResult {
        output,
        u: dr.u.values,
        v: conj.v.values,
        closedness: conj.closedness,
    })
}

/// Pearson correlation of two equally long sequences.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len()) as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return 0.0;
    }
    sab / (saa * sbb).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correlation_basics() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert!((correlation(&a, &[2.0, 4.0, 6.0, 8.0]) - 1.0).abs() < 1e-15);
        assert!((correlation(&a, &[-1.0, -2.0, -3.0, -4.0]) + 1.0).abs() < 1e-15);
        assert_eq!(correlation(&a, &[5.0; 4]), 0.0);
    }
}
