//! Kite geometry of a single edge and the special functions built on it.
//!
//! Two circles of radii `R_phi`, `R_psi` meeting at angle `theta` cut the
//! quadrilateral (centre, intersection, centre, intersection) into two
//! congruent triangles with angles `(alpha_left, alpha_right, theta)`.

pub mod beltrami;
pub mod special;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cell_complex::{AngleData, DiskComplex};
use crate::error::{Error, Result};

pub use beltrami::{beltrami_abs2, beltrami_bound, beltrami_coefficient};
pub use special::{clausen, im_dilog, lobachevsky};

/// Half-angles of one kite. `alpha_left` sits at the centre of the left
/// face, `alpha_right` at the centre of the right face.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KiteAngles {
    pub alpha_left: f64,
    pub alpha_right: f64,
    pub theta: f64,
}

impl KiteAngles {
    /// `(cot alpha_left + cot alpha_right) / 2`.
    pub fn primal_weight(&self) -> f64 {
        primal_weight_from_angles(self.alpha_left, self.alpha_right)
    }

    /// Same kite seen from the other side of the edge.
    pub fn flipped(&self) -> KiteAngles {
        KiteAngles {
            alpha_left: self.alpha_right,
            alpha_right: self.alpha_left,
            theta: self.theta,
        }
    }
}

fn check_kite_input(r_phi: f64, r_psi: f64, theta: f64) -> Result<()> {
    if !(r_phi.is_finite() && r_psi.is_finite() && r_phi > 0.0 && r_psi > 0.0) {
        return Err(Error::Domain(format!(
            "radii ({r_phi}, {r_psi}) must be finite and positive"
        )));
    }
    check_theta(theta)
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < PI {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta = {theta} outside (0, pi)")))
    }
}

/// `arccot` onto `(0, pi)`.
fn arccot(y: f64) -> f64 {
    PI / 2.0 - y.atan()
}

/// Half-angles of the kite spanned by circles of radii `r_phi`, `r_psi`
/// meeting at angle `theta`.
pub fn half_angles(r_phi: f64, r_psi: f64, theta: f64) -> Result<KiteAngles> {
    check_kite_input(r_phi, r_psi, theta)?;
    let (s, c) = theta.sin_cos();
    let alpha_left = arccot((r_phi - r_psi * c) / (r_psi * s));
    let alpha_right = arccot((r_psi - r_phi * c) / (r_phi * s));
    Ok(KiteAngles {
        alpha_left,
        alpha_right,
        theta,
    })
}

/// Half-angles from `x = log(R_phi / R_psi)`; safe for large `|x|`.
pub fn half_angles_log(x: f64, theta: f64) -> KiteAngles {
    let alpha_left = half_angle_at(x, theta);
    let alpha_right = half_angle_at(-x, theta);
    KiteAngles {
        alpha_left,
        alpha_right,
        theta,
    }
}

/// Angle at the centre of the circle whose log-radius exceeds the other's by `x`.
pub(crate) fn half_angle_at(x: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    if x <= 0.0 {
        s.atan2(x.exp() - c)
    } else {
        let q = (-x).exp();
        (q * s).atan2(1.0 - q * c)
    }
}

/// The half-angle at the left centre through complex logarithms,
/// `(ln(1 - r e^{-i theta}) - ln(1 - r e^{i theta})) / 2i` with
/// `r = e^{-log_ratio}` and `log_ratio = log(R_phi / R_psi)`.
pub fn half_angle_log_form(log_ratio: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if !log_ratio.is_finite() {
        return Err(Error::Domain(format!("log ratio {log_ratio} is not finite")));
    }
    let r = (-log_ratio).exp();
    let one = Complex64::new(1.0, 0.0);
    let num = (one - Complex64::from_polar(r, -theta)).ln();
    let den = (one - Complex64::from_polar(r, theta)).ln();
    Ok(((num - den) / Complex64::new(0.0, 2.0)).re)
}

/// Primal geometric edge weight
/// `(R_phi^2 + R_psi^2 - 2 R_phi R_psi cos theta) / (2 R_phi R_psi sin theta)`.
pub fn edge_weight(r_phi: f64, r_psi: f64, theta: f64) -> Result<f64> {
    check_kite_input(r_phi, r_psi, theta)?;
    let (s, c) = theta.sin_cos();
    Ok((r_phi * r_phi + r_psi * r_psi - 2.0 * r_phi * r_psi * c) / (2.0 * r_phi * r_psi * s))
}

/// Primal weight from `x = log(R_phi / R_psi)`: `(cosh x - cos theta) / sin theta`.
pub fn edge_weight_log(x: f64, theta: f64) -> f64 {
    let sh = (0.5 * x).sinh();
    let sn = (0.5 * theta).sin();
    2.0 * (sh * sh + sn * sn) / theta.sin()
}

/// Dual weight from `x = log(R_phi / R_psi)`: `sin theta / (cosh x - cos theta)`.
pub fn dual_weight_log(x: f64, theta: f64) -> f64 {
    // cosh x - cos t = 2 sinh^2(x/2) + 2 sin^2(t/2), free of cancellation
    let sh = (0.5 * x).sinh();
    let sn = (0.5 * theta).sin();
    theta.sin() / (2.0 * (sh * sh + sn * sn))
}

/// `(cot a + cot b) / 2`.
pub fn primal_weight_from_angles(a: f64, b: f64) -> f64 {
    0.5 * (1.0 / a.tan() + 1.0 / b.tan())
}

/// Length `2 R sin alpha` of the common chord seen from a centre.
pub fn chord_length(r: f64, alpha: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("radius {r} must be finite and positive")));
    }
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (0, pi)")));
    }
    Ok(2.0 * r * alpha.sin())
}

/// Primal and dual weights per edge; boundary edges hold zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeWeights {
    pub c_primal: Vec<f64>,
    pub c_dual: Vec<f64>,
}

impl EdgeWeights {
    /// Weights of a pattern with the given radii.
    pub fn from_radii(c: &DiskComplex, th: &AngleData, radii: &[f64]) -> EdgeWeights {
        let mut c_primal = vec![0.0; c.num_edges()];
        let mut c_dual = vec![0.0; c.num_edges()];
        for (e, f, g) in c.dual_edges() {
            let x = (radii[f] / radii[g]).ln();
            c_primal[e] = edge_weight_log(x, th.theta[e]);
            c_dual[e] = dual_weight_log(x, th.theta[e]);
        }
        EdgeWeights { c_primal, c_dual }
    }

    /// Weights `(cot a + cot b) / 2` read off a kite table.
    pub fn from_kites(kites: &KiteTable) -> EdgeWeights {
        let c_primal: Vec<f64> = kites
            .kites
            .iter()
            .map(|k| k.map_or(0.0, |k| k.primal_weight()))
            .collect();
        let c_dual = c_primal.iter().map(|&w| if w > 0.0 { 1.0 / w } else { 0.0 }).collect();
        EdgeWeights { c_primal, c_dual }
    }

    /// Unit weights on interior edges.
    pub fn combinatorial(c: &DiskComplex) -> EdgeWeights {
        let w: Vec<f64> = c
            .edges()
            .iter()
            .map(|e| if e.is_boundary() { 0.0 } else { 1.0 })
            .collect();
        EdgeWeights {
            c_primal: w.clone(),
            c_dual: w,
        }
    }
}

/// Kite of every interior edge plus its chord length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KiteTable {
    pub kites: Vec<Option<KiteAngles>>,
    pub chords: Vec<Option<f64>>,
}

impl KiteTable {
    pub fn from_radii(c: &DiskComplex, th: &AngleData, radii: &[f64]) -> KiteTable {
        let mut kites = vec![None; c.num_edges()];
        let mut chords = vec![None; c.num_edges()];
        for (e, f, g) in c.dual_edges() {
            let k = half_angles_log((radii[f] / radii[g]).ln(), th.theta[e]);
            chords[e] = Some(2.0 * radii[f] * k.alpha_left.sin());
            kites[e] = Some(k);
        }
        KiteTable { kites, chords }
    }

    pub fn kite(&self, e: usize) -> Option<&KiteAngles> {
        self.kites[e].as_ref()
    }

    /// Half-angle at face `f` for an edge adjacent to it.
    pub fn alpha_at(&self, c: &DiskComplex, e: usize, f: usize) -> Option<f64> {
        let k = self.kites[e]?;
        Some(if c.edge(e).left == f {
            k.alpha_left
        } else {
            k.alpha_right
        })
    }
}
