//! Beltrami field of the piecewise affine map between two patterns, and
//! the quasiconformality indicators built from it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cell_complex::{AngleData, DiskComplex};
use crate::error::{Error, Result};
use crate::kite_geometry::{beltrami_bound, beltrami_coefficient, KiteTable};
use crate::pattern_engine::Layout;

/// Scale of the layout inside the unit disk: the farthest point lands at
/// radius `DISK_RHO`.
pub const DISK_RHO: f64 = 0.99;

/// Corner of a kite triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Corner {
    Face(usize),
    Vertex(usize),
}

/// The two positively oriented triangles of the kite of an interior edge:
/// `(psi, phi, tail)` and `(phi, psi, head)`.
pub fn edge_triangles(c: &DiskComplex, e: usize) -> [[Corner; 3]; 2] {
    let ed = c.edge(e);
    let g = ed.right.expect("interior edge");
    [
        [Corner::Face(g), Corner::Face(ed.left), Corner::Vertex(ed.tail)],
        [Corner::Face(ed.left), Corner::Face(g), Corner::Vertex(ed.head)],
    ]
}

/// Angles at the three corners of the triangles of [`edge_triangles`].
fn triangle_angles(alpha_left: f64, alpha_right: f64, theta: f64) -> [(f64, f64, f64); 2] {
    [(alpha_right, alpha_left, theta), (alpha_left, alpha_right, theta)]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeltramiField {
    /// Entries `2k` and `2k + 1` belong to the tail and head triangles of
    /// `edges[k]`.
    pub mu: Vec<Complex64>,
    /// Hyperbolic area of each source triangle.
    pub areas: Vec<f64>,
    pub edges: Vec<usize>,
    /// Smallest triangle angle over both patterns.
    pub angle_floor: f64,
}

impl BeltramiField {
    pub fn sup_abs(&self) -> f64 {
        self.mu.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Bound on `sup |mu|` implied by the measured angle floor.
    pub fn bound(&self) -> f64 {
        beltrami_bound(self.angle_floor)
    }
}

// 7-point degree-5 rule on the triangle: (barycentric a, b, b) and weight
const DUNAVANT: [(f64, f64, f64); 3] = [
    (1.0 / 3.0, 1.0 / 3.0, 0.225),
    (0.059_715_871_789_770, 0.470_142_064_105_115, 0.132_394_152_788_506),
    (0.797_426_985_353_087, 0.101_286_507_323_456, 0.125_939_180_544_827),
];

/// Integral of the hyperbolic area density `4 / (1 - |z|^2)^2` over a
/// triangle inside the unit disk.
pub fn hyperbolic_area(t: [Complex64; 3]) -> f64 {
    let euclid = 0.5 * ((t[1] - t[0]).conj() * (t[2] - t[0])).im.abs();
    let density = |z: Complex64| 4.0 / (1.0 - z.norm_sqr()).powi(2);
    let mut s = 0.0;
    for (k, &(a, b, w)) in DUNAVANT.iter().enumerate() {
        if k == 0 {
            s += w * density(t[0] * a + t[1] * a + t[2] * a);
            continue;
        }
        for r in 0..3 {
            let p = t[r] * a + t[(r + 1) % 3] * b + t[(r + 2) % 3] * b;
            s += w * density(p);
        }
    }
    euclid * s
}

/// Layout moved into the unit disk: centred at its boundary-polygon
/// centroid and scaled so that the farthest point lies at `rho`.
pub fn layout_in_disk(c: &DiskComplex, l: &Layout, rho: f64) -> Result<Layout> {
    let (ctr, _) = l.disk_frame(c);
    let far = l.z_v.iter().chain(&l.z_f).fold(0.0f64, |m, z| m.max((z - ctr).norm()));
    if !(far > 0.0 && far.is_finite()) {
        return Err(Error::LayoutOutsideDisk);
    }
    let s = rho / far;
    let out = l.transformed(Complex64::new(s, 0.0), -ctr * s);
    if out.z_v.iter().chain(&out.z_f).any(|z| !(z.norm() < 1.0)) {
        return Err(Error::LayoutOutsideDisk);
    }
    Ok(out)
}

/// Beltrami coefficient of the affine map between corresponding kite
/// triangles of the reference and deformed patterns, in the frame of the
/// reference layout, with the hyperbolic areas of the reference triangles.
pub fn beltrami_field(
    c: &DiskComplex,
    th: &AngleData,
    kites_ref: &KiteTable,
    kites_def: &KiteTable,
    layout_ref: &Layout,
) -> Result<BeltramiField> {
    let ld = layout_in_disk(c, layout_ref, DISK_RHO)?;
    let point = |k: Corner| match k {
        Corner::Face(f) => ld.z_f[f],
        Corner::Vertex(v) => ld.z_v[v],
    };
    let mut mu = Vec::new();
    let mut areas = Vec::new();
    let mut edges = Vec::new();
    let mut floor = f64::INFINITY;
    for (e, _, _) in c.dual_edges() {
        let (Some(kr), Some(kd)) = (kites_ref.kites[e], kites_def.kites[e]) else {
            return Err(Error::InvalidSpec(format!("edge {e} lacks a kite")));
        };
        let src = triangle_angles(kr.alpha_left, kr.alpha_right, th.theta[e]);
        let dst = triangle_angles(kd.alpha_left, kd.alpha_right, th.theta[e]);
        for t in 0..2 {
            floor = floor.min(src[t].0.min(src[t].1).min(src[t].2));
            floor = floor.min(dst[t].0.min(dst[t].1).min(dst[t].2));
        }
        let tris = edge_triangles(c, e);
        for t in 0..2 {
            let z = tris[t].map(point);
            let m = beltrami_coefficient(src[t], dst[t])?;
            let rot = Complex64::from_polar(1.0, 2.0 * (z[1] - z[0]).arg());
            mu.push(m * rot);
            areas.push(hyperbolic_area(z));
        }
        edges.push(e);
    }
    Ok(BeltramiField {
        mu,
        areas,
        edges,
        angle_floor: floor,
    })
}

/// Quasiconformality indicators of a log-radius deformation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WpIndicators {
    /// `sup |u_phi - u_psi|` over interior edges.
    pub sup_gradient: f64,
    /// `sum (u_phi - u_psi)^2`.
    pub energy: f64,
    /// `sum_T |mu_T|^2 A_hyp(T)`.
    pub l2_hyperbolic: f64,
    /// Measured `max |mu_T| / |u_phi - u_psi|`.
    pub c1: f64,
    /// Largest hyperbolic triangle area.
    pub a0: f64,
}

impl WpIndicators {
    /// `4 c1^2 a0 energy`, an upper bound for `l2_hyperbolic`.
    pub fn chain_bound(&self) -> f64 {
        4.0 * self.c1 * self.c1 * self.a0 * self.energy
    }
}

pub fn wp_indicators(c: &DiskComplex, u: &[f64], field: &BeltramiField) -> WpIndicators {
    let mut sup: f64 = 0.0;
    let mut energy = 0.0;
    let mut l2 = 0.0;
    let mut c1: f64 = 0.0;
    let mut a0: f64 = 0.0;
    for (k, &e) in field.edges.iter().enumerate() {
        let ed = c.edge(e);
        let du = (u[ed.left] - u[ed.right.unwrap()]).abs();
        sup = sup.max(du);
        energy += du * du;
        for t in [2 * k, 2 * k + 1] {
            let m = field.mu[t].norm();
            l2 += m * m * field.areas[t];
            a0 = a0.max(field.areas[t]);
            if du > 1e-14 {
                c1 = c1.max(m / du);
            }
        }
    }
    WpIndicators {
        sup_gradient: sup,
        energy,
        l2_hyperbolic: l2,
        c1,
        a0,
    }
}
