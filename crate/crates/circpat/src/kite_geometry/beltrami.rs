//! Beltrami coefficient of the affine map between two triangles given by
//! their angles.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_triple(t: (f64, f64, f64), what: &str) -> Result<()> {
    let (a, b, c) = t;
    let ok = [a, b, c].iter().all(|x| x.is_finite() && *x > 0.0) && (a + b + c - PI).abs() < 1e-10;
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} angles {t:?} do not form a triangle")))
    }
}

/// Coefficients `(A, B, C)` of the map in the canonical frame, where the
/// first vertex sits at the origin, the second on the positive real axis
/// and the triangle is positively oriented. The map reads
/// `x + iy -> A x + C y + i B y` up to a similarity of the target.
fn affine_parts(src: (f64, f64, f64), dst: (f64, f64, f64)) -> (f64, f64, f64) {
    let (a, b, g) = src;
    let (at, bt, gt) = dst;
    let big_a = gt.sin() / g.sin();
    let big_b = at.sin() * bt.sin() / (a.sin() * b.sin());
    let big_c = at.cos() * bt.sin() / (a.sin() * b.sin()) - a.cos() * gt.sin() / (a.sin() * g.sin());
    (big_a, big_b, big_c)
}

/// Beltrami coefficient `mu = f_zbar / f_z` of the affine map taking the
/// triangle with angles `src` to the one with angles `dst`, vertex by
/// vertex, expressed in the canonical frame of the source triangle.
pub fn beltrami_coefficient(src: (f64, f64, f64), dst: (f64, f64, f64)) -> Result<Complex64> {
    check_triple(src, "source")?;
    check_triple(dst, "target")?;
    let (a, b, c) = affine_parts(src, dst);
    Ok(Complex64::new(a - b, c) / Complex64::new(a + b, -c))
}

/// `|mu|^2` through the determinant form
/// `1 - 4 (sin a~ sin b~ sin g~) / (sin a sin b sin g) / ((A + B)^2 + C^2)`.
pub fn beltrami_abs2(src: (f64, f64, f64), dst: (f64, f64, f64)) -> Result<f64> {
    check_triple(src, "source")?;
    check_triple(dst, "target")?;
    let (a, b, c) = affine_parts(src, dst);
    let ratio = dst.0.sin() * dst.1.sin() * dst.2.sin() / (src.0.sin() * src.1.sin() * src.2.sin());
    Ok(1.0 - 4.0 * ratio / ((a + b).powi(2) + c * c))
}

/// Upper bound for `|mu|` when every angle of both triangles is at least
/// `eta`, from bounding the numerator below and the denominator above.
pub fn beltrami_bound(eta: f64) -> f64 {
    let s = eta.sin();
    let lower = 4.0 * s.powi(3) / (2.0 * (1.0 / (s * s) + 3.0 / s.powi(4)));
    (1.0 - lower).max(0.0).sqrt()
}

/// Canonical-frame vertices of a triangle with the given angles:
/// `(0, 0)`, `(sin g, 0)`, `sin b e^{i a}`.
pub fn canonical_triangle(t: (f64, f64, f64)) -> [Complex64; 3] {
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(t.2.sin(), 0.0),
        Complex64::from_polar(t.1.sin(), t.0),
    ]
}
