//! The bilinear pairing of face and vertex functions and the symplectic form
//! on boundary Fourier data.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cell_complex::DiskComplex;
use crate::error::{Error, Result};
use crate::pattern_engine::Layout;

use super::harmonic_spec::HarmonicSpec;

/// `sum (u_psi - u_phi)(v_j - v_i)` over interior edges, with `phi` the left
/// face and the edge running from `i` to `j`.
pub fn pairing_b(c: &DiskComplex, u: &[f64], v: &[f64]) -> f64 {
    c.dual_edges()
        .map(|(e, f, g)| {
            let ed = c.edge(e);
            (u[g] - u[f]) * (v[ed.head] - v[ed.tail])
        })
        .sum()
}

/// Values at points on the unit circle, sorted by angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
}

impl BoundarySample {
    /// Check that angles increase strictly inside `[0, 2 pi)` and values are finite.
    pub fn new(angles: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if angles.len() != values.len() {
            return Err(Error::InvalidSpec("angles and values differ in length".into()));
        }
        if angles.iter().any(|a| !(*a >= 0.0 && *a < 2.0 * PI)) {
            return Err(Error::InvalidSpec("sample angles must lie in [0, 2 pi)".into()));
        }
        if angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec("sample angles must increase strictly".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("sample values must be finite".into()));
        }
        Ok(BoundarySample { angles, values })
    }

    /// Sort `(angle, value)` pairs after reducing angles to `[0, 2 pi)`.
    /// Of several samples at one angle the first is kept.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut p: Vec<(f64, f64)> = pairs
            .into_iter()
            .map(|(a, v)| (a.rem_euclid(2.0 * PI) % (2.0 * PI), v))
            .collect();
        p.sort_by(|a, b| a.0.total_cmp(&b.0));
        p.dedup_by(|b, a| b.0 == a.0);
        Self::new(p.iter().map(|x| x.0).collect(), p.iter().map(|x| x.1).collect())
    }

    /// Samples of `f` at `n` equally spaced angles.
    pub fn uniform(n: usize, f: impl Fn(f64) -> f64) -> Self {
        let angles: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
        let values = angles.iter().map(|&t| f(t)).collect();
        BoundarySample { angles, values }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Periodic piecewise linear interpolation in the angle.
    pub fn interpolate(&self, theta: f64) -> f64 {
        let n = self.len();
        match n {
            0 => return 0.0,
            1 => return self.values[0],
            _ => {}
        }
        let t = theta.rem_euclid(2.0 * PI);
        let k = self.angles.partition_point(|&a| a <= t);
        let (a0, v0, a1, v1) = if k == 0 || k == n {
            let (a0, v0) = (self.angles[n - 1], self.values[n - 1]);
            let (a1, v1) = (self.angles[0] + 2.0 * PI, self.values[0]);
            (a0, v0, a1, v1)
        } else {
            (self.angles[k - 1], self.values[k - 1], self.angles[k], self.values[k])
        };
        let t = if t < a0 { t + 2.0 * PI } else { t };
        v0 + (v1 - v0) * (t - a0) / (a1 - a0)
    }

    /// Copy with the mean of the values subtracted.
    pub fn mean_normalized(&self) -> Self {
        let m = self.values.iter().sum::<f64>() / self.len().max(1) as f64;
        BoundarySample {
            angles: self.angles.clone(),
            values: self.values.iter().map(|v| v - m).collect(),
        }
    }

    /// Largest angular gap between consecutive samples, cyclically.
    pub fn max_gap(&self) -> f64 {
        let n = self.len();
        if n == 0 {
            return 2.0 * PI;
        }
        let wrap = self.angles[0] + 2.0 * PI - self.angles[n - 1];
        self.angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
    }
}

/// Fourier coefficients for `n` in `[-n_max, n_max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeffs {
    pub n_max: usize,
    /// Entry `n + n_max` holds the coefficient of `e^{i n theta}`.
    pub coeffs: Vec<Complex64>,
}

impl FourierCoeffs {
    pub fn zeros(n_max: usize) -> Self {
        FourierCoeffs {
            n_max,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * n_max + 1],
        }
    }

    pub fn get(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.n_max {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(n + self.n_max as i64) as usize]
    }

    /// Set a coefficient; frequencies beyond `n_max` are dropped.
    pub fn set(&mut self, n: i64, value: Complex64) {
        if n.unsigned_abs() as usize <= self.n_max {
            self.coeffs[(n + self.n_max as i64) as usize] = value;
        }
    }

    /// Largest `|u_{-n} - conj(u_n)|`.
    pub fn reality_defect(&self) -> f64 {
        (0..=self.n_max as i64)
            .map(|n| (self.get(-n) - self.get(n).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `sum |n| |u_n|^2`.
    pub fn half_norm2(&self) -> f64 {
        (-(self.n_max as i64)..=self.n_max as i64)
            .map(|n| n.unsigned_abs() as f64 * self.get(n).norm_sqr())
            .sum()
    }
}

/// `omega(u, v) = (1/i) sum_n n u_n conj(v_n)`, the real part of which is
/// returned (the imaginary part vanishes for real data).
pub fn fourier_symplectic(u: &FourierCoeffs, v: &FourierCoeffs) -> f64 {
    let n_max = u.n_max.max(v.n_max) as i64;
    let s: Complex64 = (-n_max..=n_max).map(|n| n as f64 * u.get(n) * v.get(n).conj()).sum();
    (s / Complex64::new(0.0, 1.0)).re
}

/// Fourier coefficients from trapezoidal quadrature in the angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffEstimate {
    pub coeffs: FourierCoeffs,
    /// Set when the largest sample gap exceeds `pi / N`, so frequency `N`
    /// is not resolved.
    pub aliasing_risk: bool,
}

/// Trapezoidal Fourier coefficients on a possibly nonuniform sample,
/// symmetrised so that `u_{-n} = conj(u_n)`.
pub fn boundary_sample_to_coeffs(s: &BoundarySample, n_max: usize) -> Result<CoeffEstimate> {
    let m = s.len();
    if m < 2 * n_max + 1 {
        return Err(Error::InsufficientSamples {
            have: m,
            need: 2 * n_max + 1,
        });
    }
    let weights: Vec<f64> = (0..m)
        .map(|k| {
            let prev = if k == 0 {
                s.angles[m - 1] - 2.0 * PI
            } else {
                s.angles[k - 1]
            };
            let next = if k + 1 == m {
                s.angles[0] + 2.0 * PI
            } else {
                s.angles[k + 1]
            };
            0.5 * (next - prev)
        })
        .collect();
    let mut fc = FourierCoeffs::zeros(n_max);
    for n in 0..=n_max as i64 {
        let c: Complex64 = (0..m)
            .map(|k| s.values[k] * weights[k] * Complex64::from_polar(1.0, -(n as f64) * s.angles[k]))
            .sum::<Complex64>()
            / (2.0 * PI);
        // the conjugate estimate of u_{-n} equals this one, so the
        // symmetrised value is c itself with u_0 made real
        let c = if n == 0 { Complex64::new(c.re, 0.0) } else { c };
        fc.set(n, c);
        fc.set(-n, c.conj());
    }
    Ok(CoeffEstimate {
        coeffs: fc,
        aliasing_risk: n_max > 0 && s.max_gap() > PI / n_max as f64,
    })
}

/// Outcome of [`verify_pairing_identity`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub b: f64,
    pub two_pi_omega: f64,
    /// `|b - 2 pi omega| / |2 pi omega|`, or `|b|` when `omega = 0`.
    pub rel_error: f64,
}

/// Normalise a layout to the unit disk with the area-matched frame of its
/// boundary polygon.
pub fn normalized_to_unit_disk(c: &DiskComplex, l: &Layout) -> Layout {
    let (ctr, r) = l.disk_frame(c);
    l.transformed(Complex64::new(1.0 / r, 0.0), -ctr / r)
}

/// Compare `b(u, v)` for `u` sampled at the circumcentres and `v` at the
/// intersection points of the normalised layout with `2 pi omega` of the
/// exact boundary values on the unit circle.
pub fn verify_pairing_identity(c: &DiskComplex, l: &Layout, u: &HarmonicSpec, v: &HarmonicSpec) -> PairingReport {
    let ln = normalized_to_unit_disk(c, l);
    let uf: Vec<f64> = ln.z_f.iter().map(|&z| u.eval(z)).collect();
    let vv: Vec<f64> = ln.z_v.iter().map(|&z| v.eval(z)).collect();
    let b = pairing_b(c, &uf, &vv);
    let n = u.degree().max(v.degree());
    let two_pi_omega = 2.0 * PI * fourier_symplectic(&u.fourier(n), &v.fourier(n));
    let rel_error = if two_pi_omega == 0.0 {
        b.abs()
    } else {
        (b - two_pi_omega).abs() / two_pi_omega.abs()
    };
    PairingReport {
        b,
        two_pi_omega,
        rel_error,
    }
}
