//! Harmonic test functions given by short strings.
//!
//! * `re:n` and `im:n` are `Re z^n` and `Im z^n`,
//! * `poly:c0,c1,...` is `Re sum c_k z^k` with real coefficients,
//! * `const:c` is the constant `c`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::pairing::FourierCoeffs;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum HarmonicSpec {
    Re(u32),
    Im(u32),
    Poly(Vec<f64>),
    Const(f64),
}

impl HarmonicSpec {
    pub fn eval(&self, z: Complex64) -> f64 {
        match self {
            HarmonicSpec::Re(n) => z.powu(*n).re,
            HarmonicSpec::Im(n) => z.powu(*n).im,
            HarmonicSpec::Poly(c) => c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, ck| acc * z + ck).re,
            HarmonicSpec::Const(c) => *c,
        }
    }

    /// Largest frequency present on the unit circle.
    pub fn degree(&self) -> usize {
        match self {
            HarmonicSpec::Re(n) | HarmonicSpec::Im(n) => *n as usize,
            HarmonicSpec::Poly(c) => c.len().saturating_sub(1),
            HarmonicSpec::Const(_) => 0,
        }
    }

    /// Exact Fourier coefficients of the boundary values on the unit circle,
    /// for `n` in `[-n_max, n_max]`.
    pub fn fourier(&self, n_max: usize) -> FourierCoeffs {
        let mut fc = FourierCoeffs::zeros(n_max);
        let half = Complex64::new(0.5, 0.0);
        match self {
            HarmonicSpec::Re(0) => fc.set(0, Complex64::new(1.0, 0.0)),
            HarmonicSpec::Im(0) => {}
            HarmonicSpec::Re(n) => {
                let n = *n as i64;
                fc.set(n, half);
                fc.set(-n, half);
            }
            HarmonicSpec::Im(n) => {
                let n = *n as i64;
                fc.set(n, Complex64::new(0.0, -0.5));
                fc.set(-n, Complex64::new(0.0, 0.5));
            }
            HarmonicSpec::Poly(c) => {
                for (k, ck) in c.iter().enumerate() {
                    let k = k as i64;
                    if k == 0 {
                        fc.set(0, Complex64::new(*ck, 0.0));
                    } else {
                        fc.set(k, half * ck);
                        fc.set(-k, half * ck);
                    }
                }
            }
            HarmonicSpec::Const(c) => fc.set(0, Complex64::new(*c, 0.0)),
        }
        fc
    }
}

impl FromStr for HarmonicSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("cannot parse harmonic function `{s}`"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let arg = arg.trim();
        match kind.trim() {
            "re" => arg.parse().map(HarmonicSpec::Re).map_err(|_| bad()),
            "im" => arg.parse().map(HarmonicSpec::Im).map_err(|_| bad()),
            "const" => arg.parse().map(HarmonicSpec::Const).map_err(|_| bad()),
            "poly" => {
                let c: std::result::Result<Vec<f64>, _> = arg.split(',').map(|t| t.trim().parse()).collect();
                let c = c.map_err(|_| bad())?;
                if c.iter().all(|x| x.is_finite()) {
                    Ok(HarmonicSpec::Poly(c))
                } else {
                    Err(bad())
                }
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for HarmonicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarmonicSpec::Re(n) => write!(f, "re:{n}"),
            HarmonicSpec::Im(n) => write!(f, "im:{n}"),
            HarmonicSpec::Const(c) => write!(f, "const:{c}"),
            HarmonicSpec::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}
