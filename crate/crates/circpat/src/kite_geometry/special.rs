//! Clausen, Lobachevsky and imaginary dilogarithm functions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

// zeta(2n) / (n (2n + 1) (2 pi)^(2n)) for n = 1, 2, ...
const CL2_COEFFS: [f64; 30] = [
    1.388888888888889e-2,
    6.944444444444444e-5,
    7.873519778281683e-7,
    1.1482216343327454e-8,
    1.8978869988971e-10,
    3.387301370953521e-12,
    6.372636443183181e-14,
    1.2462059912950672e-15,
    2.5105444608999546e-17,
    5.178258806090623e-19,
    1.0887357368300849e-20,
    2.325744114302087e-22,
    5.03519521314739e-24,
    1.1026499294381215e-25,
    2.4386585509007345e-27,
    5.440142678856253e-29,
    1.2228340131217352e-30,
    2.767263468967951e-32,
    6.3000905918320139e-34,
    1.4420868388418475e-35,
    3.3170939991595428e-37,
    7.663913557920658e-39,
    1.7778714733830658e-40,
    4.1396058982341373e-42,
    9.671557036081102e-44,
    2.2667187016766124e-45,
    5.327956311328254e-47,
    1.2557248389564336e-48,
    2.967000542247094e-50,
    7.026787317600742e-52,
];

/// Clausen function Cl2(x) = sum sin(n x) / n^2.
///
/// Odd and 2 pi periodic. After reduction to [0, pi] the expansion
/// `x - x ln x + sum a_n x^(2n+1)` converges geometrically with ratio 1/4.
pub fn clausen(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let two_pi = 2.0 * PI;
    let mut t = x.rem_euclid(two_pi);
    let mut sign = 1.0;
    if t > PI {
        t = two_pi - t;
        sign = -1.0;
    }
    if t == 0.0 {
        return 0.0;
    }
    let t2 = t * t;
    let mut pow = t * t2;
    let mut sum = 0.0;
    for a in CL2_COEFFS {
        let term = a * pow;
        sum += term;
        if term < 1e-18 * t {
            break;
        }
        pow *= t2;
    }
    sign * (t - t * t.ln() + sum)
}

/// Lobachevsky function, `-int_0^x log|2 sin t| dt`.
pub fn lobachevsky(x: f64) -> f64 {
    0.5 * clausen(2.0 * x)
}

/// Imaginary part of Li2(r e^{i theta}) with `r = e^{log_r}`.
///
/// Small moduli use the power series; moduli near one use the Clausen
/// representation, which stays exact at `r = 1`; moduli above one are
/// mapped back through the inversion identity
/// `Im Li2(e^{x + i theta}) = Im Li2(e^{-x + i theta}) + (pi - theta) x`.
pub fn im_dilog(log_r: f64, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Domain(format!("im_dilog: theta = {theta} outside (0, pi)")));
    }
    if log_r.is_nan() {
        return Err(Error::Domain("im_dilog: log_r is NaN".into()));
    }
    Ok(im_dilog_unchecked(log_r, theta))
}

pub(crate) fn im_dilog_unchecked(log_r: f64, theta: f64) -> f64 {
    if log_r > 0.0 {
        return im_dilog_unit(-log_r, theta) + (PI - theta) * log_r;
    }
    im_dilog_unit(log_r, theta)
}

fn im_dilog_unit(log_r: f64, theta: f64) -> f64 {
    if log_r <= -0.5 {
        im_dilog_series(log_r, theta)
    } else {
        im_dilog_clausen(log_r, theta)
    }
}

/// Power series `sum r^n sin(n theta) / n^2`; intended for `r < 1`.
pub fn im_dilog_series(log_r: f64, theta: f64) -> f64 {
    if log_r == f64::NEG_INFINITY {
        return 0.0;
    }
    let r = log_r.exp();
    let (s1, c1) = theta.sin_cos();
    // sin(n theta) by the Chebyshev recurrence
    let mut s_prev = 0.0;
    let mut s_cur = s1;
    let mut rn = r;
    let mut sum = 0.0;
    for n in 1..=1_000_000usize {
        let nf = n as f64;
        let term = rn * s_cur / (nf * nf);
        sum += term;
        if rn / (nf * nf) < 1e-17 * sum.abs().max(1e-300) || rn < 1e-300 {
            break;
        }
        let s_next = 2.0 * c1 * s_cur - s_prev;
        s_prev = s_cur;
        s_cur = s_next;
        rn *= r;
    }
    sum
}

/// Closed form through Clausen functions:
/// `omega ln r + (Cl2(2 theta) + Cl2(2 omega) - Cl2(2 theta + 2 omega)) / 2`
/// with `omega = arg(1 / (1 - r e^{i theta}))`.
pub fn im_dilog_clausen(log_r: f64, theta: f64) -> f64 {
    let r = log_r.exp();
    let (s, c) = theta.sin_cos();
    let omega = (r * s).atan2(1.0 - r * c);
    omega * log_r + 0.5 * (clausen(2.0 * theta) + clausen(2.0 * omega) - clausen(2.0 * theta + 2.0 * omega))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clausen_known_values() {
        // Cl2(pi/2) is Catalan's constant, Cl2(pi/3) its hexagonal analogue
        assert!((clausen(PI / 2.0) - 0.915_965_594_177_219).abs() < 1e-15);
        assert!((clausen(PI / 3.0) - 1.014_941_606_409_653_6).abs() < 1e-15);
        assert!((clausen(1.0) - 1.013_959_132_360_768_5).abs() < 1e-15);
        assert_eq!(clausen(0.0), 0.0);
        assert!(clausen(PI).abs() < 1e-15);
    }

    #[test]
    fn lobachevsky_basic() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert!(lobachevsky(PI).abs() < 1e-15);
        assert!((lobachevsky(PI / 6.0) - 0.507_470_803_204_826_8).abs() < 1e-15);
    }

    #[test]
    fn series_and_closed_form_agree() {
        for &lr in &[-0.5, -0.3, -0.1, -1e-4] {
            for k in 1..20 {
                let th = PI * k as f64 / 20.0;
                let a = im_dilog_series(lr, th);
                let b = im_dilog_clausen(lr, th);
                assert!((a - b).abs() < 1e-13, "{lr} {th}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn im_dilog_domain() {
        assert!(im_dilog(0.0, 0.0).is_err());
        assert!(im_dilog(0.0, PI).is_err());
        assert!(im_dilog(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn im_dilog_far_inside() {
        assert!(im_dilog(-40.0, 1.0).unwrap().abs() < 1e-16);
    }
}
