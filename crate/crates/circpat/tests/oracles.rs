//! Closed-form and independently computed reference values for the kite
//! geometry, the special functions and the boundary Fourier tools.

mod common;

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use circpat::analysis::{boundary_sample_to_coeffs, fourier_symplectic, BoundarySample, HarmonicSpec};
use circpat::error::Error;
use circpat::kite_geometry::special::im_dilog_series;
use circpat::kite_geometry::{
    beltrami_abs2, beltrami_coefficient, chord_length, edge_weight, half_angle_log_form, half_angles, im_dilog,
    lobachevsky,
};
use common::rng;
use num_complex::Complex64;
use rand::Rng;

/// Composite Gauss-Legendre rule (5 nodes per panel) on `[a, b]`.
fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let mid = a + (k as f64 + 0.5) * h;
            X.iter().zip(W).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// `-int_0^x log(2 sin t) dt` for `x` in `(0, pi)`, splitting off the
/// logarithmic singularity: `log(2 sin t) = log(2t) + log(sin t / t)`.
fn lobachevsky_quadrature(x: f64) -> f64 {
    let singular = x * (2.0 * x).ln() - x;
    let smooth = gauss_legendre(|t| if t == 0.0 { 0.0 } else { (t.sin() / t).ln() }, 0.0, x, 200);
    -(singular + smooth)
}

#[test]
fn lobachevsky_matches_quadrature() {
    let q = lobachevsky_quadrature(PI / 6.0);
    assert_abs_diff_eq!(q, 0.507_470_8, epsilon = 1e-7);
    assert_abs_diff_eq!(lobachevsky(PI / 6.0), q, epsilon = 1e-13);
    for k in 1..20 {
        let x = k as f64 * PI / 40.0;
        assert_abs_diff_eq!(lobachevsky(x), lobachevsky_quadrature(x), epsilon = 1e-12);
    }
    assert_eq!(lobachevsky(0.0), 0.0);
    assert_abs_diff_eq!(lobachevsky(PI), 0.0, epsilon = 1e-15);
}

#[test]
fn im_dilog_reference_values() {
    assert!(im_dilog(-40.0, 1.0).unwrap().abs() < 1e-16);
    // Catalan's constant as the alternating series sum (-1)^k / (2k + 1)^2,
    // averaged over two consecutive partial sums
    let n = 200_000;
    let mut s = 0.0;
    for k in (0..n).rev() {
        let t = 1.0 / ((2 * k + 1) as f64).powi(2);
        s += if k % 2 == 0 { t } else { -t };
    }
    let next = 1.0 / ((2 * n + 1) as f64).powi(2) * if n % 2 == 0 { 1.0 } else { -1.0 };
    let catalan = s + 0.5 * next;
    assert_abs_diff_eq!(catalan, 0.915_965_594_2, epsilon = 1e-10);
    assert_abs_diff_eq!(im_dilog(0.0, PI / 2.0).unwrap(), catalan, epsilon = 1e-13);

    let x = 2f64.ln();
    let d = im_dilog(x, PI / 2.0).unwrap() - im_dilog(-x, PI / 2.0).unwrap();
    assert_abs_diff_eq!(d, PI / 2.0 * x, epsilon = 1e-13);
    assert!(im_dilog(0.0, PI).is_err());
}

#[test]
fn im_dilog_series_agrees_inside_the_disk() {
    let mut r = rng(11);
    for _ in 0..200 {
        let lr = r.random_range(-4.0..-0.1);
        let t = r.random_range(0.1..PI - 0.1);
        assert_abs_diff_eq!(im_dilog(lr, t).unwrap(), im_dilog_series(lr, t), epsilon = 1e-13);
    }
}

#[test]
fn half_angle_closed_forms() {
    let k = half_angles(3f64.sqrt(), 1.0, PI / 2.0).unwrap();
    assert_abs_diff_eq!(k.alpha_left, PI / 6.0, epsilon = 1e-15);
    assert_abs_diff_eq!(k.alpha_right, PI / 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(k.alpha_left + k.alpha_right, PI / 2.0, epsilon = 1e-15);
    for t in [PI / 3.0, 2.0 * PI / 3.0] {
        let k = half_angles(1.0, 1.0, t).unwrap();
        assert_abs_diff_eq!(k.alpha_left, (PI - t) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.alpha_right, (PI - t) / 2.0, epsilon = 1e-15);
    }
    assert_abs_diff_eq!(half_angle_log_form(0.0, PI / 2.0).unwrap(), PI / 4.0, epsilon = 1e-15);
    assert_abs_diff_eq!(
        half_angle_log_form(3f64.sqrt().ln(), PI / 2.0).unwrap(),
        PI / 6.0,
        epsilon = 1e-15
    );
}

#[test]
fn log_form_agrees_with_arccot_form() {
    let mut r = rng(12);
    for _ in 0..1000 {
        let (a, b) = (r.random_range(0.05..20.0), r.random_range(0.05..20.0));
        let t = r.random_range(0.05..PI - 0.05);
        let k = half_angles(a, b, t).unwrap();
        assert_abs_diff_eq!(
            half_angle_log_form((a / b).ln(), t).unwrap(),
            k.alpha_left,
            epsilon = 1e-12
        );
    }
}

#[test]
fn edge_weight_closed_forms() {
    assert_abs_diff_eq!(edge_weight(1.0, 1.0, PI / 2.0).unwrap(), 1.0, epsilon = 1e-15);
    for t in [0.3, 1.0, 2.0, 2.9] {
        assert_abs_diff_eq!(edge_weight(1.0, 1.0, t).unwrap(), (t / 2.0).tan(), epsilon = 1e-14);
    }
    assert_abs_diff_eq!(
        edge_weight(3f64.sqrt(), 1.0, PI / 2.0).unwrap(),
        1.154_700_538_379_251_5,
        epsilon = 1e-15
    );
    let mut r = rng(13);
    for _ in 0..500 {
        let (a, b) = (r.random_range(0.1..10.0), r.random_range(0.1..10.0));
        let t = r.random_range(0.1..PI - 0.1);
        let k = half_angles(a, b, t).unwrap();
        let cot = 0.5 * (1.0 / k.alpha_left.tan() + 1.0 / k.alpha_right.tan());
        let w = edge_weight(a, b, t).unwrap();
        assert_abs_diff_eq!(w, cot, epsilon = 1e-12 * w.max(1.0));
    }
}

#[test]
fn chord_lengths() {
    assert_abs_diff_eq!(chord_length(1.0, PI / 2.0).unwrap(), 2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(chord_length(1.0, PI / 4.0).unwrap(), 2f64.sqrt(), epsilon = 1e-15);
    let mut r = rng(14);
    for _ in 0..500 {
        let (a, b) = (r.random_range(0.1..10.0), r.random_range(0.1..10.0));
        let k = half_angles(a, b, r.random_range(0.1..PI - 0.1)).unwrap();
        let l1 = chord_length(a, k.alpha_left).unwrap();
        let l2 = chord_length(b, k.alpha_right).unwrap();
        assert_abs_diff_eq!(l1, l2, epsilon = 1e-12 * l1.max(1.0));
    }
}

/// Triangle with angles `(a, b, g)` at its vertices, built from the law of
/// sines: the side opposite `g` on the real axis.
fn triangle(t: (f64, f64, f64)) -> [Complex64; 3] {
    let (a, b, g) = t;
    let p1 = Complex64::new(g.sin(), 0.0);
    let p2 = Complex64::from_polar(b.sin(), a);
    [Complex64::new(0.0, 0.0), p1, p2]
}

/// Beltrami coefficient of the affine map `z -> a z + b conj(z) + c` taking
/// `z` to `w` vertex by vertex.
fn affine_mu(z: [Complex64; 3], w: [Complex64; 3]) -> Complex64 {
    let (d1, d2) = (z[1] - z[0], z[2] - z[0]);
    let (e1, e2) = (w[1] - w[0], w[2] - w[0]);
    let det = d1 * d2.conj() - d2 * d1.conj();
    let a = (e1 * d2.conj() - e2 * d1.conj()) / det;
    let b = (d1 * e2 - d2 * e1) / det;
    b / a
}

#[test]
fn beltrami_matches_affine_oracle() {
    let eq = (PI / 3.0, PI / 3.0, PI / 3.0);
    let right = (PI / 2.0, PI / 4.0, PI / 4.0);
    let mu = beltrami_coefficient(eq, right).unwrap();
    let want = affine_mu(triangle(eq), triangle(right));
    assert!((mu - want).norm() < 1e-14, "{mu} vs {want}");
    assert!(mu.norm() > 0.1 && mu.norm() < 1.0);

    let mut r = rng(15);
    let random_triple = |r: &mut rand_chacha::ChaCha8Rng| loop {
        let a = r.random_range(0.1..PI - 0.2);
        let b = r.random_range(0.1..PI - 0.2);
        if a + b < PI - 0.1 {
            break (a, b, PI - a - b);
        }
    };
    for _ in 0..500 {
        let s = random_triple(&mut r);
        let d = random_triple(&mut r);
        let mu = beltrami_coefficient(s, d).unwrap();
        assert!((mu - affine_mu(triangle(s), triangle(d))).norm() < 1e-10);
        assert_abs_diff_eq!(beltrami_abs2(s, d).unwrap(), mu.norm_sqr(), epsilon = 1e-12);
        assert!(mu.norm() < 1.0);
    }
}

#[test]
fn fourier_form_examples() {
    for n in 1..6u32 {
        let re = HarmonicSpec::Re(n).fourier(6);
        let im = HarmonicSpec::Im(n).fourier(6);
        assert_abs_diff_eq!(fourier_symplectic(&re, &im), n as f64 / 2.0, epsilon = 1e-15);
        assert_eq!(fourier_symplectic(&re, &re), 0.0);
        assert_eq!(fourier_symplectic(&HarmonicSpec::Const(3.0).fourier(6), &im), 0.0);
    }
}

#[test]
fn coefficient_estimates() {
    let s = BoundarySample::uniform(33, |_| 2.5);
    let est = boundary_sample_to_coeffs(&s, 8).unwrap();
    assert_abs_diff_eq!(est.coeffs.get(0).re, 2.5, epsilon = 1e-14);
    for n in 1..=8i64 {
        assert!(est.coeffs.get(n).norm() < 1e-12 && est.coeffs.get(-n).norm() < 1e-12);
    }

    let s = BoundarySample::uniform(64, f64::cos);
    let est = boundary_sample_to_coeffs(&s, 10).unwrap();
    for n in -10..=10i64 {
        let want = if n.abs() == 1 { 0.5 } else { 0.0 };
        assert!((est.coeffs.get(n) - want).norm() < 1e-10, "n = {n}");
    }
    assert!(!est.aliasing_risk);

    // cos(N t) on 2N points cannot be resolved
    let n_max = 6;
    let s = BoundarySample::uniform(2 * n_max, |t| (n_max as f64 * t).cos());
    assert!(matches!(
        boundary_sample_to_coeffs(&s, n_max),
        Err(Error::InsufficientSamples { .. })
    ));
    // enough points in total but a wide gap
    let angles: Vec<f64> = (0..40).map(|k| PI * k as f64 / 40.0).collect();
    let values = angles.iter().map(|t| (3.0 * t).cos()).collect();
    let s = BoundarySample::new(angles, values).unwrap();
    assert!(boundary_sample_to_coeffs(&s, 3).unwrap().aliasing_risk);
}
