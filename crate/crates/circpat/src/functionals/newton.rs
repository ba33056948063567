//! Damped Newton method for convex minimisation and concave maximisation
//! over the free coordinates of a field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::sparse::{solve_spd, SparseSym};

/// Smooth functional with a sparse Hessian.
pub trait Energy {
    fn dim(&self) -> usize;
    /// `None` outside the domain.
    fn value(&self, x: &[f64]) -> Option<f64>;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    fn hessian(&self, x: &[f64]) -> SparseSym;
    /// Strict admissibility of a point.
    fn is_admissible(&self, _x: &[f64]) -> bool {
        true
    }
    /// Largest step along `dir` the admissibility guard allows.
    fn max_step(&self, _x: &[f64], _dir: &[f64]) -> f64 {
        f64::INFINITY
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
/// Stopping rule and line-search constants. `tol` bounds the sup-norm of
/// the gradient over the free variables.
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub armijo: f64,
    pub backtrack: f64,
    pub max_backtracks: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-10,
            max_iter: 200,
            armijo: 1e-4,
            backtrack: 0.5,
            max_backtracks: 60,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub grad_norm: f64,
    pub energy: f64,
    /// `(step length, energy)` after every accepted step.
    pub steps: Vec<(f64, f64)>,
    /// Number of steps that fell back to the gradient direction.
    pub gradient_steps: usize,
}

fn sup_norm(g: &[f64], free: &[bool]) -> f64 {
    g.iter()
        .zip(free)
        .filter(|(_, f)| **f)
        .fold(0.0, |m, (v, _)| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

/// Newton iteration on the coordinates with `free[i]`; the others stay at `x0`.
///
/// Steps are damped by Armijo backtracking after being clipped by the
/// energy's admissibility guard. When energy differences drop to rounding
/// level the decrease test is replaced by a decrease of the gradient norm.
pub fn newton_solve(
    energy: &dyn Energy,
    x0: &[f64],
    free: &[bool],
    sense: Sense,
    opts: &NewtonOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let n = energy.dim();
    assert_eq!(x0.len(), n);
    assert_eq!(free.len(), n);
    if !energy.is_admissible(x0) || energy.value(x0).is_none() {
        return Err(Error::InadmissibleStart);
    }
    let s = match sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    // everything below minimises s * energy
    let merit = |x: &[f64]| energy.value(x).map(|v| s * v);
    let mut x = x0.to_vec();
    let mut f = merit(&x).unwrap();
    let mut g: Vec<f64> = energy.gradient(&x).iter().map(|v| s * v).collect();
    let mut report = SolveReport::default();

    for it in 0..=opts.max_iter {
        let gnorm = sup_norm(&g, free);
        report.iterations = it;
        report.grad_norm = gnorm;
        report.energy = s * f;
        if gnorm.is_nan() {
            return Err(Error::LineSearchFailure {
                iteration: it,
                grad_norm: gnorm,
            });
        }
        if gnorm <= opts.tol {
            return Ok((x, report));
        }
        if it == opts.max_iter {
            break;
        }
        let mut h = energy.hessian(&x);
        h.scale(s);
        let (hf, map) = h.restrict(free);
        let rhs: Vec<f64> = (0..n).filter(|&i| free[i]).map(|i| -g[i]).collect();
        let newton_dir = solve_spd(&hf, &rhs).ok().map(|d| {
            let mut full = vec![0.0; n];
            for i in 0..n {
                if free[i] {
                    full[i] = d[map[i]];
                }
            }
            full
        });
        let grad_dir: Vec<f64> = (0..n).map(|i| if free[i] { -g[i] } else { 0.0 }).collect();

        let mut accepted = None;
        for (k, dir) in newton_dir.iter().chain(std::iter::once(&grad_dir)).enumerate() {
            if let Some(step) = line_search(energy, &merit, &x, f, &g, gnorm, dir, free, s, opts) {
                if k > 0 || newton_dir.is_none() {
                    report.gradient_steps += 1;
                }
                accepted = Some(step);
                break;
            }
        }
        let Some((t, xn, fn_, gn)) = accepted else {
            return Err(Error::LineSearchFailure {
                iteration: it,
                grad_norm: gnorm,
            });
        };
        x = xn;
        f = fn_;
        g = gn;
        report.steps.push((t, s * f));
    }
    Err(Error::MaxIterations {
        iterations: opts.max_iter,
        grad_norm: sup_norm(&g, free),
    })
}

#[allow(clippy::too_many_arguments, clippy::type_complexity)]
fn line_search(
    energy: &dyn Energy,
    merit: &dyn Fn(&[f64]) -> Option<f64>,
    x: &[f64],
    f: f64,
    g: &[f64],
    gnorm: f64,
    dir: &[f64],
    free: &[bool],
    s: f64,
    opts: &NewtonOptions,
) -> Option<(f64, Vec<f64>, f64, Vec<f64>)> {
    let slope: f64 = g.iter().zip(dir).map(|(a, b)| a * b).sum();
    if !(slope < 0.0) {
        return None;
    }
    let mut t = energy.max_step(x, dir).min(1.0);
    if !(t > 0.0) {
        return None;
    }
    let noise = 1e-12 * (1.0 + f.abs());
    for _ in 0..opts.max_backtracks {
        let xn: Vec<f64> = x.iter().zip(dir).map(|(a, d)| a + t * d).collect();
        if energy.is_admissible(&xn) {
            if let Some(fn_) = merit(&xn) {
                let armijo = fn_ <= f + opts.armijo * t * slope;
                let in_noise = (t * slope).abs() < noise;
                if armijo || in_noise {
                    let gn: Vec<f64> = energy.gradient(&xn).iter().map(|v| s * v).collect();
                    let gn_norm = sup_norm(&gn, free);
                    if armijo && !in_noise || gn_norm < gnorm {
                        return Some((t, xn, fn_, gn));
                    }
                }
            }
        }
        t *= opts.backtrack;
    }
    None
}
