//! Derivative checks of both functionals and runs of the Newton solver.

mod common;

use std::cell::RefCell;
use std::f64::consts::PI;

use circpat::cell_complex::AngleData;
use circpat::cli_io::MeshFamily;
use circpat::functionals::w::min_shifted_angle;
use circpat::functionals::{
    grad_w, grad_wstar, hessian_w, hessian_wstar, k_edge, newton_solve, total_w, total_wstar, w_edge, Energy,
    FaceField, NewtonOptions, Sense, SparseSym, VertexField, WEnergy, WStarEnergy,
};
use circpat::kite_geometry::KiteTable;
use common::{mesh, rng};
use rand::Rng;

fn random_face_field(n: usize, amp: f64, seed: u64) -> FaceField {
    let mut r = rng(seed);
    FaceField::fixed((0..n).map(|_| r.random_range(-amp..amp)).collect())
}

#[test]
fn grad_wstar_matches_finite_differences_on_grid() {
    let (c, th) = mesh(MeshFamily::SquareGrid, 5);
    let nf = c.num_faces();
    let refl = random_face_field(nf, 0.5, 21);
    let u = random_face_field(nf, 0.5, 22);
    let g = grad_wstar(&c, &th, &refl, &u);
    let h = 1e-5;
    for f in 0..nf {
        let (mut up, mut dn) = (u.clone(), u.clone());
        up.values[f] += h;
        dn.values[f] -= h;
        let fd = (total_wstar(&c, &th, &refl, &up) - total_wstar(&c, &th, &refl, &dn)) / (2.0 * h);
        assert!((fd - g[f]).abs() < 1e-6, "face {f}: {fd} vs {}", g[f]);
    }
    let zero = grad_wstar(&c, &th, &refl, &FaceField::zeros(nf));
    let shifted = grad_wstar(&c, &th, &refl, &FaceField::fixed(vec![0.8; nf]));
    assert!(zero.iter().chain(&shifted).all(|x| x.abs() < 1e-15));
}

#[test]
fn hessian_wstar_matches_gradient_differences() {
    let (c, th) = mesh(MeshFamily::HexMedial, 2);
    let nf = c.num_faces();
    let refl = random_face_field(nf, 0.3, 23);
    let u = random_face_field(nf, 0.3, 24);
    let dir = random_face_field(nf, 1.0, 25);
    let hess = hessian_wstar(&c, &th, &refl, &u);
    let hv = hess.mul_vec(&dir.values);
    let h = 1e-5;
    let shift = |s: f64| FaceField::fixed(u.values.iter().zip(&dir.values).map(|(a, d)| a + s * d).collect());
    let gp = grad_wstar(&c, &th, &refl, &shift(h));
    let gm = grad_wstar(&c, &th, &refl, &shift(-h));
    for f in 0..nf {
        let fd = (gp[f] - gm[f]) / (2.0 * h);
        assert!((fd - hv[f]).abs() < 1e-5 * hv[f].abs().max(1.0));
    }
    let on_const = hess.mul_vec(&vec![1.0; nf]);
    assert!(on_const.iter().all(|x| x.abs() < 1e-14));
    let d = hess.to_dense();
    assert_eq!(d, d.transpose());
}

#[test]
fn w_derivative_is_minus_k() {
    let mut r = rng(26);
    for _ in 0..100 {
        let (al, ar) = (r.random_range(0.2..1.4), r.random_range(0.2..1.4));
        let vi = r.random_range(-0.2..0.2);
        let vj = r.random_range(-0.2..0.2);
        let h = 1e-5;
        let fd = (w_edge(vi, vj + h, al, ar).unwrap() - w_edge(vi, vj - h, al, ar).unwrap()) / (2.0 * h);
        assert!((fd + k_edge(vi, vj, al, ar).unwrap()).abs() < 1e-6);
    }
}

fn uniform_kites(family: MeshFamily, depth: usize) -> (circpat::cell_complex::DiskComplex, AngleData, KiteTable) {
    let (c, th) = mesh(family, depth);
    let radii = common::exact_radii(&c);
    let k = KiteTable::from_radii(&c, &th, &radii);
    (c, th, k)
}

#[test]
fn grad_w_matches_finite_differences() {
    let (c, _, kites) = uniform_kites(MeshFamily::SquareMedial, 3);
    let nv = c.num_vertices();
    let mut r = rng(27);
    let v = VertexField::fixed((0..nv).map(|_| r.random_range(-0.2..0.2)).collect());
    let g = grad_w(&c, &kites, &v).unwrap();
    let h = 1e-5;
    for i in 0..nv {
        let (mut up, mut dn) = (v.clone(), v.clone());
        up.values[i] += h;
        dn.values[i] -= h;
        let fd = (total_w(&c, &kites, &up).unwrap() - total_w(&c, &kites, &dn).unwrap()) / (2.0 * h);
        assert!((fd - g[i]).abs() < 1e-6);
    }
    assert!(grad_w(&c, &kites, &VertexField::zeros(nv))
        .unwrap()
        .iter()
        .all(|x| x.abs() < 1e-15));
}

#[test]
fn hessian_w_negative_definite_on_free_grid_vertices() {
    let (c, th) = mesh(MeshFamily::SquareGrid, 4);
    let kites = KiteTable::from_radii(&c, &th, &vec![1.0; c.num_faces()]);
    let mut r = rng(28);
    let v = VertexField::fixed((0..c.num_vertices()).map(|_| r.random_range(-0.1..0.1)).collect());
    let h = hessian_w(&c, &kites, &v).unwrap();
    let free: Vec<bool> = (0..c.num_vertices()).map(|i| c.is_interior_vertex(i)).collect();
    let (hf, _) = h.restrict(&free);
    let eig = hf.to_dense().symmetric_eigen();
    let max = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert!(max < 0.0, "largest eigenvalue {max}");
}

#[test]
fn newton_on_grid_with_random_boundary() {
    let (c, th) = mesh(MeshFamily::SquareGrid, 7);
    let nf = c.num_faces();
    let mut r = rng(29);
    let x0: Vec<f64> = (0..nf)
        .map(|f| {
            if c.is_boundary_face(f) {
                r.random_range(-0.2..0.2)
            } else {
                0.0
            }
        })
        .collect();
    let free: Vec<bool> = (0..nf).map(|f| !c.is_boundary_face(f)).collect();
    let reference = FaceField::zeros(nf);
    let energy = WStarEnergy::new(&c, &th, &reference);
    let (x, rep) = newton_solve(&energy, &x0, &free, Sense::Minimize, &NewtonOptions::default()).unwrap();
    assert!(rep.grad_norm < 1e-10);
    assert!(rep.iterations <= 20, "{} iterations", rep.iterations);
    assert!(rep.steps.windows(2).all(|w| w[1].1 <= w[0].1));
    for f in (0..nf).filter(|&f| !free[f]) {
        assert_eq!(x[f], x0[f]);
    }
}

/// Records the smallest shifted angle at every point the solver accepts.
struct Watched<'a> {
    inner: WEnergy<'a>,
    floor: RefCell<Vec<f64>>,
}

impl Energy for Watched<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &[f64]) -> Option<f64> {
        self.inner.value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.floor
            .borrow_mut()
            .push(min_shifted_angle(self.inner.complex, self.inner.kites, x));
        self.inner.gradient(x)
    }
    fn hessian(&self, x: &[f64]) -> SparseSym {
        self.inner.hessian(x)
    }
    fn is_admissible(&self, x: &[f64]) -> bool {
        self.inner.is_admissible(x)
    }
    fn max_step(&self, x: &[f64], dir: &[f64]) -> f64 {
        self.inner.max_step(x, dir)
    }
}

#[test]
fn guarded_start_near_admissibility_boundary() {
    let (c, th) = mesh(MeshFamily::SquareGrid, 4);
    let kites = KiteTable::from_radii(&c, &th, &vec![1.0; c.num_faces()]);
    let nv = c.num_vertices();
    // every reference half-angle is pi/4; lifting the central vertex by
    // pi/2 - 2e-3 above its neighbours leaves a shifted angle of 1e-3
    let centre = (0..nv)
        .find(|&i| c.is_interior_vertex(i) && c.vertex_neighbors(i).all(|(_, j)| c.is_interior_vertex(j)))
        .unwrap();
    let mut x0 = vec![0.0; nv];
    x0[centre] = PI / 2.0 - 2e-3;
    let start = min_shifted_angle(&c, &kites, &x0);
    assert!((start - 1e-3).abs() < 1e-12, "{start}");
    let free: Vec<bool> = (0..nv).map(|i| c.is_interior_vertex(i)).collect();
    let w = Watched {
        inner: WEnergy {
            complex: &c,
            kites: &kites,
        },
        floor: RefCell::new(Vec::new()),
    };
    let (x, rep) = newton_solve(&w, &x0, &free, Sense::Maximize, &NewtonOptions::default()).unwrap();
    assert!(rep.grad_norm < 1e-10);
    assert!(w.floor.borrow().iter().all(|a| *a > 0.0));
    assert!(x.iter().all(|v| v.abs() < 1e-9), "solution is v = 0");
}
