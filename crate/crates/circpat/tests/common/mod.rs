//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use circpat::analysis::pairing::normalized_to_unit_disk;
use circpat::cell_complex::{AngleData, DiskComplex};
use circpat::cli_io::{gen_mesh, MeshFamily, MeshSpec};
use circpat::functionals::{FaceField, VertexField};
use circpat::pattern_engine::{layout, uniformize, Layout, PatternSolution, SolveOptions};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn mesh(family: MeshFamily, depth: usize) -> (DiskComplex, AngleData) {
    gen_mesh(&MeshSpec::new(family, depth)).expect("generated mesh validates")
}

/// Closed-form radii of the uniform right-angled patterns: 1 on the square
/// lattice; sqrt 3 on hexagons and 1 on triangles for the hex lattice.
pub fn exact_radii(c: &DiskComplex) -> Vec<f64> {
    (0..c.num_faces())
        .map(|f| {
            if c.face_vertices(f).len() == 6 {
                3f64.sqrt()
            } else {
                1.0
            }
        })
        .collect()
}

/// Uniformize with the closed-form radii prescribed on the boundary faces.
pub fn uniform_pattern(c: &DiskComplex, th: &AngleData) -> PatternSolution {
    let r = exact_radii(c);
    let free: Vec<bool> = (0..c.num_faces()).map(|f| !c.is_boundary_face(f)).collect();
    let data = FaceField::new(r.iter().map(|x| x.ln()).collect(), free);
    uniformize(c, th, &data, &SolveOptions::default())
        .expect("uniformize")
        .0
}

pub fn uniform_case(family: MeshFamily, depth: usize) -> (DiskComplex, AngleData, PatternSolution, Layout) {
    let (c, th) = mesh(family, depth);
    let p = uniform_pattern(&c, &th);
    let l = layout(&c, &p, None).expect("layout");
    (c, th, p, l)
}

/// Face field fixed on the boundary faces to `f` at the circumcentres of
/// the unit-disk-normalised layout, free (and zero) elsewhere.
pub fn boundary_faces_from(c: &DiskComplex, l: &Layout, f: impl Fn(Complex64) -> f64) -> FaceField {
    let ln = normalized_to_unit_disk(c, l);
    let mut values = vec![0.0; c.num_faces()];
    let mut free = vec![true; c.num_faces()];
    for g in c.boundary_faces() {
        values[g] = f(ln.z_f[g]);
        free[g] = false;
    }
    FaceField::new(values, free)
}

/// Vertex field fixed on the boundary vertices to `f` at their normalised
/// positions, free (and zero) elsewhere.
pub fn boundary_vertices_from(c: &DiskComplex, l: &Layout, f: impl Fn(Complex64) -> f64) -> VertexField {
    let ln = normalized_to_unit_disk(c, l);
    let mut values = vec![0.0; c.num_vertices()];
    let mut free = vec![true; c.num_vertices()];
    for v in 0..c.num_vertices() {
        if c.is_boundary_vertex(v) {
            values[v] = f(ln.z_v[v]);
            free[v] = false;
        }
    }
    VertexField::new(values, free)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
