//! Symmetric sparse matrices and SPD solves.

use nalgebra::DMatrix;
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix, CsrMatrix};

use crate::error::{Error, Result};

/// Systems with at least this many unknowns go to conjugate gradients.
pub const DIRECT_SOLVE_LIMIT: usize = 20_000;

/// Symmetric matrix kept as a list of (row, col, value) contributions.
/// Both triangles are stored; duplicates add up.
#[derive(Clone, Debug, Default)]
pub struct SparseSym {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn new(n: usize) -> Self {
        SparseSym { n, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.entries.push((i, j, v));
    }

    /// Add `w (x_i - x_j)^2` to the quadratic form.
    pub fn add_edge(&mut self, i: usize, j: usize, w: f64) {
        self.entries.push((i, i, w));
        self.entries.push((j, j, w));
        self.entries.push((i, j, -w));
        self.entries.push((j, i, -w));
    }

    pub fn scale(&mut self, s: f64) {
        for e in &mut self.entries {
            e.2 *= s;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    pub fn to_csr(&self) -> CsrMatrix<f64> {
        CsrMatrix::from(&self.to_coo())
    }

    fn to_coo(&self) -> CooMatrix<f64> {
        let mut coo = CooMatrix::new(self.n, self.n);
        for &(i, j, v) in &self.entries {
            coo.push(i, j, v);
        }
        coo
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for &(i, j, v) in &self.entries {
            y[i] += v * x[j];
        }
        y
    }

    /// Principal submatrix on the rows/columns with `keep[i]`, with the
    /// index map from full to reduced numbering.
    pub fn restrict(&self, keep: &[bool]) -> (SparseSym, Vec<usize>) {
        let mut map = vec![usize::MAX; self.n];
        let mut k = 0;
        for (i, &f) in keep.iter().enumerate() {
            if f {
                map[i] = k;
                k += 1;
            }
        }
        let entries = self
            .entries
            .iter()
            .filter(|(i, j, _)| keep[*i] && keep[*j])
            .map(|&(i, j, v)| (map[i], map[j], v))
            .collect();
        (SparseSym { n: k, entries }, map)
    }
}

/// Solve `A x = b` for symmetric positive definite `A`.
pub fn solve_spd(a: &SparseSym, b: &[f64]) -> Result<Vec<f64>> {
    if a.dim() == 0 {
        return Ok(Vec::new());
    }
    if a.dim() < DIRECT_SOLVE_LIMIT {
        solve_direct(a, b)
    } else {
        let csr = a.to_csr();
        pcg(&csr, b, 1e-14, 20 * a.dim())
    }
}

fn solve_direct(a: &SparseSym, b: &[f64]) -> Result<Vec<f64>> {
    let csc = CscMatrix::from(&a.to_coo());
    let chol = CscCholesky::factor(&csc).map_err(|e| Error::LinearSolve(format!("{e:?}")))?;
    let rhs = DMatrix::from_column_slice(b.len(), 1, b);
    let x = chol.solve(&rhs);
    let out: Vec<f64> = x.column(0).iter().copied().collect();
    if out.iter().all(|v| v.is_finite()) {
        Ok(out)
    } else {
        Err(Error::LinearSolve("non-finite solution".into()))
    }
}

/// Conjugate gradients with Jacobi preconditioning; stops when the residual
/// drops below `rel_tol` times the right-hand side norm.
pub fn pcg(a: &CsrMatrix<f64>, b: &[f64], rel_tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = b.len();
    let mut diag = vec![0.0; n];
    for (i, row) in a.row_iter().enumerate() {
        for (&j, &v) in row.col_indices().iter().zip(row.values()) {
            if i == j {
                diag[i] += v;
            }
        }
    }
    if diag.iter().any(|&d| d <= 0.0) {
        return Err(Error::LinearSolve("matrix has a non-positive diagonal".into()));
    }
    let matvec = |x: &[f64], y: &mut [f64]| {
        for (i, row) in a.row_iter().enumerate() {
            y[i] = row
                .col_indices()
                .iter()
                .zip(row.values())
                .map(|(&j, &v)| v * x[j])
                .sum();
        }
    };
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let bnorm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for _ in 0..max_iter {
        matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::LinearSolve("matrix is not positive definite".into()));
        }
        let step = rz / pap;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        if dot(&r, &r).sqrt() <= rel_tol * bnorm {
            return Ok(x);
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::LinearSolve("conjugate gradients did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_laplacian(n: usize) -> SparseSym {
        let mut a = SparseSym::new(n);
        for i in 0..n - 1 {
            a.add_edge(i, i + 1, 1.0 + i as f64 * 0.1);
        }
        a.add(0, 0, 1.0);
        a
    }

    #[test]
    fn direct_and_cg_agree() {
        let a = path_laplacian(50);
        let b: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let x1 = solve_spd(&a, &b).unwrap();
        let x2 = pcg(&a.to_csr(), &b, 1e-14, 1000).unwrap();
        for (p, q) in x1.iter().zip(&x2) {
            assert!((p - q).abs() < 1e-9);
        }
        let r = a.mul_vec(&x1);
        for (p, q) in r.iter().zip(&b) {
            assert!((p - q).abs() < 1e-10);
        }
    }

    #[test]
    fn singular_matrix_fails() {
        let mut a = SparseSym::new(2);
        a.add_edge(0, 1, 1.0);
        assert!(solve_spd(&a, &[1.0, -1.0]).is_err());
    }
}
