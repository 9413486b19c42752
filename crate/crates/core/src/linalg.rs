//! Cyclic Jacobi eigensolver for small symmetric matrices.

use crate::error::{invalid, Result};
use crate::matrix::DenseMatrix;

/// Off-diagonal Frobenius threshold, relative to `max(1, ‖S‖_F)`.
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Symmetry tolerance accepted on input.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Eigen-decomposition `S = V Λ Vᵀ`, eigenvalues ascending, eigenvectors as
/// the columns of `vectors` in the same order.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn new(s: &DenseMatrix) -> Result<Self> {
        if !s.is_square() {
            return invalid("eigensolver needs a square matrix");
        }
        if !s.is_symmetric(SYMMETRY_TOL * s.max_abs().max(1.0)) {
            return invalid("eigensolver needs a symmetric matrix");
        }
        let n = s.rows();
        let mut a = s.symmetric_part();
        let mut v = DenseMatrix::identity(n);
        let frob = a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
        let tol = JACOBI_TOL * frob.max(1.0);

        let mut sweeps = 0;
        while sweeps < JACOBI_MAX_SWEEPS && off_diagonal_norm(&a) > tol {
            sweeps += 1;
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
        let values = order.iter().map(|&i| a[(i, i)]).collect();
        let mut vectors = DenseMatrix::zeros(n, n);
        for (col, &src) in order.iter().enumerate() {
            for r in 0..n {
                vectors[(r, col)] = v[(r, src)];
            }
        }
        Ok(SymmetricEigen {
            values,
            vectors,
            sweeps,
        })
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        let lambda = DenseMatrix::from_diag(&self.values);
        &(&self.vectors * &lambda) * &self.vectors.transpose()
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.rows();
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Largest eigenvalue of the symmetric part of `a`.
pub fn max_symmetric_eigenvalue(a: &DenseMatrix) -> Result<f64> {
    Ok(SymmetricEigen::new(&a.symmetric_part())?.max_eigenvalue())
}
