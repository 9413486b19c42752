use crate::error::{invalid, Result};
use crate::graphs::GraphTopology;
use crate::linalg::SymmetricEigen;
use crate::matrix::DenseMatrix;

/// Coordinates of a network state in the basis `vᵢ ⊗ eⱼ`, where `vᵢ` are
/// orthonormal Laplacian eigenvectors in ascending eigenvalue order.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns.
    pub vectors: DenseMatrix,
    /// `coefficients[(i, j)] = c_{ij}`, an `N × n` matrix.
    pub coefficients: DenseMatrix,
}

impl ModalDecomposition {
    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        self.coefficients[(i, j)]
    }

    /// `Σ c_{ij} (vᵢ ⊗ eⱼ)`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let big_n = self.vectors.rows();
        let n = self.coefficients.cols();
        let mut x = vec![0.0; big_n * n];
        for k in 0..big_n {
            for i in 0..big_n {
                let v = self.vectors[(k, i)];
                for j in 0..n {
                    x[k * n + j] += v * self.coefficients[(i, j)];
                }
            }
        }
        x
    }
}

pub fn modal_decompose(x: &[f64], graph: &GraphTopology) -> Result<ModalDecomposition> {
    let big_n = graph.node_count();
    if x.is_empty() || x.len() % big_n != 0 {
        return invalid(format!("state length {} is not a multiple of {big_n} nodes", x.len()));
    }
    let n = x.len() / big_n;
    let eig = SymmetricEigen::new(graph.laplacian())?;
    let mut coeffs = vec![0.0; big_n * n];
    for i in 0..big_n {
        for k in 0..big_n {
            let v = eig.vectors[(k, i)];
            for j in 0..n {
                coeffs[i * n + j] += v * x[k * n + j];
            }
        }
    }
    Ok(ModalDecomposition {
        eigenvalues: eig.values,
        vectors: eig.vectors,
        coefficients: DenseMatrix::new(big_n, n, coeffs)?,
    })
}
