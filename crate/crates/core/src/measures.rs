//! Weighted `p`-norms, induced matrix norms and matrix measures.
//!
//! A [`NormSpec`] pairs an exponent `p ∈ {1, 2, ∞}` with a positive diagonal
//! weight `Q`; the weighted norm is `‖x‖_{p,Q} = ‖Qx‖_p` and everything induced
//! by it reduces to the unweighted case through `A ↦ QAQ⁻¹`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{max_symmetric_eigenvalue, SymmetricEigen};
use crate::matrix::DenseMatrix;

/// Exponent of an `L^p` norm. Only the three exponents with closed-form
/// matrix measures are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Norm {
    #[serde(rename = "1")]
    L1,
    #[serde(rename = "2")]
    L2,
    #[serde(rename = "inf")]
    LInf,
}

impl Norm {
    pub const ALL: [Norm; 3] = [Norm::L1, Norm::L2, Norm::LInf];

    /// Exponent as a real, `∞` for `LInf`.
    pub fn exponent(self) -> f64 {
        match self {
            Norm::L1 => 1.0,
            Norm::L2 => 2.0,
            Norm::LInf => f64::INFINITY,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::LInf => "inf",
        }
    }

    /// Unweighted vector norm.
    pub fn of(self, x: &[f64]) -> f64 {
        match self {
            Norm::L1 => x.iter().map(|v| v.abs()).sum(),
            Norm::L2 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Norm::LInf => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "1" => Ok(Norm::L1),
            "2" => Ok(Norm::L2),
            "inf" | "∞" => Ok(Norm::LInf),
            other => Err(format!("unsupported norm exponent {other:?}")),
        }
    }
}

/// A weighted norm `‖x‖_{p,Q} = ‖Qx‖_p` with `Q = diag(weights)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    p: Norm,
    weights: Vec<f64>,
}

impl NormSpec {
    pub fn new(p: Norm, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return invalid("norm weights must be non-empty");
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return invalid(format!("norm weights must be positive and finite, got {w}"));
        }
        Ok(NormSpec { p, weights })
    }

    /// Unweighted norm on `ℝⁿ`.
    pub fn unweighted(p: Norm, n: usize) -> Self {
        NormSpec {
            p,
            weights: vec![1.0; n.max(1)],
        }
    }

    pub fn p(&self) -> Norm {
        self.p
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Same exponent, weights multiplied by a positive scalar.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Self::new(self.p, self.weights.iter().map(|w| alpha * w).collect())
    }

    /// The norm on `ℝ^{Nn}` weighted by `I_N ⊗ Q`.
    pub fn tiled(&self, copies: usize) -> Self {
        NormSpec {
            p: self.p,
            weights: self.weights.repeat(copies),
        }
    }

    /// The norm weighted by `P ⊗ Q` for a positive diagonal `P`.
    pub fn kron_weights(&self, outer: &[f64]) -> Result<Self> {
        let weights = outer
            .iter()
            .flat_map(|o| self.weights.iter().map(move |w| o * w))
            .collect();
        Self::new(self.p, weights)
    }

    fn check_square(&self, a: &DenseMatrix) -> Result<()> {
        if !a.is_square() {
            return invalid(format!("expected a square matrix, got {}x{}", a.rows(), a.cols()));
        }
        if a.rows() != self.dim() {
            return invalid(format!(
                "matrix is {n}x{n} but the norm weights have length {}",
                self.dim(),
                n = a.rows()
            ));
        }
        Ok(())
    }

    fn conjugated(&self, a: &DenseMatrix) -> DenseMatrix {
        a.conjugate_diag(&self.weights)
    }
}

/// `‖x‖_{p,Q}`.
pub fn vector_norm(x: &[f64], spec: &NormSpec) -> Result<f64> {
    if x.len() != spec.dim() {
        return invalid(format!(
            "vector has length {} but the norm weights have length {}",
            x.len(),
            spec.dim()
        ));
    }
    Ok(weighted_norm_unchecked(x, spec))
}

/// Hot-loop variant of [`vector_norm`] for callers that already checked the
/// dimension.
pub(crate) fn weighted_norm_unchecked(x: &[f64], spec: &NormSpec) -> f64 {
    let w = &spec.weights;
    match spec.p {
        Norm::L1 => x.iter().zip(w).map(|(v, q)| (q * v).abs()).sum(),
        Norm::L2 => x.iter().zip(w).map(|(v, q)| (q * v) * (q * v)).sum::<f64>().sqrt(),
        Norm::LInf => x.iter().zip(w).fold(0.0, |m, (v, q)| m.max((q * v).abs())),
    }
}

/// Operator norm of `A` induced by `‖·‖_{p,Q}`, i.e. `‖QAQ⁻¹‖_p`.
pub fn induced_matrix_norm(a: &DenseMatrix, spec: &NormSpec) -> Result<f64> {
    spec.check_square(a)?;
    let a = spec.conjugated(a);
    let n = a.rows();
    Ok(match spec.p {
        Norm::L1 => (0..n)
            .map(|j| (0..n).map(|i| a[(i, j)].abs()).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max),
        Norm::LInf => (0..n)
            .map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max),
        Norm::L2 => {
            let ata = &a.transpose() * &a;
            SymmetricEigen::new(&ata.symmetric_part())?
                .max_eigenvalue()
                .max(0.0)
                .sqrt()
        }
    })
}

/// Matrix measure (logarithmic norm) `M_{p,Q}[A] = M_p[QAQ⁻¹]` in closed form.
pub fn matrix_measure(a: &DenseMatrix, spec: &NormSpec) -> Result<f64> {
    spec.check_square(a)?;
    let a = spec.conjugated(a);
    match spec.p {
        Norm::L1 => Ok(column_measures(&a)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)),
        Norm::LInf => Ok(row_measures(&a).into_iter().fold(f64::NEG_INFINITY, f64::max)),
        Norm::L2 => max_symmetric_eigenvalue(&a),
    }
}

/// `a_jj + Σ_{i≠j} |a_ij|` for each column `j`.
pub fn column_measures(a: &DenseMatrix) -> Vec<f64> {
    let n = a.rows();
    (0..n)
        .map(|j| a[(j, j)] + (0..n).filter(|&i| i != j).map(|i| a[(i, j)].abs()).sum::<f64>())
        .collect()
}

/// `a_ii + Σ_{j≠i} |a_ij|` for each row `i`.
pub fn row_measures(a: &DenseMatrix) -> Vec<f64> {
    let n = a.rows();
    (0..n)
        .map(|i| a[(i, i)] + (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum::<f64>())
        .collect()
}

/// One-sided difference quotient `(‖I + hA‖ − 1)/h` of the induced norm.
///
/// This is the defining limit of the measure evaluated at a fixed `h`; it
/// only shares [`induced_matrix_norm`] with [`matrix_measure`] and serves as
/// its oracle.
pub fn matrix_measure_definitional(a: &DenseMatrix, spec: &NormSpec, h: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 1e-3) {
        return invalid(format!("step h must lie in (0, 1e-3], got {h}"));
    }
    spec.check_square(a)?;
    let n = a.rows();
    let shifted = &DenseMatrix::identity(n) + &a.scale(h);
    Ok((induced_matrix_norm(&shifted, spec)? - 1.0) / h)
}

/// Forward-difference approximation of the right semi-inner product
/// `(x, y)₊ = ‖x‖ · lim_{h→0⁺} (‖x + hy‖ − ‖x‖)/h`.
pub fn semi_inner_plus(x: &[f64], y: &[f64], spec: &NormSpec, h: f64) -> Result<f64> {
    if x.len() != y.len() {
        return invalid("semi-inner product arguments differ in length");
    }
    if !(h > 0.0) {
        return invalid("step h must be positive");
    }
    let nx = vector_norm(x, spec)?;
    if nx == 0.0 {
        return invalid("semi-inner product is undefined at x = 0");
    }
    let shifted: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + h * b).collect();
    Ok(nx * (vector_norm(&shifted, spec)? - nx) / h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn id(p: Norm, n: usize) -> NormSpec {
        NormSpec::unweighted(p, n)
    }

    #[test]
    fn vector_norm_examples() {
        assert_eq!(vector_norm(&[1.0, -1.0], &id(Norm::L1, 2)).unwrap(), 2.0);
        assert_eq!(vector_norm(&[3.0, 4.0], &id(Norm::L2, 2)).unwrap(), 5.0);
        let q = NormSpec::new(Norm::LInf, vec![5.0, 1.0]).unwrap();
        assert_eq!(vector_norm(&[1.0, 2.0], &q).unwrap(), 5.0);
        assert!(vector_norm(&[1.0], &q).is_err());
        assert_eq!(vector_norm(&[0.0, 0.0], &q).unwrap(), 0.0);
    }

    #[test]
    fn norm_spec_rejects_bad_weights() {
        assert!(NormSpec::new(Norm::L1, vec![]).is_err());
        assert!(NormSpec::new(Norm::L1, vec![1.0, 0.0]).is_err());
        assert!(NormSpec::new(Norm::L1, vec![1.0, -2.0]).is_err());
        assert!(NormSpec::new(Norm::L1, vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn induced_norm_examples() {
        let a = m(&[&[1.0, -2.0], &[3.0, 4.0]]);
        assert_eq!(induced_matrix_norm(&a, &id(Norm::L1, 2)).unwrap(), 6.0);
        assert_eq!(induced_matrix_norm(&a, &id(Norm::LInf, 2)).unwrap(), 7.0);
        let d = DenseMatrix::from_diag(&[3.0, -4.0]);
        assert!((induced_matrix_norm(&d, &id(Norm::L2, 2)).unwrap() - 4.0).abs() < 1e-12);
        let rect = DenseMatrix::zeros(2, 3);
        assert!(induced_matrix_norm(&rect, &id(Norm::L1, 2)).is_err());
    }

    #[test]
    fn measure_examples() {
        let d = DenseMatrix::from_diag(&[-1.0, -2.0]);
        assert_eq!(matrix_measure(&d, &id(Norm::L1, 2)).unwrap(), -1.0);
        let skew = m(&[&[0.0, 2.0], &[-2.0, 0.0]]);
        assert!(matrix_measure(&skew, &id(Norm::L2, 2)).unwrap().abs() < 1e-14);
        assert!(matrix_measure(&d, &id(Norm::L1, 3)).is_err());
    }

    #[test]
    fn definitional_examples() {
        let d = DenseMatrix::from_diag(&[-1.0, -2.0]);
        let v = matrix_measure_definitional(&d, &id(Norm::L1, 2), 1e-6).unwrap();
        assert!((v + 1.0).abs() < 1e-5);
        let skew = m(&[&[0.0, 2.0], &[-2.0, 0.0]]);
        let v = matrix_measure_definitional(&skew, &id(Norm::L2, 2), 1e-6).unwrap();
        assert!(v.abs() < 1e-5);
        assert!(matrix_measure_definitional(&d, &id(Norm::L1, 2), 0.0).is_err());
        assert!(matrix_measure_definitional(&d, &id(Norm::L1, 2), -1e-6).is_err());
    }

    #[test]
    fn semi_inner_examples() {
        let e2 = id(Norm::L2, 2);
        assert!(semi_inner_plus(&[1.0, 0.0], &[0.0, 1.0], &e2, 1e-8).unwrap().abs() < 1e-6);
        let v = semi_inner_plus(&[1.0], &[-3.0], &id(Norm::L1, 1), 1e-8).unwrap();
        assert!((v + 3.0).abs() < 1e-6);
        let v = semi_inner_plus(&[0.0, 1.0], &[1.0, 0.0], &id(Norm::L1, 2), 1e-8).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
        assert!(semi_inner_plus(&[0.0, 0.0], &[1.0, 0.0], &e2, 1e-8).is_err());
    }

    #[test]
    fn semi_inner_matches_dot_product_for_euclidean() {
        let e3 = id(Norm::L2, 3);
        let x = [1.0, -2.0, 0.5];
        let y = [0.3, 0.7, -1.1];
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!((semi_inner_plus(&x, &y, &e3, 1e-7).unwrap() - dot).abs() < 1e-6);
    }
}
