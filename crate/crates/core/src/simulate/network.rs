use std::fmt;
use std::sync::Arc;

use crate::certify::DiffusionSpec;
use crate::error::{invalid, Result};
use crate::graphs::GraphTopology;
use crate::matrix::DenseMatrix;
use crate::models::VectorFieldModel;

use super::integrate::OdeSystem;

/// Nonlinear coupling map `h: ℝⁿ → ℝⁿ`.
pub type CouplingFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub enum Coupling {
    /// `−(C ⊗ D) x` for an `N × N` coupling matrix `C`.
    Linear {
        matrix: DenseMatrix,
        diffusion: DiffusionSpec,
        /// Nonzeros of each row of `matrix`.
        rows: Vec<Vec<(usize, f64)>>,
    },
    /// Two compartments: `ẋ₁ = F(x₁) + h₁(x₂) − h₁(x₁)`,
    /// `ẋ₂ = F(x₂) + h₂(x₁) − h₂(x₂)`.
    Pairwise { h1: CouplingFn, h2: CouplingFn },
}

impl fmt::Debug for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Linear { matrix, diffusion, .. } => f
                .debug_struct("Linear")
                .field("matrix", matrix)
                .field("diffusion", diffusion)
                .finish_non_exhaustive(),
            Coupling::Pairwise { .. } => f.write_str("Pairwise"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    None,
    Neumann,
    Dirichlet,
}

/// `N` copies of a vector field coupled diffusively.
#[derive(Debug, Clone)]
pub struct NetworkSystem {
    pub(crate) model: VectorFieldModel,
    pub(crate) compartments: usize,
    pub(crate) coupling: Coupling,
    pub(crate) boundary: Boundary,
    pub(crate) topology: Option<GraphTopology>,
    /// Physical position of each mesh point, for PDE discretizations.
    pub(crate) positions: Option<Vec<f64>>,
    pub(crate) length: Option<f64>,
}

impl NetworkSystem {
    pub(crate) fn with_matrix(
        model: VectorFieldModel,
        matrix: DenseMatrix,
        diffusion: DiffusionSpec,
        boundary: Boundary,
    ) -> Result<Self> {
        if diffusion.dim() != model.dim() {
            return invalid(format!(
                "diffusion has dimension {}, model has {}",
                diffusion.dim(),
                model.dim()
            ));
        }
        if !matrix.is_square() {
            return invalid("coupling matrix must be square");
        }
        let n = matrix.rows();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| matrix[(i, j)] != 0.0)
                    .map(|j| (j, matrix[(i, j)]))
                    .collect()
            })
            .collect();
        Ok(NetworkSystem {
            model,
            compartments: n,
            coupling: Coupling::Linear {
                matrix,
                diffusion,
                rows,
            },
            boundary,
            topology: None,
            positions: None,
            length: None,
        })
    }

    pub fn model(&self) -> &VectorFieldModel {
        &self.model
    }

    pub fn compartments(&self) -> usize {
        self.compartments
    }

    pub fn state_dim(&self) -> usize {
        self.model.dim()
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn topology(&self) -> Option<&GraphTopology> {
        self.topology.as_ref()
    }

    /// Mesh point positions for PDE discretizations.
    pub fn positions(&self) -> Option<&[f64]> {
        self.positions.as_deref()
    }

    pub fn length(&self) -> Option<f64> {
        self.length
    }

    /// The `N × N` coupling matrix, for linear couplings.
    pub fn coupling_matrix(&self) -> Option<&DenseMatrix> {
        match &self.coupling {
            Coupling::Linear { matrix, .. } => Some(matrix),
            Coupling::Pairwise { .. } => None,
        }
    }

    /// `I ⊗ A − C ⊗ D` for a time-invariant linear model with linear coupling.
    pub fn linear_system_matrix(&self) -> Option<DenseMatrix> {
        let a = self.model.constant_matrix()?;
        match &self.coupling {
            Coupling::Linear { matrix, diffusion, .. } => {
                let block = DenseMatrix::identity(self.compartments).kron(a);
                Some(&block - &matrix.kron(&diffusion.matrix()))
            }
            Coupling::Pairwise { .. } => None,
        }
    }

    /// Uniform state `1 ⊗ w`.
    pub fn uniform_state(&self, w: &[f64]) -> Vec<f64> {
        w.repeat(self.compartments)
    }
}

impl OdeSystem for NetworkSystem {
    fn dim(&self) -> usize {
        self.compartments * self.model.dim()
    }

    fn compartments(&self) -> usize {
        self.compartments
    }

    fn rhs_into(&self, x: &[f64], t: f64, out: &mut [f64]) {
        let n = self.model.dim();
        for (xi, oi) in x.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
            self.model.rhs_into(xi, t, oi);
        }
        match &self.coupling {
            Coupling::Linear { diffusion, rows, .. } => {
                let d = diffusion.coefficients();
                for (i, row) in rows.iter().enumerate() {
                    let oi = &mut out[i * n..(i + 1) * n];
                    for &(j, cij) in row {
                        let xj = &x[j * n..(j + 1) * n];
                        for c in 0..n {
                            oi[c] -= cij * d[c] * xj[c];
                        }
                    }
                }
            }
            Coupling::Pairwise { h1, h2 } => {
                let (x1, x2) = x.split_at(n);
                let a = h1(x2);
                let b = h1(x1);
                let c = h2(x1);
                let e = h2(x2);
                for k in 0..n {
                    out[k] += a[k] - b[k];
                    out[n + k] += c[k] - e[k];
                }
            }
        }
    }
}

/// `ẋ = F̃(x, t) − (𝓛 ⊗ D) x` on the graph `G`.
pub fn assemble_network(
    model: &VectorFieldModel,
    graph: &GraphTopology,
    diffusion: &DiffusionSpec,
) -> Result<NetworkSystem> {
    let mut sys = NetworkSystem::with_matrix(
        model.clone(),
        graph.laplacian().clone(),
        diffusion.clone(),
        Boundary::None,
    )?;
    sys.topology = Some(graph.clone());
    Ok(sys)
}

/// `N` independent copies of the model with no coupling.
pub fn uncoupled(model: &VectorFieldModel, compartments: usize) -> Result<NetworkSystem> {
    if compartments == 0 {
        return invalid("need at least one compartment");
    }
    let unit = DiffusionSpec::new(vec![1.0; model.dim()])?;
    NetworkSystem::with_matrix(
        model.clone(),
        DenseMatrix::zeros(compartments, compartments),
        unit,
        Boundary::None,
    )
}

/// Two compartments with nonlinear couplings `h₁`, `h₂`.
pub fn two_compartment(model: &VectorFieldModel, h1: CouplingFn, h2: CouplingFn) -> Result<NetworkSystem> {
    let probe = vec![0.0; model.dim()];
    if h1(&probe).len() != model.dim() || h2(&probe).len() != model.dim() {
        return invalid("coupling maps must return vectors of the model dimension");
    }
    Ok(NetworkSystem {
        model: model.clone(),
        compartments: 2,
        coupling: Coupling::Pairwise { h1, h2 },
        boundary: Boundary::None,
        topology: Some(GraphTopology::line(2)?),
        positions: None,
        length: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin() -> VectorFieldModel {
        VectorFieldModel::linear(DenseMatrix::from_rows(&[vec![-1.0, 2.0], vec![0.5, -3.0]]).unwrap()).unwrap()
    }

    #[test]
    fn linear_network_matches_kronecker_assembly() {
        let d = DiffusionSpec::new(vec![1.0, 0.25]).unwrap();
        let sys = assemble_network(&lin(), &GraphTopology::complete(3).unwrap(), &d).unwrap();
        let m = sys.linear_system_matrix().unwrap();
        let x: Vec<f64> = (0..6).map(|i| (i as f64 * 0.7).sin()).collect();
        let want = m.matvec(&x);
        let got = sys.rhs(&x, 0.0);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn pairwise_linear_coupling_equals_line2() {
        let d = DiffusionSpec::new(vec![0.3, 0.7]).unwrap();
        let line = assemble_network(&lin(), &GraphTopology::line(2).unwrap(), &d).unwrap();
        let dd = d.clone();
        let h: CouplingFn = Arc::new(move |x: &[f64]| x.iter().zip(dd.coefficients()).map(|(a, b)| a * b).collect());
        let pair = two_compartment(&lin(), h.clone(), h).unwrap();
        let x = [0.3, -1.2, 2.0, 0.1];
        for (a, b) in line.rhs(&x, 0.0).iter().zip(pair.rhs(&x, 0.0)) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_coupling_is_cartesian_laplacian() {
        let d = DiffusionSpec::new(vec![1.0, 1.0]).unwrap();
        let grid = assemble_network(&lin(), &GraphTopology::grid(2, 3).unwrap(), &d).unwrap();
        let cart = GraphTopology::new(crate::graphs::TopologyKind::Cartesian {
            factors: vec![
                crate::graphs::TopologyKind::Line { n: 2 },
                crate::graphs::TopologyKind::Line { n: 3 },
            ],
        })
        .unwrap();
        assert_eq!(grid.coupling_matrix().unwrap(), cart.laplacian());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let d = DiffusionSpec::new(vec![1.0]).unwrap();
        assert!(assemble_network(&lin(), &GraphTopology::line(3).unwrap(), &d).is_err());
    }
}
