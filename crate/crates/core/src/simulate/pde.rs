//! Method-of-lines discretization of `u_t = F(u, t) + D u_ωω` on `(0, L)`.
//!
//! Neumann meshes place `N` nodes at the cell centres `(i + ½)L/N`, so edge
//! `k` between nodes `k−1` and `k` sits at `kL/N` and carries the weight
//! `sin(kπ/N)`. Dirichlet meshes place nodes at `(i + 1)L/(N + 1)` with zero
//! ghost values beyond both ends.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::DiffusionSpec;
use crate::error::{invalid, Result};
use crate::graphs::GraphTopology;
use crate::matrix::DenseMatrix;
use crate::measures::{weighted_norm_unchecked, NormSpec};
use crate::models::VectorFieldModel;

use super::integrate::Trajectory;
use super::network::{Boundary, NetworkSystem};
use super::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshBoundary {
    Neumann,
    Dirichlet,
}

pub fn discretize_pde_1d(
    model: &VectorFieldModel,
    diffusion: &DiffusionSpec,
    length: f64,
    n: usize,
    bc: MeshBoundary,
) -> Result<NetworkSystem> {
    if n < 3 {
        return invalid(format!("mesh needs at least 3 points, got {n}"));
    }
    if !(length > 0.0 && length.is_finite()) {
        return invalid(format!("domain length must be positive, got {length}"));
    }
    let scale = ((n as f64 + 1.0) / length).powi(2);
    let (matrix, positions, boundary, topology) = match bc {
        MeshBoundary::Neumann => {
            let line = GraphTopology::line(n)?;
            let m = line.laplacian().scale(scale);
            let pos = (0..n).map(|i| (i as f64 + 0.5) * length / n as f64).collect();
            (m, pos, Boundary::Neumann, Some(line))
        }
        MeshBoundary::Dirichlet => {
            let mut data = vec![0.0; n * n];
            for i in 0..n {
                data[i * n + i] = 2.0 * scale;
                if i > 0 {
                    data[i * n + i - 1] = -scale;
                }
                if i + 1 < n {
                    data[i * n + i + 1] = -scale;
                }
            }
            let pos = (0..n).map(|i| (i as f64 + 1.0) * length / (n as f64 + 1.0)).collect();
            (DenseMatrix::new(n, n, data)?, pos, Boundary::Dirichlet, None)
        }
    };
    let mut sys = NetworkSystem::with_matrix(model.clone(), matrix, diffusion.clone(), boundary)?;
    sys.positions = Some(positions);
    sys.length = Some(length);
    sys.topology = topology;
    Ok(sys)
}

/// `Σₖ sin(kπ/N) ‖x_k − x_{k−1}‖_{p,Q}` over the `N − 1` interior edges of a
/// Neumann mesh: the midpoint rule for `∫ sin(πω/L) ‖u_ω‖_{p,Q} dω`.
pub fn weighted_gradient_norm(snapshot: &[f64], norm: &NormSpec) -> Result<f64> {
    let n = norm.dim();
    if snapshot.is_empty() || snapshot.len() % n != 0 {
        return invalid(format!("snapshot length {} is not a multiple of {n}", snapshot.len()));
    }
    let mesh = snapshot.len() / n;
    if mesh < 2 {
        return invalid("snapshot needs at least two mesh points");
    }
    Ok(gradient_unchecked(snapshot, n, mesh, norm))
}

fn gradient_unchecked(x: &[f64], n: usize, mesh: usize, norm: &NormSpec) -> f64 {
    let mut diff = vec![0.0; n];
    (1..mesh)
        .map(|k| {
            for c in 0..n {
                diff[c] = x[k * n + c] - x[(k - 1) * n + c];
            }
            (k as f64 * PI / mesh as f64).sin() * weighted_norm_unchecked(&diff, norm)
        })
        .sum()
}

pub fn weighted_gradient_series(traj: &Trajectory, norm: &NormSpec) -> Result<Series> {
    let n = norm.dim();
    if traj.state_dim() != n {
        return invalid(format!("norm has dimension {n}, mesh points have {}", traj.state_dim()));
    }
    let mesh = traj.compartments;
    if mesh < 2 {
        return invalid("trajectory needs at least two mesh points");
    }
    let values = traj.states.par_iter().map(|x| gradient_unchecked(x, n, mesh, norm)).collect();
    Series::new(traj.times.clone(), values)
}

/// `Σᵢ sin(π ωᵢ / L) ‖uᵢ‖_{p,Q}` over the mesh points of `sys`: the
/// sine-weighted norm that contracts under Dirichlet conditions.
pub fn sine_weighted_norm_series(traj: &Trajectory, sys: &NetworkSystem, norm: &NormSpec) -> Result<Series> {
    let (positions, length) = match (sys.positions(), sys.length()) {
        (Some(p), Some(l)) => (p, l),
        _ => return invalid("sine weights need a discretized PDE system"),
    };
    let n = norm.dim();
    if traj.state_dim() != n || traj.compartments != positions.len() {
        return invalid("trajectory does not match the mesh");
    }
    let phi: Vec<f64> = positions.iter().map(|w| (PI * w / length).sin()).collect();
    let values = traj
        .states
        .par_iter()
        .map(|x| {
            x.chunks_exact(n)
                .zip(&phi)
                .map(|(u, p)| p * weighted_norm_unchecked(u, norm))
                .sum()
        })
        .collect();
    Series::new(traj.times.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Norm;
    use crate::simulate::integrate::{integrate_rk4, OdeSystem};

    fn zero(n: usize) -> VectorFieldModel {
        VectorFieldModel::linear(DenseMatrix::zeros(n, n)).unwrap()
    }

    #[test]
    fn neumann_rows_sum_to_zero() {
        let d = DiffusionSpec::new(vec![1.0]).unwrap();
        let sys = discretize_pde_1d(&zero(1), &d, 2.0, 10, MeshBoundary::Neumann).unwrap();
        let m = sys.coupling_matrix().unwrap();
        for i in 0..10 {
            assert!(m.row(i).iter().sum::<f64>().abs() < 1e-12);
        }
        assert_eq!(m[(0, 1)], -(11.0f64 / 2.0).powi(2));
        assert!(discretize_pde_1d(&zero(1), &d, 1.0, 2, MeshBoundary::Neumann).is_err());
    }

    #[test]
    fn linear_profile_gradient() {
        let mesh = 200;
        let x: Vec<f64> = (0..mesh).map(|i| (i as f64 + 0.5) / mesh as f64).collect();
        let g = weighted_gradient_norm(&x, &NormSpec::unweighted(Norm::L1, 1)).unwrap();
        assert!((g - 2.0 / PI).abs() < 1e-3);
        assert_eq!(weighted_gradient_norm(&[3.0; 20], &NormSpec::unweighted(Norm::L1, 1)).unwrap(), 0.0);
    }

    #[test]
    fn dirichlet_sine_decays_at_discrete_rate() {
        let n = 40;
        let d = DiffusionSpec::new(vec![1.0]).unwrap();
        let sys = discretize_pde_1d(&zero(1), &d, 1.0, n, MeshBoundary::Dirichlet).unwrap();
        let x0: Vec<f64> = sys.positions().unwrap().iter().map(|w| (PI * w).sin()).collect();
        let tr = integrate_rk4(&sys, &x0, 0.05, 1e-4, 500).unwrap();
        let rate = -(tr.last_state()[n / 2] / x0[n / 2]).ln() / 0.05;
        let want = 4.0 * ((n + 1) as f64).powi(2) * (PI / (2.0 * (n + 1) as f64)).sin().powi(2);
        assert!((rate - want).abs() / want < 0.01, "{rate} vs {want}");
        assert_eq!(sys.dim(), n);
    }
}
