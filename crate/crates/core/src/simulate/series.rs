use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::graphs::GraphTopology;
use crate::measures::{weighted_norm_unchecked, NormSpec};

use super::integrate::Trajectory;

/// A scalar diagnostic sampled at the stored trajectory times.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return invalid(format!("{} times but {} values", times.len(), values.len()));
        }
        Ok(Series { times, values })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// First stored time at which the value drops below `level`.
    pub fn first_time_below(&self, level: f64) -> Option<f64> {
        self.times.iter().zip(&self.values).find(|(_, v)| **v < level).map(|(t, _)| *t)
    }

    fn from_map(traj: &Trajectory, f: impl Fn(&[f64]) -> f64 + Sync) -> Series {
        let values = traj.states.par_iter().map(|x| f(x)).collect();
        Series {
            times: traj.times.clone(),
            values,
        }
    }
}

fn check_norm(traj: &Trajectory, norm: &NormSpec) -> Result<usize> {
    let n = traj.state_dim();
    if norm.dim() != n {
        return invalid(format!("norm has dimension {}, compartments have {n}", norm.dim()));
    }
    Ok(n)
}

/// `Σₑ φₑ ‖x_{head(e)} − x_{tail(e)}‖_{p,Q}` at each stored time.
pub fn edge_series(traj: &Trajectory, graph: &GraphTopology, norm: &NormSpec, weights: Option<&[f64]>) -> Result<Series> {
    let n = check_norm(traj, norm)?;
    if graph.node_count() != traj.compartments {
        return invalid(format!(
            "graph has {} nodes, trajectory has {} compartments",
            graph.node_count(),
            traj.compartments
        ));
    }
    let edges = graph.edges();
    let ones = vec![1.0; edges.len()];
    let phi = match weights {
        Some(w) if w.len() != edges.len() => {
            return invalid(format!("{} edge weights for {} edges", w.len(), edges.len()));
        }
        Some(w) if w.iter().any(|v| !(v.is_finite() && *v > 0.0)) => {
            return invalid("edge weights must be positive and finite");
        }
        Some(w) => w,
        None => &ones,
    };
    Ok(Series::from_map(traj, |x| {
        let mut diff = vec![0.0; n];
        edges
            .iter()
            .zip(phi)
            .map(|(&(i, j), w)| {
                for c in 0..n {
                    diff[c] = x[j * n + c] - x[i * n + c];
                }
                w * weighted_norm_unchecked(&diff, norm)
            })
            .sum()
    }))
}

/// `‖(W ⊗ Q)(Eᵀ ⊗ I) x‖_p` with `W = diag(weights)` (identity by default):
/// the stacked edge-difference vector in one weighted `p`-norm. Coincides
/// with [`edge_series`] for `p = 1`.
pub fn stacked_edge_series(
    traj: &Trajectory,
    graph: &GraphTopology,
    norm: &NormSpec,
    weights: Option<&[f64]>,
) -> Result<Series> {
    let n = check_norm(traj, norm)?;
    if graph.node_count() != traj.compartments {
        return invalid(format!(
            "graph has {} nodes, trajectory has {} compartments",
            graph.node_count(),
            traj.compartments
        ));
    }
    let edges = graph.edges();
    let big = match weights {
        Some(w) if w.len() != edges.len() => {
            return invalid(format!("{} edge weights for {} edges", w.len(), edges.len()));
        }
        Some(w) => norm.kron_weights(w)?,
        None => norm.tiled(edges.len()),
    };
    Ok(Series::from_map(traj, |x| {
        let stacked: Vec<f64> = edges
            .iter()
            .flat_map(|&(i, j)| (0..n).map(move |c| x[j * n + c] - x[i * n + c]))
            .collect();
        weighted_norm_unchecked(&stacked, &big)
    }))
}

/// `‖(x₁ − x̄, …, x_N − x̄)‖` in the `I ⊗ Q` weighted norm.
pub fn deviation_series(traj: &Trajectory, norm: &NormSpec) -> Result<Series> {
    let n = check_norm(traj, norm)?;
    let big = norm.tiled(traj.compartments);
    let count = traj.compartments as f64;
    Ok(Series::from_map(traj, |x| {
        let mut mean = vec![0.0; n];
        for xi in x.chunks_exact(n) {
            for c in 0..n {
                mean[c] += xi[c];
            }
        }
        mean.iter_mut().for_each(|m| *m /= count);
        let dev: Vec<f64> = x.iter().enumerate().map(|(k, v)| v - mean[k % n]).collect();
        weighted_norm_unchecked(&dev, &big)
    }))
}

/// `‖u(t) − v(t)‖` for two trajectories on the same time grid, in the
/// `I ⊗ Q` weighted norm.
pub fn difference_series(a: &Trajectory, b: &Trajectory, norm: &NormSpec) -> Result<Series> {
    check_norm(a, norm)?;
    if a.times != b.times || a.compartments != b.compartments || a.states[0].len() != b.states[0].len() {
        return invalid("trajectories must share time grid and layout");
    }
    let big = norm.tiled(a.compartments);
    let values = a
        .states
        .par_iter()
        .zip(&b.states)
        .map(|(u, v)| {
            let d: Vec<f64> = u.iter().zip(v).map(|(p, q)| p - q).collect();
            weighted_norm_unchecked(&d, &big)
        })
        .collect();
    Ok(Series {
        times: a.times.clone(),
        values,
    })
}

/// `‖xᵢ − xⱼ‖_{p,Q}` for one pair of compartments.
pub fn pair_series(traj: &Trajectory, i: usize, j: usize, norm: &NormSpec) -> Result<Series> {
    let n = check_norm(traj, norm)?;
    if i >= traj.compartments || j >= traj.compartments {
        return invalid(format!("compartment index out of range for {} compartments", traj.compartments));
    }
    Ok(Series::from_map(traj, |x| {
        let d: Vec<f64> = (0..n).map(|c| x[i * n + c] - x[j * n + c]).collect();
        weighted_norm_unchecked(&d, norm)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Norm;

    fn snapshot(states: Vec<f64>, compartments: usize) -> Trajectory {
        Trajectory {
            times: vec![0.0],
            states: vec![states],
            dt: 1.0,
            stride: 1,
            compartments,
        }
    }

    #[test]
    fn single_edge() {
        let tr = snapshot(vec![1.0, 3.0], 2);
        let s = edge_series(&tr, &GraphTopology::line(2).unwrap(), &NormSpec::unweighted(Norm::L2, 1), None).unwrap();
        assert_eq!(s.values, vec![2.0]);
    }

    #[test]
    fn deviation_of_two_points() {
        let tr = snapshot(vec![1.0, 3.0], 2);
        let s = deviation_series(&tr, &NormSpec::unweighted(Norm::L2, 1)).unwrap();
        assert!((s.values[0] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn uniform_state_has_zero_diagnostics() {
        let tr = snapshot(vec![0.5, -2.0, 0.5, -2.0, 0.5, -2.0], 3);
        let q = NormSpec::new(Norm::L1, vec![1.0, 7.0]).unwrap();
        let g = GraphTopology::complete(3).unwrap();
        assert_eq!(edge_series(&tr, &g, &q, None).unwrap().values, vec![0.0]);
        assert_eq!(deviation_series(&tr, &q).unwrap().values, vec![0.0]);
        assert_eq!(pair_series(&tr, 0, 2, &q).unwrap().values, vec![0.0]);
    }

    #[test]
    fn stacked_norms() {
        let tr = snapshot(vec![0.0, 1.0, 3.0], 3);
        let g = GraphTopology::line(3).unwrap();
        let l1 = NormSpec::unweighted(Norm::L1, 1);
        let l2 = NormSpec::unweighted(Norm::L2, 1);
        assert_eq!(stacked_edge_series(&tr, &g, &l1, None).unwrap(), edge_series(&tr, &g, &l1, None).unwrap());
        assert!((stacked_edge_series(&tr, &g, &l2, None).unwrap().values[0] - 5f64.sqrt()).abs() < 1e-15);
        let w = stacked_edge_series(&tr, &g, &NormSpec::unweighted(Norm::LInf, 1), Some(&[3.0, 1.0])).unwrap();
        assert_eq!(w.values, vec![3.0]);
    }

    #[test]
    fn weighted_edges() {
        let tr = snapshot(vec![0.0, 1.0, 3.0], 3);
        let q = NormSpec::unweighted(Norm::L1, 1);
        let s = edge_series(&tr, &GraphTopology::line(3).unwrap(), &q, Some(&[2.0, 0.5])).unwrap();
        assert_eq!(s.values, vec![3.0]);
        assert!(edge_series(&tr, &GraphTopology::line(3).unwrap(), &q, Some(&[1.0])).is_err());
    }
}
