use crate::error::{invalid, Error, Result};
use crate::models::VectorFieldModel;

/// Right-hand side of an ODE `ẋ = f(x, t)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;

    fn rhs_into(&self, x: &[f64], t: f64, out: &mut [f64]);

    fn rhs(&self, x: &[f64], t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.rhs_into(x, t, &mut out);
        out
    }

    /// Number of compartments the state splits into.
    fn compartments(&self) -> usize {
        1
    }
}

impl OdeSystem for VectorFieldModel {
    fn dim(&self) -> usize {
        VectorFieldModel::dim(self)
    }

    fn rhs_into(&self, x: &[f64], t: f64, out: &mut [f64]) {
        VectorFieldModel::rhs_into(self, x, t, out)
    }
}

/// Stored samples of a fixed-step integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub dt: f64,
    pub stride: usize,
    pub compartments: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state_dim(&self) -> usize {
        self.states[0].len() / self.compartments
    }

    /// Compartment `i` of stored sample `k`.
    pub fn compartment(&self, k: usize, i: usize) -> &[f64] {
        let n = self.state_dim();
        &self.states[k][i * n..(i + 1) * n]
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has at least the initial state")
    }
}

/// Classical fourth-order Runge–Kutta with a fixed step.
///
/// Takes `round(t_end / dt)` steps; every `stride`-th state is stored, and the
/// initial and final states always are. Times are `k·dt` exactly.
pub fn integrate_rk4<S: OdeSystem + ?Sized>(
    sys: &S,
    x0: &[f64],
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return invalid(format!("step dt must be positive, got {dt}"));
    }
    if !(t_end >= dt) || !t_end.is_finite() {
        return invalid(format!("t_end must be at least dt, got {t_end}"));
    }
    if stride == 0 {
        return invalid("storage stride must be at least 1");
    }
    let n = sys.dim();
    if x0.len() != n {
        return invalid(format!("initial state has length {}, system dimension is {n}", x0.len()));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return invalid("initial state must be finite");
    }

    let steps = (t_end / dt).round() as usize;
    let mut times = vec![0.0];
    let mut states = vec![x0.to_vec()];
    let mut x = x0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];

    for step in 0..steps {
        let t = step as f64 * dt;
        sys.rhs_into(&x, t, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k1[i];
        }
        sys.rhs_into(&tmp, t + 0.5 * dt, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k2[i];
        }
        sys.rhs_into(&tmp, t + 0.5 * dt, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + dt * k3[i];
        }
        sys.rhs_into(&tmp, t + dt, &mut k4);
        for i in 0..n {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { last_valid_time: t });
        }
        let done = step + 1;
        if done % stride == 0 || done == steps {
            times.push(done as f64 * dt);
            states.push(x.clone());
        }
    }

    Ok(Trajectory {
        times,
        states,
        dt,
        stride,
        compartments: sys.compartments(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;

    #[test]
    fn exponential_decay() {
        let m = VectorFieldModel::linear(DenseMatrix::from_diag(&[-1.0])).unwrap();
        let tr = integrate_rk4(&m, &[1.0], 1.0, 1e-3, 1).unwrap();
        assert_eq!(tr.len(), 1001);
        assert!((tr.last_state()[0] - (-1.0f64).exp()).abs() < 1e-8);
        assert!((tr.times[1000] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_preserves_radius() {
        let m = VectorFieldModel::linear(DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap()).unwrap();
        let tr = integrate_rk4(&m, &[1.0, 0.0], 10.0, 1e-3, 100).unwrap();
        let x = tr.last_state();
        assert!(((x[0] * x[0] + x[1] * x[1]).sqrt() - 1.0).abs() <= 1e-6);
        assert_eq!(tr.len(), 101);
    }

    #[test]
    fn divergence_reports_last_time() {
        let m = VectorFieldModel::linear(DenseMatrix::from_diag(&[1e6])).unwrap();
        match integrate_rk4(&m, &[1.0], 10.0, 0.1, 1) {
            Err(Error::Divergence { last_valid_time }) => assert!(last_valid_time > 0.0 && last_valid_time < 10.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn argument_checks() {
        let m = VectorFieldModel::linear(DenseMatrix::from_diag(&[-1.0])).unwrap();
        assert!(integrate_rk4(&m, &[1.0], 1.0, 0.0, 1).is_err());
        assert!(integrate_rk4(&m, &[1.0], 1e-4, 1e-3, 1).is_err());
        assert!(integrate_rk4(&m, &[1.0, 2.0], 1.0, 1e-3, 1).is_err());
        assert!(integrate_rk4(&m, &[f64::NAN], 1.0, 1e-3, 1).is_err());
        assert!(integrate_rk4(&m, &[1.0], 1.0, 1e-3, 0).is_err());
    }
}
