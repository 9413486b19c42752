//! Built-in vector fields with analytic Jacobians.
//!
//! * Goodwin oscillator (`n = 3`) on the nonnegative orthant.
//! * Reduced enzyme/substrate model (`n = 2`) driven by an input signal
//!   `z(t)`, on `[0, ∞) × [0, S_Y]`.
//! * Linear, possibly time-varying, systems `ẋ = A(t) x`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::DenseMatrix;

/// Scalar input signal `z(t) = offset + amplitude · sin(frequency · t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Signal {
    pub offset: f64,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default)]
    pub frequency: f64,
}

impl Signal {
    pub fn constant(value: f64) -> Self {
        Signal {
            offset: value,
            amplitude: 0.0,
            frequency: 0.0,
        }
    }

    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        self.offset + self.amplitude * (self.frequency * t).sin()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.offset - self.amplitude.abs() >= 0.0
    }
}

impl Default for Signal {
    /// `z(t) = 20 (1 + sin 10t)`.
    fn default() -> Self {
        Signal {
            offset: 20.0,
            amplitude: 20.0,
            frequency: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodwinParams {
    pub a: f64,
    pub k: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub k_m: f64,
}

impl Default for GoodwinParams {
    fn default() -> Self {
        GoodwinParams {
            a: 150.0,
            k: 1.0,
            b: 0.2,
            alpha: 0.2,
            beta: 0.2,
            gamma: 0.2,
            delta: 15.0,
            k_m: 1.0,
        }
    }
}

impl GoodwinParams {
    fn fields(&self) -> [(&'static str, f64); 8] {
        [
            ("a", self.a),
            ("k", self.k),
            ("b", self.b),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("k_m", self.k_m),
        ]
    }

    fn field_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "a" => &mut self.a,
            "k" => &mut self.k,
            "b" => &mut self.b,
            "alpha" => &mut self.alpha,
            "beta" => &mut self.beta,
            "gamma" => &mut self.gamma,
            "delta" => &mut self.delta,
            "k_m" => &mut self.k_m,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiochemicalParams {
    pub delta: f64,
    pub k1: f64,
    pub k2: f64,
    pub s_y: f64,
}

impl Default for BiochemicalParams {
    fn default() -> Self {
        BiochemicalParams {
            delta: 20.0,
            k1: 0.5,
            k2: 5.0,
            s_y: 0.1,
        }
    }
}

impl BiochemicalParams {
    fn fields(&self) -> [(&'static str, f64); 4] {
        [("delta", self.delta), ("k1", self.k1), ("k2", self.k2), ("s_y", self.s_y)]
    }

    fn field_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "delta" => &mut self.delta,
            "k1" => &mut self.k1,
            "k2" => &mut self.k2,
            "s_y" => &mut self.s_y,
            _ => return None,
        })
    }
}

/// `t ↦ A(t)` for linear systems.
pub type MatrixFn = Arc<dyn Fn(f64) -> DenseMatrix + Send + Sync>;

#[derive(Clone)]
pub enum ModelKind {
    Goodwin(GoodwinParams),
    Biochemical { params: BiochemicalParams, signal: Signal },
    Linear {
        n: usize,
        matrix: MatrixFn,
        /// Set when `A` does not depend on time.
        constant: Option<DenseMatrix>,
    },
}

impl fmt::Debug for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Goodwin(p) => f.debug_tuple("Goodwin").field(p).finish(),
            ModelKind::Biochemical { params, signal } => f
                .debug_struct("Biochemical")
                .field("params", params)
                .field("signal", signal)
                .finish(),
            ModelKind::Linear { n, constant, .. } => f
                .debug_struct("Linear")
                .field("n", n)
                .field("constant", constant)
                .finish_non_exhaustive(),
        }
    }
}

/// Closed interval `[lo, hi]`; `hi` may be `+∞` and `lo` may be `−∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// A vector field `F(x, t)` on a box-shaped state domain.
#[derive(Debug, Clone)]
pub struct VectorFieldModel {
    kind: ModelKind,
    domain: Vec<Interval>,
}

impl VectorFieldModel {
    pub fn goodwin(params: GoodwinParams) -> Result<Self> {
        if let Some((name, v)) = params.fields().into_iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return invalid(format!("goodwin parameter {name} must be positive, got {v}"));
        }
        Ok(VectorFieldModel {
            kind: ModelKind::Goodwin(params),
            domain: vec![Interval::new(0.0, f64::INFINITY); 3],
        })
    }

    pub fn biochemical(params: BiochemicalParams, signal: Signal) -> Result<Self> {
        if let Some((name, v)) = params.fields().into_iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return invalid(format!("biochemical parameter {name} must be positive, got {v}"));
        }
        if !signal.is_nonnegative() {
            return invalid("input signal z(t) must be nonnegative");
        }
        Ok(VectorFieldModel {
            kind: ModelKind::Biochemical { params, signal },
            domain: vec![Interval::new(0.0, f64::INFINITY), Interval::new(0.0, params.s_y)],
        })
    }

    /// `ẋ = A x` with constant `A`.
    pub fn linear(a: DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return invalid("linear model needs a square matrix");
        }
        let n = a.rows();
        let stored = a.clone();
        Ok(VectorFieldModel {
            kind: ModelKind::Linear {
                n,
                matrix: Arc::new(move |_| stored.clone()),
                constant: Some(a),
            },
            domain: vec![Interval::new(f64::NEG_INFINITY, f64::INFINITY); n],
        })
    }

    /// `ẋ = A(t) x` with `A` given as a callback returning `n × n` matrices.
    pub fn linear_time_varying(n: usize, matrix: MatrixFn) -> Result<Self> {
        if n == 0 {
            return invalid("linear model needs n >= 1");
        }
        let a0 = matrix(0.0);
        if a0.rows() != n || a0.cols() != n {
            return invalid("A(t) has the wrong shape");
        }
        Ok(VectorFieldModel {
            kind: ModelKind::Linear {
                n,
                matrix,
                constant: None,
            },
            domain: vec![Interval::new(f64::NEG_INFINITY, f64::INFINITY); n],
        })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::Goodwin(_) => "goodwin",
            ModelKind::Biochemical { .. } => "biochemical",
            ModelKind::Linear { .. } => "linear_tv",
        }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ModelKind::Goodwin(_) => 3,
            ModelKind::Biochemical { .. } => 2,
            ModelKind::Linear { n, .. } => *n,
        }
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    /// True when `F` does not depend on `t`.
    pub fn is_autonomous(&self) -> bool {
        match &self.kind {
            ModelKind::Goodwin(_) => true,
            ModelKind::Biochemical { signal, .. } => signal.amplitude == 0.0 || signal.frequency == 0.0,
            ModelKind::Linear { constant, .. } => constant.is_some(),
        }
    }

    /// The constant system matrix of a time-invariant linear model.
    pub fn constant_matrix(&self) -> Option<&DenseMatrix> {
        match &self.kind {
            ModelKind::Linear { constant, .. } => constant.as_ref(),
            _ => None,
        }
    }

    /// Named scalar parameters, in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match &self.kind {
            ModelKind::Goodwin(p) => p.fields().to_vec(),
            ModelKind::Biochemical { params, signal } => {
                let mut v = params.fields().to_vec();
                v.extend([
                    ("z_offset", signal.offset),
                    ("z_amplitude", signal.amplitude),
                    ("z_frequency", signal.frequency),
                ]);
                v
            }
            ModelKind::Linear { .. } => Vec::new(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(&self.domain).all(|(v, iv)| iv.contains(*v))
    }

    /// Writes `F(x, t)` into `out`.
    pub fn rhs_into(&self, x: &[f64], t: f64, out: &mut [f64]) {
        match &self.kind {
            ModelKind::Goodwin(p) => {
                let (x, y, z) = (x[0], x[1], x[2]);
                out[0] = p.a / (p.k + z) - p.b * x;
                out[1] = p.alpha * x - p.beta * y;
                out[2] = p.gamma * y - p.delta * z / (p.k_m + z);
            }
            ModelKind::Biochemical { params: p, signal } => {
                let (x, y) = (x[0], x[1]);
                let binding = p.k2 * (p.s_y - y) * x;
                out[0] = signal.at(t) - p.delta * x + p.k1 * y - binding;
                out[1] = -p.k1 * y + binding;
            }
            ModelKind::Linear { constant, matrix, .. } => {
                let owned;
                let a = match constant {
                    Some(a) => a,
                    None => {
                        owned = matrix(t);
                        &owned
                    }
                };
                for (i, o) in out.iter_mut().enumerate() {
                    *o = a.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
                }
            }
        }
    }

    pub fn rhs(&self, x: &[f64], t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.rhs_into(x, t, &mut out);
        out
    }

    /// Analytic Jacobian `J_F(x, t)`; fails outside the state domain.
    pub fn jacobian_at(&self, x: &[f64], t: f64) -> Result<DenseMatrix> {
        if x.len() != self.dim() {
            return invalid(format!("state has length {}, model dimension is {}", x.len(), self.dim()));
        }
        if !self.contains(x) {
            return Err(Error::DomainViolation(format!(
                "state {x:?} lies outside the {} domain",
                self.name()
            )));
        }
        Ok(self.jacobian_unchecked(x, t))
    }

    pub(crate) fn jacobian_unchecked(&self, x: &[f64], t: f64) -> DenseMatrix {
        match &self.kind {
            ModelKind::Goodwin(p) => {
                let z = x[2];
                let mut j = DenseMatrix::zeros(3, 3);
                j[(0, 0)] = -p.b;
                j[(0, 2)] = -p.a / ((p.k + z) * (p.k + z));
                j[(1, 0)] = p.alpha;
                j[(1, 1)] = -p.beta;
                j[(2, 1)] = p.gamma;
                j[(2, 2)] = -p.delta * p.k_m / ((p.k_m + z) * (p.k_m + z));
                j
            }
            ModelKind::Biochemical { params: p, .. } => {
                let a = p.k2 * (p.s_y - x[1]);
                let b = p.k1 + p.k2 * x[0];
                let mut j = DenseMatrix::zeros(2, 2);
                j[(0, 0)] = -p.delta - a;
                j[(0, 1)] = b;
                j[(1, 0)] = a;
                j[(1, 1)] = -b;
                j
            }
            ModelKind::Linear { constant, matrix, .. } => match constant {
                Some(a) => a.clone(),
                None => matrix(t),
            },
        }
    }
}

/// Builds a named model, overriding defaults with `params`.
///
/// Goodwin keys: `a, k, b, alpha, beta, gamma, delta, k_m`. Biochemical keys:
/// `delta, k1, k2, s_y` plus the signal keys `z_offset, z_amplitude,
/// z_frequency`. `linear_tv` takes no scalar keys and requires `matrix`.
pub fn make_model(
    name: &str,
    params: &BTreeMap<String, f64>,
    matrix: Option<DenseMatrix>,
) -> Result<VectorFieldModel> {
    let unknown = |key: &str| Error::InvalidArgument(format!("unknown parameter {key:?} for model {name}"));
    match name {
        "goodwin" => {
            let mut p = GoodwinParams::default();
            for (k, v) in params {
                *p.field_mut(k).ok_or_else(|| unknown(k))? = *v;
            }
            VectorFieldModel::goodwin(p)
        }
        "biochemical" => {
            let mut p = BiochemicalParams::default();
            let mut z = Signal::default();
            for (k, v) in params {
                match k.as_str() {
                    "z_offset" => z.offset = *v,
                    "z_amplitude" => z.amplitude = *v,
                    "z_frequency" => z.frequency = *v,
                    _ => *p.field_mut(k).ok_or_else(|| unknown(k))? = *v,
                }
            }
            VectorFieldModel::biochemical(p, z)
        }
        "linear_tv" => {
            if let Some(k) = params.keys().next() {
                return Err(unknown(k));
            }
            match matrix {
                Some(a) => VectorFieldModel::linear(a),
                None => invalid("linear_tv needs a system matrix"),
            }
        }
        other => Err(Error::Unsupported(format!("unknown model {other:?}"))),
    }
}

/// Central finite-difference Jacobian of `F(·, t)`; the independent check
/// on [`VectorFieldModel::jacobian_at`].
pub fn finite_difference_jacobian(model: &VectorFieldModel, x: &[f64], t: f64, step: f64) -> DenseMatrix {
    let n = model.dim();
    let mut j = DenseMatrix::zeros(n, n);
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    for col in 0..n {
        xp[col] = x[col] + step;
        xm[col] = x[col] - step;
        let fp = model.rhs(&xp, t);
        let fm = model.rhs(&xm, t);
        for row in 0..n {
            j[(row, col)] = (fp[row] - fm[row]) / (2.0 * step);
        }
        xp[col] = x[col];
        xm[col] = x[col];
    }
    j
}

/// How states are drawn from the sampling box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case", deny_unknown_fields)]
pub enum SampleStrategy {
    /// `per_axis` evenly spaced values per coordinate, endpoints included.
    Grid { per_axis: usize },
    /// All box corners plus `count` uniform draws from a seeded generator.
    UniformRandom { count: usize, seed: u64 },
}

/// Evenly spaced sample times over `[start, end]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn single(t: f64) -> Self {
        TimeGrid {
            start: t,
            end: t,
            count: 1,
        }
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        if !(self.start.is_finite() && self.end.is_finite()) || self.end < self.start {
            return invalid("time grid needs finite start <= end");
        }
        if self.count == 0 {
            return invalid("time grid needs at least one time");
        }
        if self.count == 1 || self.end == self.start {
            return Ok(if self.end == self.start {
                vec![self.start]
            } else {
                vec![self.start, self.end]
            });
        }
        Ok(linspace(self.start, self.end, self.count))
    }
}

fn linspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![lo];
    }
    (0..k)
        .map(|i| {
            if i + 1 == k {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (k - 1) as f64
            }
        })
        .collect()
}

/// One `(state, time)` point at which a Jacobian is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub state: Vec<f64>,
    pub t: f64,
}

/// Resolves the finite sampling box: the override if given (it must lie in
/// the model domain), otherwise the model domain, which must then be bounded.
pub fn sampling_box(model: &VectorFieldModel, box_override: Option<&[Interval]>) -> Result<Vec<Interval>> {
    match box_override {
        Some(b) => {
            if b.len() != model.dim() {
                return invalid(format!("sampling box has {} axes, model has {}", b.len(), model.dim()));
            }
            for (axis, (iv, dom)) in b.iter().zip(model.domain()).enumerate() {
                if !iv.is_bounded() || iv.lo > iv.hi {
                    return invalid(format!("sampling box axis {axis} must be a finite interval"));
                }
                if iv.lo < dom.lo || iv.hi > dom.hi {
                    return Err(Error::DomainViolation(format!(
                        "sampling box axis {axis} [{}, {}] leaves the model domain [{}, {}]",
                        iv.lo, iv.hi, dom.lo, dom.hi
                    )));
                }
            }
            Ok(b.to_vec())
        }
        None => {
            if let Some(axis) = model.domain().iter().position(|iv| !iv.is_bounded()) {
                return invalid(format!(
                    "axis {axis} of the {} domain is unbounded; a finite sampling box is required",
                    model.name()
                ));
            }
            Ok(model.domain().to_vec())
        }
    }
}

/// Deterministic list of samples covering the box and the time grid.
pub fn sample_domain(
    model: &VectorFieldModel,
    strategy: SampleStrategy,
    box_override: Option<&[Interval]>,
    times: TimeGrid,
) -> Result<Vec<Sample>> {
    let bx = sampling_box(model, box_override)?;
    let times = times.times()?;
    let n = bx.len();

    let states: Vec<Vec<f64>> = match strategy {
        SampleStrategy::Grid { per_axis } => {
            if per_axis < 2 {
                return invalid("grid sampling needs at least 2 points per axis");
            }
            let axes: Vec<Vec<f64>> = bx.iter().map(|iv| linspace(iv.lo, iv.hi, per_axis)).collect();
            cartesian(&axes)
        }
        SampleStrategy::UniformRandom { count, seed } => {
            let corners: Vec<Vec<f64>> = bx.iter().map(|iv| vec![iv.lo, iv.hi]).collect();
            let mut states = cartesian(&corners);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                states.push(
                    (0..n)
                        .map(|i| {
                            let iv = bx[i];
                            if iv.hi > iv.lo {
                                rng.gen_range(iv.lo..=iv.hi)
                            } else {
                                iv.lo
                            }
                        })
                        .collect(),
                );
            }
            states
        }
    };

    Ok(states
        .iter()
        .flat_map(|s| times.iter().map(move |&t| Sample { state: s.clone(), t }))
        .collect())
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}
