//! Sampled contraction certificates.
//!
//! Every certificate is a sampled supremum `c = max_k M_{p,Q}[J_F(x_k, t_k) − λD]`
//! over a finite sample set. It is a lower bound on the true supremum over
//! the sampling box, which is why each certificate carries the `sampled` caveat.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graphs::{GraphTopology, TopologyKind};
use crate::matrix::DenseMatrix;
use crate::measures::{matrix_measure, Norm, NormSpec};
use crate::models::{
    sample_domain, BiochemicalParams, GoodwinParams, Interval, Sample, SampleStrategy, Signal, TimeGrid,
    VectorFieldModel,
};

/// Diagonal diffusion `D = diag(d)`, `dᵢ ≥ 0` with at least one `dⱼ > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DiffusionSpec {
    d: Vec<f64>,
}

impl DiffusionSpec {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return invalid("diffusion vector must be non-empty");
        }
        if d.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return invalid("diffusion coefficients must be finite and nonnegative");
        }
        if d.iter().all(|v| *v == 0.0) {
            return invalid("at least one diffusion coefficient must be positive");
        }
        Ok(DiffusionSpec { d })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn min(&self) -> f64 {
        self.d.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    pub fn matrix(&self) -> DenseMatrix {
        DenseMatrix::from_diag(&self.d)
    }
}

impl TryFrom<Vec<f64>> for DiffusionSpec {
    type Error = Error;

    fn try_from(d: Vec<f64>) -> Result<Self> {
        DiffusionSpec::new(d)
    }
}

impl From<DiffusionSpec> for Vec<f64> {
    fn from(d: DiffusionSpec) -> Vec<f64> {
        d.d
    }
}

/// Where Jacobians are evaluated: a strategy over a finite box, crossed with
/// a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampler {
    #[serde(flatten)]
    pub strategy: SampleStrategy,
    #[serde(default, rename = "box")]
    pub bounds: Option<Vec<Interval>>,
    #[serde(default = "default_times")]
    pub times: TimeGrid,
}

fn default_times() -> TimeGrid {
    TimeGrid::single(0.0)
}

impl Sampler {
    pub fn grid(per_axis: usize, bounds: Option<Vec<Interval>>) -> Self {
        Sampler {
            strategy: SampleStrategy::Grid { per_axis },
            bounds,
            times: default_times(),
        }
    }

    pub fn with_times(mut self, times: TimeGrid) -> Self {
        self.times = times;
        self
    }

    pub fn samples(&self, model: &VectorFieldModel) -> Result<Vec<Sample>> {
        sample_domain(model, self.strategy, self.bounds.as_deref(), self.times)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Contractive,
    Inconclusive,
}

/// Outcome of a sampled supremum of `M_{p,Q}[J_F − λD]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub c: f64,
    pub norm: NormSpec,
    pub lambda: f64,
    /// `None` when no diffusion shift is applied.
    pub diffusion: Option<DiffusionSpec>,
    pub sample_count: usize,
    pub argmax_state: Vec<f64>,
    pub argmax_time: f64,
    pub verdict: Verdict,
    /// The supremum was taken over samples, not analytically.
    pub sampled: bool,
    /// Which synchronization result the shift comes from, when known.
    pub basis: Option<String>,
}

impl Certificate {
    pub fn is_contractive(&self) -> bool {
        self.verdict == Verdict::Contractive
    }
}

fn shifted_jacobian(
    model: &VectorFieldModel,
    sample: &Sample,
    lambda: f64,
    diffusion: Option<&DiffusionSpec>,
) -> Result<DenseMatrix> {
    let mut j = model.jacobian_at(&sample.state, sample.t)?;
    if let Some(d) = diffusion {
        for (i, di) in d.coefficients().iter().enumerate() {
            j[(i, i)] -= lambda * di;
        }
    }
    Ok(j)
}

fn check_shift(model: &VectorFieldModel, norm: &NormSpec, lambda: f64, diffusion: Option<&DiffusionSpec>) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return invalid(format!("shift lambda must be finite and nonnegative, got {lambda}"));
    }
    if norm.dim() != model.dim() {
        return invalid(format!("norm has dimension {}, model has {}", norm.dim(), model.dim()));
    }
    if let Some(d) = diffusion {
        if d.dim() != model.dim() {
            return invalid(format!("diffusion has dimension {}, model has {}", d.dim(), model.dim()));
        }
    }
    Ok(())
}

/// `max` over `samples` of `M_{p,Q}[J_F(x, t) − λ D]`.
///
/// Samples are evaluated in parallel; the reduction keeps the first index
/// attaining the maximum, so the result does not depend on scheduling.
pub fn sup_measure_over(
    model: &VectorFieldModel,
    norm: &NormSpec,
    lambda: f64,
    diffusion: Option<&DiffusionSpec>,
    samples: &[Sample],
) -> Result<Certificate> {
    check_shift(model, norm, lambda, diffusion)?;
    if samples.is_empty() {
        return invalid("no samples to take a supremum over");
    }
    let values = samples
        .par_iter()
        .map(|s| matrix_measure(&shifted_jacobian(model, s, lambda, diffusion)?, norm))
        .collect::<Result<Vec<f64>>>()?;
    let (best, c) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    Ok(Certificate {
        c,
        norm: norm.clone(),
        lambda,
        diffusion: diffusion.cloned(),
        sample_count: samples.len(),
        argmax_state: samples[best].state.clone(),
        argmax_time: samples[best].t,
        verdict: if c < 0.0 { Verdict::Contractive } else { Verdict::Inconclusive },
        sampled: true,
        basis: None,
    })
}

pub fn sup_measure(
    model: &VectorFieldModel,
    norm: &NormSpec,
    lambda: f64,
    diffusion: Option<&DiffusionSpec>,
    sampler: &Sampler,
) -> Result<Certificate> {
    sup_measure_over(model, norm, lambda, diffusion, &sampler.samples(model)?)
}

/// Shift `λ` and the result it comes from for a `(graph, norm)` pair, or an
/// `Unsupported` error when no result covers the pair.
pub fn sync_shift(graph: &GraphTopology, p: Norm) -> Result<(f64, String)> {
    fn family(kind: &TopologyKind) -> Option<&'static str> {
        match kind {
            TopologyKind::Line { .. } => Some("line"),
            TopologyKind::Complete { .. } => Some("complete"),
            TopologyKind::Star { .. } => Some("star"),
            TopologyKind::Grid { .. } => Some("grid"),
            TopologyKind::Cartesian { factors } => {
                if factors.iter().all(|f| family(f).is_some()) {
                    Some("cartesian")
                } else {
                    None
                }
            }
            TopologyKind::Custom { .. } => None,
        }
    }

    if graph.node_count() == 2 {
        return Ok((
            graph.lambda2_closed_form().or_else(|_| graph.lambda2_numeric())?,
            "two compartments: M[J_F - 2D] in any norm".into(),
        ));
    }
    if let Some(fam) = family(graph.kind()) {
        let lambda = graph.lambda2_closed_form()?;
        let basis = match fam {
            "complete" => "complete graph (K = N I): M[J_F - N D] in any norm",
            "star" => "star graph: M[J_F - D] in any norm, affine-in-t envelope",
            "line" => "line graph: M_{p,Q}[J_F - 4 sin^2(pi/2N) D] with Perron edge weights",
            "grid" => "grid graph: M_{p,Q}[J_F - lambda2 D], affine-in-t envelope",
            _ => "cartesian product: M[J_F - min lambda2(G_k) D], polynomial envelope",
        };
        return Ok((lambda, basis.into()));
    }
    match p {
        Norm::L2 => {
            let basis = if graph.is_tree() {
                "tree: M_{2,Q}[J_F - lambda2 D] on edge differences"
            } else {
                "arbitrary graph: M_{2,Q}[J_F - lambda2 D] on deviations from the mean"
            };
            Ok((graph.lambda2_numeric()?, basis.into()))
        }
        _ => Err(Error::Unsupported(format!(
            "no L^{} synchronization result for this graph: weighted L^p results cover line, complete, \
             star and Cartesian products of them; arbitrary graphs and trees need p = 2",
            p.label()
        ))),
    }
}

/// Certificate for the synchronization condition of a `G`-compartment system.
pub fn check_sync_condition(
    model: &VectorFieldModel,
    graph: &GraphTopology,
    diffusion: &DiffusionSpec,
    norm: &NormSpec,
    sampler: &Sampler,
) -> Result<Certificate> {
    let (lambda, basis) = sync_shift(graph, norm.p())?;
    let mut cert = sup_measure(model, norm, lambda, Some(diffusion), sampler)?;
    cert.basis = Some(basis);
    Ok(cert)
}

/// Budget and seed for [`search_weight`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBudget {
    /// Maximum number of descent rounds, summed over all restarts.
    pub rounds: usize,
    /// Random restarts from the incumbent after the finest step size stalls.
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    pub seed: u64,
}

fn default_restarts() -> usize {
    4
}

const STEP_START: f64 = 2.0;
const STEP_FLOOR: f64 = 1.01;

/// Searches positive diagonal weights `Q` (first entry pinned to 1) that
/// minimise the sampled certificate `c`.
///
/// Each round evaluates every single-coordinate move `qᵢ ↦ qᵢ·f^{±1}` in
/// parallel and keeps the best strict improvement; when none improves, the
/// factor shrinks from 2 towards 1.01. After the finest factor stalls, the
/// incumbent is perturbed with seeded log-uniform jitter and the descent
/// restarts. The identity weight is the starting point, so the result is
/// never worse than it.
pub fn search_weight(
    model: &VectorFieldModel,
    p: Norm,
    lambda: f64,
    diffusion: Option<&DiffusionSpec>,
    sampler: &Sampler,
    budget: SearchBudget,
) -> Result<(NormSpec, Certificate)> {
    if budget.rounds == 0 {
        return invalid("search budget must allow at least one round");
    }
    let n = model.dim();
    let samples = sampler.samples(model)?;
    let eval = |log_q: &[f64]| -> Result<Certificate> {
        let spec = NormSpec::new(p, log_q.iter().map(|v| v.exp()).collect())?;
        sup_measure_over(model, &spec, lambda, diffusion, &samples)
    };

    let mut best_log = vec![0.0; n];
    let mut best = eval(&best_log)?;
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut rounds = 0;
    let mut start_log = best_log.clone();
    let mut start = best.clone();

    for restart in 0..=budget.restarts {
        if restart > 0 {
            start_log = best_log.clone();
            for v in start_log.iter_mut().skip(1) {
                *v += rng.gen_range(-1.0..=1.0) * STEP_START.ln();
            }
            start = eval(&start_log)?;
        }
        let (log_q, cert) = descend(&eval, start_log.clone(), start.clone(), &mut rounds, budget.rounds)?;
        if cert.c < best.c {
            best_log = log_q;
            best = cert;
        }
        if rounds >= budget.rounds || n == 1 {
            break;
        }
    }
    Ok((best.norm.clone(), best))
}

fn descend(
    eval: &(dyn Fn(&[f64]) -> Result<Certificate> + Sync),
    mut log_q: Vec<f64>,
    mut cert: Certificate,
    rounds: &mut usize,
    max_rounds: usize,
) -> Result<(Vec<f64>, Certificate)> {
    let n = log_q.len();
    let mut step = STEP_START.ln();
    while *rounds < max_rounds && step >= STEP_FLOOR.ln() * 0.999 {
        *rounds += 1;
        let moves: Vec<(usize, f64)> = (1..n).flat_map(|i| [(i, step), (i, -step)]).collect();
        let results = moves
            .par_iter()
            .map(|&(i, s)| {
                let mut cand = log_q.clone();
                cand[i] += s;
                eval(&cand).map(|c| (cand, c))
            })
            .collect::<Result<Vec<_>>>()?;
        let improvement = results
            .into_iter()
            .filter(|(_, c)| c.c < cert.c)
            .fold(None::<(Vec<f64>, Certificate)>, |acc, r| match acc {
                Some(a) if a.1.c <= r.1.c => Some(a),
                _ => Some(r),
            });
        match improvement {
            Some((cand, c)) => {
                log_q = cand;
                cert = c;
            }
            None => step *= 0.5,
        }
    }
    Ok((log_q, cert))
}

/// Result of comparing against the Arcak-type Goodwin condition
/// `αγa / (k (b + λd₁)(β + λd₂) λd₃) < 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ArcakOutcome {
    Holds { lhs: f64 },
    Fails { lhs: f64 },
    /// `d₃ = 0`: the condition has a zero denominator and says nothing.
    NotApplicable,
}

pub fn arcak_goodwin_inequality(params: &GoodwinParams, lambda: f64, d1: f64, d2: f64, d3: f64) -> ArcakOutcome {
    let denom = params.k * (params.b + lambda * d1) * (params.beta + lambda * d2) * lambda * d3;
    if d3 == 0.0 || denom == 0.0 {
        return ArcakOutcome::NotApplicable;
    }
    let lhs = params.alpha * params.gamma * params.a / denom;
    if lhs < 4.0 {
        ArcakOutcome::Holds { lhs }
    } else {
        ArcakOutcome::Fails { lhs }
    }
}

/// Result of the large-diffusion condition `sup ‖J_F‖ < (π²/L²) min dᵢ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OthmerOutcome {
    pub holds: bool,
    /// Sampled `sup ‖J_F‖`; `None` when `min dᵢ = 0` short-circuits.
    pub sup_norm: Option<f64>,
    pub threshold: f64,
}

pub fn othmer_condition(
    model: &VectorFieldModel,
    sampler: &Sampler,
    length: f64,
    diffusion: &DiffusionSpec,
    norm: &NormSpec,
) -> Result<OthmerOutcome> {
    if !(length > 0.0) {
        return invalid("domain length must be positive");
    }
    let threshold = PI * PI / (length * length) * diffusion.min();
    if diffusion.min() == 0.0 {
        return Ok(OthmerOutcome {
            holds: false,
            sup_norm: None,
            threshold,
        });
    }
    let samples = sampler.samples(model)?;
    let norms = samples
        .par_iter()
        .map(|s| crate::measures::induced_matrix_norm(&model.jacobian_at(&s.state, s.t)?, norm))
        .collect::<Result<Vec<f64>>>()?;
    let sup = norms.into_iter().fold(f64::NEG_INFINITY, f64::max);
    Ok(OthmerOutcome {
        holds: sup < threshold,
        sup_norm: Some(sup),
        threshold,
    })
}

/// A state of the reduced enzyme model where `M_{2,Q}[J_F − λD] > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct M2Witness {
    pub state: Vec<f64>,
    /// `b = k₁ + k₂ x` at the witness.
    pub b: f64,
    pub measure: f64,
}

/// Growth factor of the `b` scan.
const WITNESS_GROWTH: f64 = 1.25;
const WITNESS_B_CAP: f64 = 1e12;

/// Scans `y = S_Y` (so `a = 0`) and geometrically increasing
/// `b = k₁ + k₂ x` until the `L²` measure weighted by `Q = diag(1, q)` turns
/// positive. Reaching the scan cap is reported as `SearchExhausted`.
pub fn m2_nonnegativity_witness(
    q: f64,
    lambda: f64,
    diffusion: &DiffusionSpec,
    params: &BiochemicalParams,
) -> Result<M2Witness> {
    if !(q > 0.0 && q.is_finite()) {
        return invalid("weight q must be positive");
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return invalid("lambda must be positive");
    }
    let model = VectorFieldModel::biochemical(*params, Signal::constant(0.0))?;
    let norm = NormSpec::new(Norm::L2, vec![1.0, q])?;
    let mut b = params.k1;
    while b <= WITNESS_B_CAP {
        let x = (b - params.k1) / params.k2;
        let sample = Sample {
            state: vec![x, params.s_y],
            t: 0.0,
        };
        let measure = matrix_measure(&shifted_jacobian(&model, &sample, lambda, Some(diffusion))?, &norm)?;
        if measure > 0.0 {
            return Ok(M2Witness {
                state: sample.state,
                b,
                measure,
            });
        }
        b *= WITNESS_GROWTH;
    }
    Err(Error::SearchExhausted(format!(
        "no state with a positive L2 measure for q = {q}, lambda = {lambda} up to b = {WITNESS_B_CAP:e}"
    )))
}

/// Shift of the `N`-point Neumann mesh on `(0, L)`: `4 ((N+1)/L)² sin²(π/2N)`.
pub fn discrete_neumann_shift(n: usize, length: f64) -> f64 {
    let s = (PI / (2.0 * n as f64)).sin();
    4.0 * ((n as f64 + 1.0) / length).powi(2) * s * s
}

/// `c_N` for each mesh size together with the continuum value `c_∞`
/// (shift `π²/L²`).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizationLimit {
    pub c_inf: f64,
    pub c_n: Vec<(usize, f64)>,
}

impl DiscretizationLimit {
    pub fn gaps(&self) -> Vec<(usize, f64)> {
        self.c_n.iter().map(|&(n, c)| (n, (c - self.c_inf).abs())).collect()
    }
}

pub fn discretization_limit(
    model: &VectorFieldModel,
    norm: &NormSpec,
    diffusion: &DiffusionSpec,
    sampler: &Sampler,
    length: f64,
    meshes: &[usize],
) -> Result<DiscretizationLimit> {
    if !(length > 0.0) {
        return invalid("domain length must be positive");
    }
    let samples = sampler.samples(model)?;
    let c_inf = sup_measure_over(model, norm, PI * PI / (length * length), Some(diffusion), &samples)?.c;
    let c_n = meshes
        .iter()
        .map(|&n| {
            if n < 2 {
                return invalid("mesh needs at least 2 points");
            }
            let shift = discrete_neumann_shift(n, length);
            Ok((n, sup_measure_over(model, norm, shift, Some(diffusion), &samples)?.c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscretizationLimit { c_inf, c_n })
}
