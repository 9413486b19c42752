use crate::error::{invalid, Result};
use crate::measures::{vector_norm, NormSpec};

use super::series::Series;

/// Envelope shapes of the decay estimates.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundForm {
    /// `e^{ct}`
    Exponential { c: f64 },
    /// `(1 + αt) e^{ct}`
    StarAffine { c: f64, alpha: f64 },
    /// `(α + βt) e^{ct}`
    GridAffine { c: f64, alpha: f64, beta: f64 },
}

impl BoundForm {
    pub fn c(&self) -> f64 {
        match *self {
            BoundForm::Exponential { c } | BoundForm::StarAffine { c, .. } | BoundForm::GridAffine { c, .. } => c,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BoundForm::Exponential { .. } => "exponential",
            BoundForm::StarAffine { .. } => "star_affine",
            BoundForm::GridAffine { .. } => "grid_affine",
        }
    }

    pub fn parameters(&self) -> Vec<(&'static str, f64)> {
        match *self {
            BoundForm::Exponential { .. } => vec![],
            BoundForm::StarAffine { alpha, .. } => vec![("alpha", alpha)],
            BoundForm::GridAffine { alpha, beta, .. } => vec![("alpha", alpha), ("beta", beta)],
        }
    }

    pub fn envelope(&self, t: f64) -> f64 {
        match *self {
            BoundForm::Exponential { c } => (c * t).exp(),
            BoundForm::StarAffine { c, alpha } => (1.0 + alpha * t) * (c * t).exp(),
            BoundForm::GridAffine { c, alpha, beta } => (alpha + beta * t) * (c * t).exp(),
        }
    }
}

/// Outcome of checking `s(t) ≤ envelope(t) · s(0) · (1 + slack)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound: BoundForm,
    pub pass: bool,
    /// `max_k s(t_k) / (envelope(t_k) s(0))`.
    pub max_ratio: f64,
    pub argmax_t: f64,
    pub slack: f64,
    pub samples: usize,
}

impl BoundReport {
    pub fn kind(&self) -> &'static str {
        self.bound.kind()
    }

    pub fn c(&self) -> f64 {
        self.bound.c()
    }
}

pub fn verify_bound(series: &Series, bound: &BoundForm, slack: f64) -> Result<BoundReport> {
    if series.is_empty() {
        return invalid("cannot verify a bound on an empty series");
    }
    if !(slack >= 0.0 && slack.is_finite()) {
        return invalid(format!("slack must be nonnegative, got {slack}"));
    }
    let s0 = series.values[0];
    let t0 = series.times[0];
    if s0 <= 0.0 {
        return Ok(BoundReport {
            bound: bound.clone(),
            pass: true,
            max_ratio: 0.0,
            argmax_t: t0,
            slack,
            samples: series.len(),
        });
    }
    let mut max_ratio = f64::NEG_INFINITY;
    let mut argmax_t = t0;
    for (&t, &s) in series.times.iter().zip(&series.values) {
        let r = s / (bound.envelope(t - t0) * s0);
        if r > max_ratio || r.is_nan() {
            max_ratio = r;
            argmax_t = t;
            if r.is_nan() {
                break;
            }
        }
    }
    Ok(BoundReport {
        bound: bound.clone(),
        pass: max_ratio <= 1.0 + slack,
        max_ratio,
        argmax_t,
        slack,
        samples: series.len(),
    })
}

/// Smallest `β ≥ 0` with `α = 1` such that `s(t) ≤ (1 + βt) e^{ct} s(0)` on the
/// stored samples.
pub fn fit_grid_bound(series: &Series, c: f64) -> Result<BoundForm> {
    if series.is_empty() {
        return invalid("cannot fit a bound to an empty series");
    }
    let s0 = series.values[0];
    let t0 = series.times[0];
    let mut beta: f64 = 0.0;
    if s0 > 0.0 {
        for (&t, &s) in series.times.iter().zip(&series.values).skip(1) {
            let dt = t - t0;
            if dt > 0.0 {
                let r = s / ((c * dt).exp() * s0);
                beta = beta.max((r - 1.0) / dt);
            }
        }
    }
    Ok(BoundForm::GridAffine { c, alpha: 1.0, beta })
}

/// `αᵢ = Σ_{j ≠ i, hub} ‖xⱼ(0) − xᵢ(0)‖` for spoke `i` of a star.
pub fn star_alpha(x0: &[f64], compartments: usize, i: usize, hub: usize, norm: &NormSpec) -> Result<f64> {
    let n = norm.dim();
    if x0.len() != n * compartments {
        return invalid(format!("state has length {}, expected {}", x0.len(), n * compartments));
    }
    if i >= compartments || hub >= compartments || i == hub {
        return invalid("spoke and hub must be distinct compartments");
    }
    let xi = &x0[i * n..(i + 1) * n];
    let mut alpha = 0.0;
    for j in (0..compartments).filter(|&j| j != i && j != hub) {
        let d: Vec<f64> = x0[j * n..(j + 1) * n].iter().zip(xi).map(|(a, b)| a - b).collect();
        alpha += vector_norm(&d, norm)?;
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Norm;

    fn series(f: impl Fn(f64) -> f64) -> Series {
        let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.05).collect();
        let values = times.iter().map(|&t| f(t)).collect();
        Series::new(times, values).unwrap()
    }

    #[test]
    fn exact_exponential_passes_with_unit_ratio() {
        let r = verify_bound(&series(|t| (-t).exp()), &BoundForm::Exponential { c: -1.0 }, 0.0).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_ratio, 1.0);
    }

    #[test]
    fn slower_decay_fails_at_first_positive_time() {
        let r = verify_bound(&series(|t| (-0.5 * t).exp()), &BoundForm::Exponential { c: -1.0 }, 1e-6).unwrap();
        assert!(!r.pass);
        assert!(r.max_ratio > 1.0);
        let first = verify_bound(
            &Series::new(vec![0.0, 0.05], vec![1.0, (-0.025f64).exp()]).unwrap(),
            &BoundForm::Exponential { c: -1.0 },
            1e-6,
        )
        .unwrap();
        assert!(!first.pass);
        assert_eq!(first.argmax_t, 0.05);
    }

    #[test]
    fn zero_start_is_vacuous_and_empty_is_error() {
        let r = verify_bound(&series(|_| 0.0), &BoundForm::Exponential { c: -1.0 }, 0.0).unwrap();
        assert!(r.pass);
        assert!(verify_bound(&Series::new(vec![], vec![]).unwrap(), &BoundForm::Exponential { c: 0.0 }, 0.0).is_err());
    }

    #[test]
    fn envelopes_start_at_least_one() {
        assert_eq!(BoundForm::StarAffine { c: -2.0, alpha: 3.0 }.envelope(0.0), 1.0);
        assert_eq!(BoundForm::GridAffine { c: -2.0, alpha: 1.5, beta: 3.0 }.envelope(0.0), 1.5);
    }

    #[test]
    fn fitted_grid_bound_holds() {
        let s = series(|t| (1.0 + 2.0 * t) * (-t).exp());
        let b = fit_grid_bound(&s, -1.0).unwrap();
        match b {
            BoundForm::GridAffine { alpha, beta, .. } => {
                assert_eq!(alpha, 1.0);
                assert!((beta - 2.0).abs() < 1e-9);
            }
            _ => unreachable!(),
        }
        assert!(verify_bound(&s, &b, 1e-12).unwrap().pass);
    }

    #[test]
    fn star_alpha_sums_other_spokes() {
        let x0 = [0.0, 1.0, 4.0, 10.0];
        let a = star_alpha(&x0, 4, 0, 3, &NormSpec::unweighted(Norm::L1, 1)).unwrap();
        assert_eq!(a, 5.0);
    }
}
