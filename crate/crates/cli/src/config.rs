//! Scenario config schema. Every block rejects unknown keys.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer};

use logsync_core::graphs::TopologyKind;
use logsync_core::models::TimeGrid;
use logsync_core::simulate::MeshBoundary;
use logsync_core::Norm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Measure,
    Spectrum,
    Certify,
    SearchWeight,
    Simulate,
    Pde,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Measure => "measure",
            Command::Spectrum => "spectrum",
            Command::Certify => "certify",
            Command::SearchWeight => "search-weight",
            Command::Simulate => "simulate",
            Command::Pde => "pde",
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub command: Command,
    /// Seed for every randomized step; `--seed` overrides it.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub model: Option<ModelBlock>,
    /// Matrix for the `measure` command, as rows.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub graph: Option<TopologyKind>,
    #[serde(default)]
    pub pde: Option<PdeBlock>,
    #[serde(default)]
    pub norm: Option<NormBlock>,
    #[serde(default)]
    pub diffusion: Option<Vec<f64>>,
    /// Explicit shift for `certify` and `search-weight` without a graph.
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub sampler: Option<SamplerBlock>,
    #[serde(default)]
    pub search: Option<SearchBlock>,
    #[serde(default)]
    pub run: Option<RunBlock>,
    /// Output directory; `--out` overrides it.
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// System matrix for `linear_tv`.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeBlock {
    pub length: f64,
    pub mesh: usize,
    pub boundary: MeshBoundary,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormBlock {
    #[serde(deserialize_with = "norm_exponent")]
    pub p: Norm,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

/// Accepts `1`, `2`, `"1"`, `"2"`, `"inf"`.
fn norm_exponent<'de, D: Deserializer<'de>>(de: D) -> Result<Norm, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(u64),
        Text(String),
    }
    let bad = |s: &str| serde::de::Error::custom(format!("norm.p must be 1, 2 or \"inf\", got {s}"));
    match Raw::deserialize(de)? {
        Raw::Num(1) => Ok(Norm::L1),
        Raw::Num(2) => Ok(Norm::L2),
        Raw::Num(n) => Err(bad(&n.to_string())),
        Raw::Text(s) => match s.as_str() {
            "1" => Ok(Norm::L1),
            "2" => Ok(Norm::L2),
            "inf" => Ok(Norm::LInf),
            _ => Err(bad(&format!("{s:?}"))),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyName {
    Grid,
    UniformRandom,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerBlock {
    pub strategy: StrategyName,
    /// Points per axis, for `grid`.
    #[serde(default)]
    pub per_axis: Option<usize>,
    /// Random draws on top of the box corners, for `uniform_random`.
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default, rename = "box")]
    pub bounds: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub times: Option<TimeGrid>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBlock {
    pub rounds: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
}

fn default_restarts() -> usize {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default = "default_slack")]
    pub slack: f64,
    pub initial: InitialSpec,
}

fn default_dt() -> f64 {
    1e-3
}

fn default_stride() -> usize {
    1
}

fn default_slack() -> f64 {
    1e-6
}

/// Initial state of a network or mesh.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    /// The full stacked state.
    Values { values: Vec<f64> },
    /// One state per compartment or mesh point.
    PerCompartment { states: Vec<Vec<f64>> },
    /// Independent uniform draws per compartment and component; needs `seed`.
    UniformRandom {
        #[serde(rename = "box")]
        bounds: Vec<[f64; 2]>,
    },
    /// `mean + amplitude · cos(mode · π · s)` with `s ∈ (0, 1)` the relative
    /// position of the compartment or mesh point.
    Cosine {
        mean: Vec<f64>,
        amplitude: Vec<f64>,
        #[serde(default = "default_mode")]
        mode: u32,
    },
}

fn default_mode() -> u32 {
    1
}

pub fn parse(text: &str) -> Result<ScenarioConfig, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse(r#"{"command": "spectrum", "graph": {"kind": "line", "n": 4}, "colour": 1}"#).unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
        let err = parse(r#"{"command": "spectrum", "graph": {"kind": "line", "n": 4, "m": 2}}"#).unwrap_err();
        assert!(err.to_string().contains('m'), "{err}");
    }

    #[test]
    fn norm_exponent_forms() {
        for (text, want) in [("1", Norm::L1), ("\"2\"", Norm::L2), ("\"inf\"", Norm::LInf)] {
            let nb: NormBlock = serde_json::from_str(&format!(r#"{{"p": {text}}}"#)).unwrap();
            assert_eq!(nb.p, want);
        }
        assert!(serde_json::from_str::<NormBlock>(r#"{"p": 3}"#).is_err());
    }

    #[test]
    fn run_defaults() {
        let r: RunBlock = serde_json::from_str(r#"{"t_end": 1, "initial": {"kind": "values", "values": [0]}}"#).unwrap();
        assert_eq!((r.dt, r.stride, r.slack), (1e-3, 1, 1e-6));
    }
}
