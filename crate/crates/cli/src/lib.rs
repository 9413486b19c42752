//! Batch front-end: one JSON scenario config in, reports and CSVs out.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

pub use error::CliError;
pub use pipeline::{Artifacts, Scenario};

pub fn load(path: &Path, seed: Option<u64>) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::config(&path.display().to_string(), e.to_string()))?;
    Scenario::resolve(config::parse(&text)?, seed)
}

/// Output directory: `--out`, else the config's `output`, else `out`.
pub fn output_dir(sc: &Scenario, out: Option<&Path>) -> PathBuf {
    match (out, &sc.output) {
        (Some(o), _) => o.to_path_buf(),
        (None, Some(o)) => PathBuf::from(o),
        (None, None) => PathBuf::from("out"),
    }
}

pub fn run_config(path: &Path, out: Option<&Path>, seed: Option<u64>) -> Result<(PathBuf, Artifacts), CliError> {
    let sc = load(path, seed)?;
    let dir = output_dir(&sc, out);
    let files = pipeline::execute(&sc, &dir)?;
    Ok((dir, files))
}
