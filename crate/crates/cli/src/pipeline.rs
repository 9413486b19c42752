//! Config resolution and command execution.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use logsync_core::certify::{
    check_sync_condition, search_weight, sup_measure, sync_shift, Certificate, DiffusionSpec, Sampler, SearchBudget,
};
use logsync_core::graphs::{line_edge_weights, numeric_spectrum, GraphTopology, TopologyKind};
use logsync_core::measures::{induced_matrix_norm, matrix_measure};
use logsync_core::models::{make_model, Interval, SampleStrategy, TimeGrid, VectorFieldModel};
use logsync_core::simulate::{
    assemble_network, deviation_series, discretize_pde_1d, fit_grid_bound, integrate_rk4, pair_series,
    sine_weighted_norm_series, stacked_edge_series, star_alpha, uncoupled, verify_bound, weighted_gradient_series,
    write_series_csv, write_trajectory_csv, BoundForm, MeshBoundary, NetworkSystem, Series, Trajectory,
};
use logsync_core::{DenseMatrix, Error as CoreError, Norm, NormSpec};

use crate::config::{Command, InitialSpec, PdeBlock, RunBlock, ScenarioConfig, StrategyName};
use crate::error::CliError;
use crate::report::{format_vec, render_bound, render_certificate};

/// A config with every name resolved and every block validated.
pub struct Scenario {
    pub command: Command,
    pub seed: Option<u64>,
    pub output: Option<String>,
    model: Option<VectorFieldModel>,
    matrix: Option<DenseMatrix>,
    graph: Option<GraphTopology>,
    pde: Option<PdeBlock>,
    norm: Option<NormSpec>,
    norm_p: Option<Norm>,
    diffusion: Option<DiffusionSpec>,
    lambda: Option<f64>,
    sampler: Option<Sampler>,
    search: Option<SearchBudget>,
    run: Option<RunBlock>,
}

fn config_err(key: &str) -> impl Fn(CoreError) -> CliError + '_ {
    move |e| CliError::config(key, e.to_string())
}

fn required<'a, T>(value: &'a Option<T>, key: &str, command: Command) -> Result<&'a T, CliError> {
    value
        .as_ref()
        .ok_or_else(|| CliError::config(key, format!("required by command {command}")))
}

fn unused<T>(value: &Option<T>, key: &str, command: Command) -> Result<(), CliError> {
    match value {
        Some(_) => Err(CliError::config(key, format!("not used by command {command}"))),
        None => Ok(()),
    }
}

fn rows_to_matrix(rows: &[Vec<f64>], key: &str) -> Result<DenseMatrix, CliError> {
    DenseMatrix::from_rows(rows).map_err(config_err(key))
}

fn intervals(b: &[[f64; 2]]) -> Vec<Interval> {
    b.iter().map(|[lo, hi]| Interval::new(*lo, *hi)).collect()
}

impl Scenario {
    /// Resolves and validates `cfg`; `seed` overrides the config seed.
    pub fn resolve(cfg: ScenarioConfig, seed: Option<u64>) -> Result<Scenario, CliError> {
        let command = cfg.command;
        let seed = seed.or(cfg.seed);

        let model = match &cfg.model {
            Some(m) => {
                let matrix = m.matrix.as_deref().map(|r| rows_to_matrix(r, "model.matrix")).transpose()?;
                let built = make_model(&m.name, &m.params, matrix).map_err(|e| match e {
                    CoreError::Unsupported(_) => CliError::config("model.name", e.to_string()),
                    _ => CliError::config("model.params", e.to_string()),
                })?;
                Some(built)
            }
            None => None,
        };
        let dim = model.as_ref().map(|m| m.dim());

        let matrix = cfg.matrix.as_deref().map(|r| rows_to_matrix(r, "matrix")).transpose()?;
        if let Some(m) = &matrix {
            if !m.is_square() {
                return Err(CliError::config("matrix", "must be square"));
            }
        }
        let graph = cfg
            .graph
            .clone()
            .map(|k| GraphTopology::new(k).map_err(config_err("graph")))
            .transpose()?;

        let norm_p = cfg.norm.as_ref().map(|n| n.p);
        let norm_dim = dim.or(matrix.as_ref().map(|m| m.rows()));
        let norm = match (&cfg.norm, norm_dim) {
            (Some(nb), Some(n)) => Some(match &nb.weights {
                Some(w) => {
                    if w.len() != n {
                        return Err(CliError::config("norm.weights", format!("expected {n} weights, got {}", w.len())));
                    }
                    NormSpec::new(nb.p, w.clone()).map_err(config_err("norm.weights"))?
                }
                None => NormSpec::unweighted(nb.p, n),
            }),
            _ => None,
        };

        let diffusion = cfg
            .diffusion
            .clone()
            .map(|d| DiffusionSpec::new(d).map_err(config_err("diffusion")))
            .transpose()?;
        if let (Some(d), Some(n)) = (&diffusion, dim) {
            if d.dim() != n {
                return Err(CliError::config("diffusion", format!("expected {n} coefficients, got {}", d.dim())));
            }
        }

        let sampler = match &cfg.sampler {
            Some(sb) => {
                let strategy = match sb.strategy {
                    StrategyName::Grid => {
                        if sb.count.is_some() {
                            return Err(CliError::config("sampler.count", "only used by uniform_random"));
                        }
                        SampleStrategy::Grid {
                            per_axis: sb.per_axis.ok_or_else(|| CliError::config("sampler.per_axis", "required by grid"))?,
                        }
                    }
                    StrategyName::UniformRandom => {
                        if sb.per_axis.is_some() {
                            return Err(CliError::config("sampler.per_axis", "only used by grid"));
                        }
                        SampleStrategy::UniformRandom {
                            count: sb.count.ok_or_else(|| CliError::config("sampler.count", "required by uniform_random"))?,
                            seed: seed.ok_or_else(|| CliError::config("seed", "required by the uniform_random sampler"))?,
                        }
                    }
                };
                let s = Sampler {
                    strategy,
                    bounds: sb.bounds.as_deref().map(intervals),
                    times: sb.times.unwrap_or(TimeGrid::single(0.0)),
                };
                if let Some(m) = &model {
                    s.samples(m).map_err(config_err("sampler"))?;
                }
                Some(s)
            }
            None => None,
        };

        let search = match (&cfg.search, command) {
            (Some(sb), Command::SearchWeight) => Some(SearchBudget {
                rounds: sb.rounds,
                restarts: sb.restarts,
                seed: seed.ok_or_else(|| CliError::config("seed", "required by search-weight"))?,
            }),
            (Some(_), _) => return Err(CliError::config("search", format!("not used by command {command}"))),
            (None, _) => None,
        };

        let sc = Scenario {
            command,
            seed,
            output: cfg.output.clone(),
            model,
            matrix,
            graph,
            pde: cfg.pde,
            norm,
            norm_p,
            diffusion,
            lambda: cfg.lambda,
            sampler,
            search,
            run: cfg.run.clone(),
        };
        sc.check_command(&cfg)?;
        Ok(sc)
    }

    fn check_command(&self, cfg: &ScenarioConfig) -> Result<(), CliError> {
        let c = self.command;
        match c {
            Command::Measure => {
                required(&self.matrix, "matrix", c)?;
                unused(&cfg.model, "model", c)?;
                unused(&cfg.graph, "graph", c)?;
                unused(&cfg.pde, "pde", c)?;
                unused(&cfg.sampler, "sampler", c)?;
                unused(&cfg.run, "run", c)?;
            }
            Command::Spectrum => {
                required(&self.graph, "graph", c)?;
                unused(&cfg.model, "model", c)?;
                unused(&cfg.matrix, "matrix", c)?;
                unused(&cfg.pde, "pde", c)?;
                unused(&cfg.sampler, "sampler", c)?;
                unused(&cfg.run, "run", c)?;
            }
            Command::Certify | Command::SearchWeight => {
                required(&self.model, "model", c)?;
                required(&self.norm_p, "norm", c)?;
                required(&self.sampler, "sampler", c)?;
                unused(&cfg.matrix, "matrix", c)?;
                unused(&cfg.pde, "pde", c)?;
                unused(&cfg.run, "run", c)?;
                if c == Command::SearchWeight {
                    required(&self.search, "search", c)?;
                    if cfg.norm.as_ref().is_some_and(|n| n.weights.is_some()) {
                        return Err(CliError::config("norm.weights", "search-weight chooses the weights"));
                    }
                }
                self.shift()?;
            }
            Command::Simulate => {
                required(&self.model, "model", c)?;
                required(&self.graph, "graph", c)?;
                required(&self.norm, "norm", c)?;
                let run = required(&self.run, "run", c)?;
                unused(&cfg.matrix, "matrix", c)?;
                unused(&cfg.pde, "pde", c)?;
                unused(&cfg.lambda, "lambda", c)?;
                if self.sampler.is_some() {
                    required(&self.diffusion, "diffusion", c)?;
                    self.shift()?;
                }
                self.initial_state(run, &self.network()?)?;
            }
            Command::Pde => {
                required(&self.model, "model", c)?;
                let pde = required(&self.pde, "pde", c)?;
                required(&self.diffusion, "diffusion", c)?;
                required(&self.norm, "norm", c)?;
                let run = required(&self.run, "run", c)?;
                unused(&cfg.matrix, "matrix", c)?;
                unused(&cfg.graph, "graph", c)?;
                unused(&cfg.lambda, "lambda", c)?;
                if pde.boundary == MeshBoundary::Neumann && self.norm_p == Some(Norm::LInf) {
                    return Err(CliError::config("norm.p", "the Neumann mesh results cover p = 1 and p = 2"));
                }
                self.initial_state(run, &self.mesh()?)?;
            }
        }
        Ok(())
    }

    /// `(λ, basis)` for certify, search-weight and network simulations.
    fn shift(&self) -> Result<(f64, Option<String>), CliError> {
        match (&self.graph, self.lambda) {
            (Some(_), Some(_)) => Err(CliError::config("lambda", "give either a graph or an explicit lambda")),
            (Some(g), None) => {
                let (lambda, basis) = sync_shift(g, self.norm_p.unwrap_or(Norm::L1)).map_err(config_err("graph"))?;
                if self.diffusion.is_none() {
                    return Err(CliError::config("diffusion", "required with a graph"));
                }
                Ok((lambda, Some(basis)))
            }
            (None, Some(l)) => {
                if !(l >= 0.0 && l.is_finite()) {
                    return Err(CliError::config("lambda", "must be a nonnegative number"));
                }
                if l > 0.0 && self.diffusion.is_none() {
                    return Err(CliError::config("diffusion", "required when lambda > 0"));
                }
                Ok((l, None))
            }
            (None, None) => Ok((0.0, None)),
        }
    }

    fn network(&self) -> Result<NetworkSystem, CliError> {
        let (model, graph) = (self.model.as_ref().unwrap(), self.graph.as_ref().unwrap());
        match &self.diffusion {
            Some(d) => assemble_network(model, graph, d).map_err(config_err("diffusion")),
            None => uncoupled(model, graph.node_count()).map_err(config_err("graph")),
        }
    }

    fn mesh(&self) -> Result<NetworkSystem, CliError> {
        let p = self.pde.unwrap();
        discretize_pde_1d(self.model.as_ref().unwrap(), self.diffusion.as_ref().unwrap(), p.length, p.mesh, p.boundary)
            .map_err(config_err("pde"))
    }

    fn initial_state(&self, run: &RunBlock, sys: &NetworkSystem) -> Result<Vec<f64>, CliError> {
        let n = sys.state_dim();
        let count = sys.compartments();
        let key = "run.initial";
        let x = match &run.initial {
            InitialSpec::Values { values } => values.clone(),
            InitialSpec::PerCompartment { states } => {
                if states.len() != count || states.iter().any(|s| s.len() != n) {
                    return Err(CliError::config(key, format!("expected {count} states of length {n}")));
                }
                states.concat()
            }
            InitialSpec::UniformRandom { bounds } => {
                if bounds.len() != n || bounds.iter().any(|[lo, hi]| !(lo <= hi && lo.is_finite() && hi.is_finite())) {
                    return Err(CliError::config(key, format!("box needs {n} finite intervals")));
                }
                let seed = self.seed.ok_or_else(|| CliError::config("seed", "required by a random initial state"))?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..count * n)
                    .map(|k| {
                        let [lo, hi] = bounds[k % n];
                        if lo == hi {
                            lo
                        } else {
                            rng.gen_range(lo..hi)
                        }
                    })
                    .collect()
            }
            InitialSpec::Cosine { mean, amplitude, mode } => {
                if mean.len() != n || amplitude.len() != n {
                    return Err(CliError::config(key, format!("mean and amplitude need {n} entries")));
                }
                let rel: Vec<f64> = match (sys.positions(), sys.length()) {
                    (Some(pos), Some(l)) => pos.iter().map(|w| w / l).collect(),
                    _ => (0..count).map(|i| (i as f64 + 0.5) / count as f64).collect(),
                };
                rel.iter()
                    .flat_map(|s| {
                        let c = (*mode as f64 * PI * s).cos();
                        mean.iter().zip(amplitude).map(move |(m, a)| m + a * c)
                    })
                    .collect()
            }
        };
        if x.len() != count * n {
            return Err(CliError::config(key, format!("state has length {}, expected {}", x.len(), count * n)));
        }
        if let Some(bad) = x.chunks_exact(n).find(|xi| !sys.model().contains(xi)) {
            return Err(CliError::config(key, format!("state {} leaves the model domain", format_vec(bad))));
        }
        Ok(x)
    }
}

/// Files written by a run, relative to the output directory.
pub type Artifacts = Vec<PathBuf>;

struct Writer<'a> {
    dir: &'a Path,
    written: Artifacts,
}

impl Writer<'_> {
    fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        fs::write(self.dir.join(name), body).map_err(|e| CliError::io(name, e))?;
        self.written.push(name.into());
        Ok(())
    }

    fn csv(&mut self, name: &str, f: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<(), CliError> {
        let file = fs::File::create(self.dir.join(name)).map_err(|e| CliError::io(name, e))?;
        let mut w = BufWriter::new(file);
        f(&mut w).and_then(|_| std::io::Write::flush(&mut w)).map_err(|e| CliError::io(name, e))?;
        self.written.push(name.into());
        Ok(())
    }

    fn series(&mut self, name: &str, s: &Series) -> Result<(), CliError> {
        self.csv(name, |w| write_series_csv(w, s))
    }

    fn trajectory(&mut self, traj: &Trajectory) -> Result<(), CliError> {
        self.csv("trajectory.csv", |w| write_trajectory_csv(w, traj))
    }
}

fn runtime(e: CoreError) -> CliError {
    CliError::Runtime(e.to_string())
}

fn header(sc: &Scenario) -> String {
    let mut s = format!("command: {}\n", sc.command);
    if let Some(m) = &sc.model {
        let _ = writeln!(s, "model: {}", m.name());
        for (k, v) in m.params() {
            let _ = writeln!(s, "  {k}: {v}");
        }
    }
    if let Some(g) = &sc.graph {
        let _ = writeln!(s, "graph: {} nodes, {} edges", g.node_count(), g.edge_count());
    }
    if let Some(p) = &sc.pde {
        let bc = match p.boundary {
            MeshBoundary::Neumann => "neumann",
            MeshBoundary::Dirichlet => "dirichlet",
        };
        let _ = writeln!(s, "pde: length {}, mesh {}, boundary {bc}", p.length, p.mesh);
    }
    if let Some(seed) = sc.seed {
        let _ = writeln!(s, "seed: {seed}");
    }
    s.push('\n');
    s
}

/// Executes `sc`, writing its artifacts into `dir`.
pub fn execute(sc: &Scenario, dir: &Path) -> Result<Artifacts, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(&dir.display().to_string(), e))?;
    let mut w = Writer { dir, written: Vec::new() };
    match sc.command {
        Command::Measure => run_measure(sc, &mut w)?,
        Command::Spectrum => run_spectrum(sc, &mut w)?,
        Command::Certify => run_certify(sc, &mut w)?,
        Command::SearchWeight => run_search(sc, &mut w)?,
        Command::Simulate => run_simulate(sc, &mut w)?,
        Command::Pde => run_pde(sc, &mut w)?,
    }
    Ok(w.written)
}

fn run_measure(sc: &Scenario, w: &mut Writer) -> Result<(), CliError> {
    let a = sc.matrix.as_ref().unwrap();
    let specs: Vec<NormSpec> = match &sc.norm {
        Some(n) => vec![n.clone()],
        None => Norm::ALL.iter().map(|&p| NormSpec::unweighted(p, a.rows())).collect(),
    };
    let mut s = header(sc);
    for r in 0..a.rows() {
        let _ = writeln!(s, "row {r}: {}", format_vec(a.row(r)));
    }
    for spec in &specs {
        let mu = matrix_measure(a, spec).map_err(runtime)?;
        let norm = induced_matrix_norm(a, spec).map_err(runtime)?;
        let _ = writeln!(
            s,
            "p = {}, Q = diag{}: measure = {mu}, induced norm = {norm}",
            spec.p().label(),
            format_vec(spec.weights())
        );
    }
    w.text("measures.txt", &s)
}

fn run_spectrum(sc: &Scenario, w: &mut Writer) -> Result<(), CliError> {
    let g = sc.graph.as_ref().unwrap();
    let mut s = header(sc);
    let values = numeric_spectrum(g.laplacian()).map_err(runtime)?;
    let _ = writeln!(s, "laplacian eigenvalues: {}", format_vec(&values));
    match g.lambda2_closed_form() {
        Ok(l) => {
            let _ = writeln!(s, "lambda2 (closed form): {l}");
        }
        Err(_) => s.push_str("lambda2 (closed form): none for this family\n"),
    }
    let _ = writeln!(s, "lambda2 (numeric): {}", g.lambda2_numeric().map_err(runtime)?);
    let _ = writeln!(s, "tree: {}", g.is_tree());
    for p in Norm::ALL {
        match sync_shift(g, p) {
            Ok((l, basis)) => {
                let _ = writeln!(s, "shift for p = {}: {l} ({basis})", p.label());
            }
            Err(e) => {
                let _ = writeln!(s, "shift for p = {}: {e}", p.label());
            }
        }
    }
    w.text("spectrum.txt", &s)
}

fn certificate(sc: &Scenario) -> Result<Certificate, CliError> {
    let (model, norm, sampler) = (sc.model.as_ref().unwrap(), sc.norm.as_ref().unwrap(), sc.sampler.as_ref().unwrap());
    match (&sc.graph, &sc.diffusion) {
        (Some(g), Some(d)) => check_sync_condition(model, g, d, norm, sampler).map_err(runtime),
        _ => {
            let (lambda, _) = sc.shift()?;
            sup_measure(model, norm, lambda, sc.diffusion.as_ref(), sampler).map_err(runtime)
        }
    }
}

fn run_certify(sc: &Scenario, w: &mut Writer) -> Result<(), CliError> {
    let cert = certificate(sc)?;
    w.text("certificate.txt", &(header(sc) + &render_certificate(&cert)))
}

fn run_search(sc: &Scenario, w: &mut Writer) -> Result<(), CliError> {
    let model = sc.model.as_ref().unwrap();
    let sampler = sc.sampler.as_ref().unwrap();
    let (lambda, basis) = sc.shift()?;
    let p = sc.norm_p.unwrap();
    let budget = sc.search.unwrap();
    let (_, mut cert) = search_weight(model, p, lambda, sc.diffusion.as_ref(), sampler, budget).map_err(runtime)?;
    cert.basis = basis;
    let identity = sup_measure(model, &NormSpec::unweighted(p, model.dim()), lambda, sc.diffusion.as_ref(), sampler)
        .map_err(runtime)?;
    let mut s = header(sc);
    let _ = writeln!(s, "search: {} rounds, {} restarts", budget.rounds, budget.restarts);
    let _ = writeln!(s, "identity weight c: {}\n", identity.c);
    s.push_str(&render_certificate(&cert));
    w.text("certificate.txt", &s)
}

fn integrate(sc: &Scenario, sys: &NetworkSystem) -> Result<(Vec<f64>, Trajectory), CliError> {
    let run = sc.run.as_ref().unwrap();
    let x0 = sc.initial_state(run, sys)?;
    let traj = integrate_rk4(sys, &x0, run.t_end, run.dt, run.stride).map_err(|e| match e {
        CoreError::Divergence { .. } => runtime(e),
        _ => CliError::config("run", e.to_string()),
    })?;
    Ok((x0, traj))
}

fn run_simulate(sc: &Scenario, w: &mut Writer) -> Result<(), CliError> {
    let sys = sc.network()?;
    let graph = sc.graph.as_ref().unwrap();
    let norm = sc.norm.as_ref().unwrap();
    let run = sc.run.as_ref().unwrap();
    let (x0, traj) = integrate(sc, &sys)?;
    w.trajectory(&traj)?;

    let line_weights = match graph.kind() {
        TopologyKind::Line { n } if *n >= 3 => Some(line_edge_weights(*n, norm.p()).map_err(runtime)?.q_diag),
        _ => None,
    };
    let edges = stacked_edge_series(&traj, graph, norm, line_weights.as_deref()).map_err(runtime)?;
    let deviation = deviation_series(&traj, norm).map_err(runtime)?;
    w.series("edge_series.csv", &edges)?;
    w.series("deviation_series.csv", &deviation)?;

    let mut bounds = header(sc);
    if sc.diffusion.is_none() {
        bounds.push_str("bounds: not checked (compartments are uncoupled)\n");
        return w.text("bounds.txt", &bounds);
    }
    if sc.sampler.is_none() {
        bounds.push_str("bounds: not checked (no sampler, so no certificate)\n");
        return w.text("bounds.txt", &bounds);
    }
    let cert = certificate(sc)?;
    w.text("certificate.txt", &(header(sc) + &render_certificate(&cert)))?;
    if !cert.is_contractive() {
        let _ = writeln!(bounds, "bounds: not checked (certificate is inconclusive, c = {})", cert.c);
        return w.text("bounds.txt", &bounds);
    }
    let c = cert.c;
    let n = graph.node_count();
    match graph.kind() {
        TopologyKind::Star { .. } if n >= 3 => {
            let hub = n - 1;
            for i in 0..hub {
                let s = pair_series(&traj, i, hub, norm).map_err(runtime)?;
                let alpha = star_alpha(&x0, n, i, hub, norm).map_err(runtime)?;
                let r = verify_bound(&s, &BoundForm::StarAffine { c, alpha }, run.slack).map_err(runtime)?;
                bounds.push_str(&render_bound(&format!("spoke {i} to hub {hub}"), &r));
                bounds.push('\n');
            }
        }
        TopologyKind::Grid { .. } | TopologyKind::Cartesian { .. } => {
            let form = fit_grid_bound(&edges, c).map_err(runtime)?;
            let r = verify_bound(&edges, &form, run.slack).map_err(runtime)?;
            bounds.push_str(&render_bound("edge (fitted alpha = 1, smallest beta)", &r));
        }
        TopologyKind::Custom { .. } if !graph.is_tree() && n > 2 => {
            let r = verify_bound(&deviation, &BoundForm::Exponential { c }, run.slack).map_err(runtime)?;
            bounds.push_str(&render_bound("deviation", &r));
        }
        _ => {
            let label = if line_weights.is_some() { "edge (Perron weighted)" } else { "edge" };
            let r = verify_bound(&edges, &BoundForm::Exponential { c }, run.slack).map_err(runtime)?;
            bounds.push_str(&render_bound(label, &r));
        }
    }
    w.text("bounds.txt", &bounds)
}

fn run_pde(sc: &Scenario, w: &mut Writer) -> Result<(), CliError> {
    let sys = sc.mesh()?;
    let pde = sc.pde.unwrap();
    let model = sc.model.as_ref().unwrap();
    let norm = sc.norm.as_ref().unwrap();
    let run = sc.run.as_ref().unwrap();
    let (_, traj) = integrate(sc, &sys)?;
    w.trajectory(&traj)?;

    let series = match (pde.boundary, norm.p()) {
        (MeshBoundary::Neumann, Norm::L1) => {
            let s = weighted_gradient_series(&traj, norm).map_err(runtime)?;
            w.series("gradient_series.csv", &s)?;
            Some(("sine-weighted gradient", s))
        }
        (MeshBoundary::Neumann, _) => Some(("deviation", deviation_series(&traj, norm).map_err(runtime)?)),
        (MeshBoundary::Dirichlet, Norm::L1) => {
            let s = sine_weighted_norm_series(&traj, &sys, norm).map_err(runtime)?;
            w.series("sine_norm_series.csv", &s)?;
            Some(("sine-weighted norm", s))
        }
        (MeshBoundary::Dirichlet, _) => None,
    };
    let deviation = deviation_series(&traj, norm).map_err(runtime)?;
    w.series("deviation_series.csv", &deviation)?;

    let mut bounds = header(sc);
    let sampler = match &sc.sampler {
        Some(s) => s,
        None => {
            bounds.push_str("bounds: not checked (no sampler, so no certificate)\n");
            return w.text("bounds.txt", &bounds);
        }
    };
    let lambda = (PI / pde.length).powi(2);
    let mut cert = sup_measure(model, norm, lambda, sc.diffusion.as_ref(), sampler).map_err(runtime)?;
    cert.basis = Some(match pde.boundary {
        MeshBoundary::Neumann => "Neumann PDE: M_{p,Q}[J_F - (pi/L)^2 D]".into(),
        MeshBoundary::Dirichlet => "Dirichlet PDE: M_{1,Q}[J_F - (pi/L)^2 D], zero must be a solution".into(),
    });
    w.text("certificate.txt", &(header(sc) + &render_certificate(&cert)))?;

    let (label, series) = match series {
        Some(s) => s,
        None => {
            bounds.push_str("bounds: not checked (Dirichlet meshes are covered for p = 1 only)\n");
            return w.text("bounds.txt", &bounds);
        }
    };
    if pde.boundary == MeshBoundary::Dirichlet {
        let zero = vec![0.0; model.dim()];
        let times = sampler.times.times().map_err(runtime)?;
        if times.iter().any(|&t| model.rhs(&zero, t).iter().any(|v| *v != 0.0)) {
            bounds.push_str("bounds: not checked (F(0, t) != 0, so zero is not a solution)\n");
            return w.text("bounds.txt", &bounds);
        }
    }
    if !cert.is_contractive() {
        let _ = writeln!(bounds, "bounds: not checked (certificate is inconclusive, c = {})", cert.c);
        return w.text("bounds.txt", &bounds);
    }
    let r = verify_bound(&series, &BoundForm::Exponential { c: cert.c }, run.slack).map_err(runtime)?;
    bounds.push_str(&render_bound(label, &r));
    w.text("bounds.txt", &bounds)
}
