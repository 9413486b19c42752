//! Interconnection topologies and their spectral objects.
//!
//! Node order conventions:
//!
//! * `Star(n)` has `n` nodes with the hub last.
//! * `Cartesian([G₁, …, G_K])` uses row-major node order, first factor
//!   outermost: node `(i₁, …, i_K)` has index `((i₁·N₂ + i₂)·N₃ + …)`.
//!   `Grid(r, c)` is `Cartesian([Line(r), Line(c)])`.
//!
//! Edges are oriented tail < head and sorted lexicographically, so the
//! incidence matrix, and everything built from it, is reproducible.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{SymmetricEigen, SYMMETRY_TOL};
use crate::matrix::DenseMatrix;
use crate::measures::Norm;

/// Graph family description, as it appears in scenario configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologyKind {
    Line { n: usize },
    Complete { n: usize },
    Star { n: usize },
    Grid { rows: usize, cols: usize },
    Cartesian { factors: Vec<TopologyKind> },
    Custom { nodes: usize, edges: Vec<(usize, usize)> },
}

/// A validated, connected, undirected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphTopology {
    kind: TopologyKind,
    laplacian: DenseMatrix,
    edges: Vec<(usize, usize)>,
}

impl GraphTopology {
    pub fn new(kind: TopologyKind) -> Result<Self> {
        let laplacian = build_laplacian(&kind)?;
        let n = laplacian.rows();
        if n < 2 {
            return invalid("a graph needs at least two nodes");
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if laplacian[(i, j)] != 0.0 {
                    edges.push((i, j));
                }
            }
        }
        if !is_connected(n, &edges) {
            return invalid("graph is disconnected");
        }
        Ok(GraphTopology {
            kind,
            laplacian,
            edges,
        })
    }

    pub fn line(n: usize) -> Result<Self> {
        Self::new(TopologyKind::Line { n })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(TopologyKind::Complete { n })
    }

    pub fn star(n: usize) -> Result<Self> {
        Self::new(TopologyKind::Star { n })
    }

    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        Self::new(TopologyKind::Grid { rows, cols })
    }

    pub fn custom(nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(TopologyKind::Custom { nodes, edges })
    }

    pub fn kind(&self) -> &TopologyKind {
        &self.kind
    }

    pub fn node_count(&self) -> usize {
        self.laplacian.rows()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge orientation `(tail, head)`, `tail < head`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn laplacian(&self) -> &DenseMatrix {
        &self.laplacian
    }

    /// `N × m` incidence matrix: column `k` is `−1` at the tail and `+1` at
    /// the head of edge `k`. Satisfies `E Eᵀ = 𝓛`.
    pub fn incidence(&self) -> DenseMatrix {
        let mut e = DenseMatrix::zeros(self.node_count(), self.edge_count());
        for (k, &(tail, head)) in self.edges.iter().enumerate() {
            e[(tail, k)] = -1.0;
            e[(head, k)] = 1.0;
        }
        e
    }

    /// Edge Laplacian `Eᵀ E`.
    pub fn edge_laplacian(&self) -> DenseMatrix {
        let e = self.incidence();
        &e.transpose() * &e
    }

    /// True when every pair of nodes is adjacent.
    pub fn is_complete(&self) -> bool {
        let n = self.node_count();
        self.edge_count() == n * (n - 1) / 2
    }

    /// True when the graph has no cycles (connected with `N − 1` edges).
    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.node_count()
    }

    /// An `m × m` matrix `K` with `Eᵀ 𝓛 = K Eᵀ`.
    pub fn k_matrix(&self, mode: KMode) -> Result<DenseMatrix> {
        match mode {
            KMode::EdgeLaplacian => Ok(self.edge_laplacian()),
            KMode::CompleteShortcut => {
                if !self.is_complete() {
                    return invalid("the N·I shortcut for K only holds on complete graphs");
                }
                Ok(DenseMatrix::identity(self.edge_count()).scale(self.node_count() as f64))
            }
        }
    }

    /// Algebraic connectivity from the closed forms for the built-in families.
    pub fn lambda2_closed_form(&self) -> Result<f64> {
        lambda2_of_kind(&self.kind)
    }

    /// Second-smallest Laplacian eigenvalue computed numerically.
    pub fn lambda2_numeric(&self) -> Result<f64> {
        Ok(numeric_spectrum(&self.laplacian)?[1])
    }
}

/// Choice of `K` in the identity `Eᵀ 𝓛 = K Eᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KMode {
    EdgeLaplacian,
    CompleteShortcut,
}

fn build_laplacian(kind: &TopologyKind) -> Result<DenseMatrix> {
    match kind {
        TopologyKind::Line { n } => {
            if *n < 2 {
                return invalid("line graph needs n >= 2");
            }
            Ok(laplacian_from_edges(*n, (0..n - 1).map(|i| (i, i + 1))))
        }
        TopologyKind::Complete { n } => {
            if *n < 2 {
                return invalid("complete graph needs n >= 2");
            }
            Ok(laplacian_from_edges(
                *n,
                (0..*n).flat_map(|i| (i + 1..*n).map(move |j| (i, j))),
            ))
        }
        TopologyKind::Star { n } => {
            if *n < 2 {
                return invalid("star graph needs n >= 2");
            }
            let hub = n - 1;
            Ok(laplacian_from_edges(*n, (0..hub).map(|i| (i, hub))))
        }
        TopologyKind::Grid { rows, cols } => build_laplacian(&TopologyKind::Cartesian {
            factors: vec![TopologyKind::Line { n: *rows }, TopologyKind::Line { n: *cols }],
        }),
        TopologyKind::Cartesian { factors } => {
            if factors.is_empty() {
                return invalid("cartesian product needs at least one factor");
            }
            let parts = factors.iter().map(build_laplacian).collect::<Result<Vec<_>>>()?;
            let sizes: Vec<usize> = parts.iter().map(DenseMatrix::rows).collect();
            let total: usize = sizes.iter().product();
            let mut sum = DenseMatrix::zeros(total, total);
            for (k, part) in parts.iter().enumerate() {
                let before: usize = sizes[..k].iter().product();
                let after: usize = sizes[k + 1..].iter().product();
                let term = DenseMatrix::identity(before)
                    .kron(part)
                    .kron(&DenseMatrix::identity(after));
                sum = &sum + &term;
            }
            Ok(sum)
        }
        TopologyKind::Custom { nodes, edges } => {
            if *nodes < 2 {
                return invalid("custom graph needs at least two nodes");
            }
            let mut seen = BTreeSet::new();
            for &(a, b) in edges {
                if a >= *nodes || b >= *nodes {
                    return invalid(format!("edge ({a}, {b}) references a node outside 0..{nodes}"));
                }
                if a == b {
                    return invalid(format!("self-loop at node {a}"));
                }
                if !seen.insert((a.min(b), a.max(b))) {
                    return invalid(format!("duplicate edge ({a}, {b})"));
                }
            }
            Ok(laplacian_from_edges(*nodes, seen.into_iter()))
        }
    }
}

fn laplacian_from_edges(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> DenseMatrix {
    let mut l = DenseMatrix::zeros(n, n);
    for (a, b) in edges {
        l[(a, a)] += 1.0;
        l[(b, b)] += 1.0;
        l[(a, b)] -= 1.0;
        l[(b, a)] -= 1.0;
    }
    l
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn lambda2_of_kind(kind: &TopologyKind) -> Result<f64> {
    match kind {
        TopologyKind::Line { n } => Ok(line_lambda2(*n)),
        TopologyKind::Complete { n } => Ok(*n as f64),
        // Spectrum of Star(n) is {0, 1 (n−2 times), n}.
        TopologyKind::Star { n } => Ok(if *n >= 3 { 1.0 } else { *n as f64 }),
        TopologyKind::Grid { rows, cols } => Ok(line_lambda2(*rows).min(line_lambda2(*cols))),
        TopologyKind::Cartesian { factors } => factors
            .iter()
            .map(lambda2_of_kind)
            .try_fold(f64::INFINITY, |m, v| v.map(|v| m.min(v))),
        TopologyKind::Custom { .. } => Err(Error::Unsupported(
            "no closed form for lambda2 of a custom graph; use the numeric spectrum".into(),
        )),
    }
}

/// `4 sin²(π / 2N)`, the algebraic connectivity of a line of `N` nodes.
pub fn line_lambda2(n: usize) -> f64 {
    let s = (PI / (2.0 * n as f64)).sin();
    4.0 * s * s
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn numeric_spectrum(s: &DenseMatrix) -> Result<Vec<f64>> {
    if !s.is_symmetric(SYMMETRY_TOL) {
        return invalid("numeric_spectrum needs a symmetric matrix");
    }
    Ok(SymmetricEigen::new(s)?.values)
}

/// Eigenvalues of the `n × n` tridiagonal matrix with diagonal
/// `(a + v, v, …, v, b + v)`, sub-diagonal `s` and super-diagonal `t`.
///
/// Closed forms exist for `a = b = 0` and for `a = b = σ = √(st)`; any other
/// corner pair is reported as unsupported. Returned sorted ascending.
pub fn tridiagonal_spectrum(v: f64, a: f64, b: f64, s: f64, t: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return invalid("tridiagonal size must be at least 1");
    }
    if s * t < 0.0 {
        return invalid("closed form needs s·t >= 0");
    }
    let sigma = (s * t).sqrt();
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()));
    let nf = n as f64;
    let mut out: Vec<f64> = if a == 0.0 && b == 0.0 {
        (1..=n)
            .map(|k| v - 2.0 * sigma * (k as f64 * PI / (nf + 1.0)).cos())
            .collect()
    } else if close(a, sigma) && close(b, sigma) {
        (1..=n).map(|k| v - 2.0 * sigma * (k as f64 * PI / nf).cos()).collect()
    } else {
        return Err(Error::Unsupported(format!(
            "no closed form for corner entries a = {a}, b = {b} (need 0 or sqrt(st) = {sigma})"
        )));
    };
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// The explicit tridiagonal matrix described in [`tridiagonal_spectrum`].
pub fn tridiagonal_matrix(v: f64, a: f64, b: f64, s: f64, t: f64, n: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = v;
        if i + 1 < n {
            m[(i + 1, i)] = s;
            m[(i, i + 1)] = t;
        }
    }
    m[(0, 0)] += a;
    m[(n - 1, n - 1)] += b;
    m
}

/// Perron edge weights of a line of `n` nodes for the `L^p` result.
#[derive(Debug, Clone, PartialEq)]
pub struct LineEdgeWeights {
    /// `p_k = sin(kπ/N)`, `k = 1..N−1`.
    pub perron: Vec<f64>,
    /// Diagonal of `Q_p`: `p_k^{(2−p)/p}`, and `1/p_k` for `p = ∞`.
    pub q_diag: Vec<f64>,
}

pub fn line_edge_weights(n: usize, p: Norm) -> Result<LineEdgeWeights> {
    if n < 3 {
        return invalid("line edge weights need N >= 3");
    }
    let perron: Vec<f64> = (1..n).map(|k| (k as f64 * PI / n as f64).sin()).collect();
    let q_diag = perron
        .iter()
        .map(|&pk| match p {
            Norm::L1 => pk,
            Norm::L2 => 1.0,
            Norm::LInf => 1.0 / pk,
        })
        .collect();
    Ok(LineEdgeWeights { perron, q_diag })
}
