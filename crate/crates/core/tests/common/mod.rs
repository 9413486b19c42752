//! Independent reference computations shared by the integration tests.
//! Nothing here calls the library's measure or eigenvalue routines.

#![allow(dead_code)]

use logsync_core::DenseMatrix;

pub fn mat(n: usize, data: &[f64]) -> DenseMatrix {
    DenseMatrix::new(n, n, data.to_vec()).unwrap()
}

/// Max column absolute sum.
pub fn norm_1(a: &DenseMatrix) -> f64 {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Max row absolute sum.
pub fn norm_inf(a: &DenseMatrix) -> f64 {
    (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `(‖I + hA‖ − 1)/h` with a caller-supplied induced norm.
pub fn definitional(a: &DenseMatrix, h: f64, norm: fn(&DenseMatrix) -> f64) -> f64 {
    let n = a.rows();
    let mut b = a.scale(h);
    for i in 0..n {
        b = &b + &unit(n, i, i);
    }
    (norm(&b) - 1.0) / h
}

fn unit(n: usize, i: usize, j: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// Number of eigenvalues of symmetric `s` below `sigma`, by counting
/// negative pivots of `s − σI` (Sylvester's law of inertia).
fn count_below(s: &DenseMatrix, sigma: f64) -> usize {
    let n = s.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| s[(i, j)] - if i == j { sigma } else { 0.0 }).collect()).collect();
    let mut neg = 0;
    for k in 0..n {
        let mut piv = a[k][k];
        if piv == 0.0 {
            piv = 1e-300;
        }
        if piv < 0.0 {
            neg += 1;
        }
        for i in k + 1..n {
            let f = a[i][k] / piv;
            for j in k + 1..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    neg
}

/// Largest eigenvalue of a symmetric matrix by inertia bisection.
pub fn sym_max_eig(s: &DenseMatrix) -> f64 {
    sym_eig_k(s, s.rows() - 1)
}

/// `k`-th smallest eigenvalue (0-based) of a symmetric matrix.
pub fn sym_eig_k(s: &DenseMatrix, k: usize) -> f64 {
    let n = s.rows();
    let r = (0..n).map(|i| (0..n).map(|j| s[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max) + 1.0;
    let (mut lo, mut hi) = (-r, r);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(s, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    rayleigh_refine(s, 0.5 * (lo + hi))
}

/// Polishes an eigenvalue estimate by shifted inverse iteration followed by
/// the Rayleigh quotient.
fn rayleigh_refine(s: &DenseMatrix, approx: f64) -> f64 {
    let n = s.rows();
    let shift = approx + 1e-7 * (1.0 + approx.abs());
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
    for _ in 0..8 {
        let y = match solve_shifted(s, shift, &x) {
            Some(y) => y,
            None => return approx,
        };
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = y.iter().map(|v| v / norm).collect();
    }
    let sx = s.matvec(&x);
    let q: f64 = x.iter().zip(&sx).map(|(a, b)| a * b).sum();
    if (q - approx).abs() < 1e-6 * (1.0 + approx.abs()) {
        q
    } else {
        approx
    }
}

/// Solves `(S − σI) y = b` by Gaussian elimination with partial pivoting.
fn solve_shifted(s: &DenseMatrix, sigma: f64, b: &[f64]) -> Option<Vec<f64>> {
    let n = s.rows();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r: Vec<f64> = (0..n).map(|j| s[(i, j)] - if i == j { sigma } else { 0.0 }).collect();
            r.push(b[i]);
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        a.swap(k, p);
        if a[k][k] == 0.0 {
            return None;
        }
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..=n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = a[i][n];
        for j in i + 1..n {
            v -= a[i][j] * y[j];
        }
        y[i] = v / a[i][i];
    }
    Some(y)
}

pub fn sym_part(a: &DenseMatrix) -> DenseMatrix {
    let n = a.rows();
    let mut s = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = 0.5 * (a[(i, j)] + a[(j, i)]);
        }
    }
    s
}

/// Deterministic pseudo-random stream (SplitMix64) for oracle inputs.
pub struct Stream(u64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn matrix(&mut self, n: usize, scale: f64) -> DenseMatrix {
        let data: Vec<f64> = (0..n * n).map(|_| self.uniform(-scale, scale)).collect();
        DenseMatrix::new(n, n, data).unwrap()
    }
}

/// Random connected simple graph on `n` nodes: a random spanning tree plus
/// extra edges with probability `extra`.
pub fn random_connected_edges(s: &mut Stream, n: usize, extra: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = s.below(v);
        edges.push((u, v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !edges.contains(&(i, j)) && s.uniform(0.0, 1.0) < extra {
                edges.push((i, j));
            }
        }
    }
    edges
}
