//! One-dimensional Gauss-Legendre-Lobatto machinery.
//!
//! Everything the tensor-product operators need lives on [`Basis1D`]: the
//! nodes and weights, the collocation differentiation matrix, and the values
//! and derivatives of the Radau correction functions at the nodes.

use crate::error::{LwfrError, Result};

/// Highest polynomial degree the solver supports.
pub const MAX_DEGREE: usize = 4;

/// GLL nodal basis of degree `N` on the reference interval `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Basis1D {
    degree: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Row-major `(N+1) x (N+1)`, `dmat[i * n + j] = l_j'(xi_i)`.
    dmat: Vec<f64>,
    bary: Vec<f64>,
    g_left: Vec<f64>,
    g_right: Vec<f64>,
    dg_left: Vec<f64>,
    dg_right: Vec<f64>,
}

/// Legendre polynomial `P_k(x)` and its derivative.
pub fn legendre(k: usize, x: f64) -> (f64, f64) {
    match k {
        0 => (1.0, 0.0),
        1 => (x, 1.0),
        _ => {
            let (mut p0, mut p1) = (1.0, x);
            let (mut d0, mut d1) = (0.0, 1.0);
            for m in 2..=k {
                let mf = m as f64;
                let p2 = ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf;
                let d2 = d0 + (2.0 * mf - 1.0) * p1;
                p0 = p1;
                p1 = p2;
                d0 = d1;
                d1 = d2;
            }
            (p1, d1)
        }
    }
}

/// Nodes and weights of the `(N+1)`-point Gauss-Legendre-Lobatto rule.
///
/// Interior nodes are roots of `P_N'`, found by Newton iteration on
/// `q = P_{N+1} - P_{N-1}` (which shares them) from Chebyshev-Lobatto guesses.
pub fn gll_nodes_weights(degree: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(degree >= 1);
    let n = degree;
    let np = n + 1;
    let mut x = vec![0.0; np];
    let mut w = vec![0.0; np];
    let nf = n as f64;
    let end_weight = 2.0 / (nf * (nf + 1.0));
    x[0] = -1.0;
    x[n] = 1.0;
    w[0] = end_weight;
    w[n] = end_weight;
    for j in 1..np.div_ceil(2) {
        let mut xj = -(std::f64::consts::PI * j as f64 / nf).cos();
        for _ in 0..100 {
            let (pp, _) = legendre(n + 1, xj);
            let (pm, _) = legendre(n - 1, xj);
            let (pn, _) = legendre(n, xj);
            let q = pp - pm;
            let dq = (2.0 * nf + 1.0) * pn;
            let delta = -q / dq;
            xj += delta;
            if delta.abs() <= 1e-15 * xj.abs().max(1.0) {
                break;
            }
        }
        let (pn, _) = legendre(n, xj);
        x[j] = xj;
        x[n - j] = -xj;
        w[j] = end_weight / (pn * pn);
        w[n - j] = w[j];
    }
    if n.is_multiple_of(2) {
        let (pn, _) = legendre(n, 0.0);
        x[n / 2] = 0.0;
        w[n / 2] = end_weight / (pn * pn);
    }
    (x, w)
}

/// Barycentric weights for Lagrange interpolation through `nodes`.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|j| {
            let prod: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &xk)| nodes[j] - xk)
                .product();
            1.0 / prod
        })
        .collect()
}

/// Collocation differentiation matrix, row-major, `D[i][j] = l_j'(x_i)`.
///
/// Diagonal entries use the negative-sum identity so every row sums to zero.
pub fn differentiation_matrix(nodes: &[f64], bary: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = bary[j] / bary[i] / (nodes[i] - nodes[j]);
                d[i * n + j] = v;
                diag -= v;
            }
        }
        d[i * n + i] = diag;
    }
    d
}

/// Left Radau correction `g_L(x) = ((-1)^N / 2) (P_N(x) - P_{N+1}(x))` and its derivative.
pub fn radau_left(degree: usize, x: f64) -> (f64, f64) {
    let sign = if degree.is_multiple_of(2) { 0.5 } else { -0.5 };
    let (pn, dpn) = legendre(degree, x);
    let (pn1, dpn1) = legendre(degree + 1, x);
    (sign * (pn - pn1), sign * (dpn - dpn1))
}

/// Right Radau correction `g_R(x) = g_L(-x)` and its derivative.
pub fn radau_right(degree: usize, x: f64) -> (f64, f64) {
    let (g, dg) = radau_left(degree, -x);
    (g, -dg)
}

/// Correction function values and derivatives at `nodes`: `(gL, gR, gL', gR')`.
pub fn radau_correction(degree: usize, nodes: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut gl = Vec::with_capacity(nodes.len());
    let mut gr = Vec::with_capacity(nodes.len());
    let mut dgl = Vec::with_capacity(nodes.len());
    let mut dgr = Vec::with_capacity(nodes.len());
    for &x in nodes {
        let (l, dl) = radau_left(degree, x);
        let (r, dr) = radau_right(degree, x);
        gl.push(l);
        gr.push(r);
        dgl.push(dl);
        dgr.push(dr);
    }
    (gl, gr, dgl, dgr)
}

impl Basis1D {
    /// Builds the degree-`N` GLL basis. Supported degrees are `1..=MAX_DEGREE`.
    pub fn gll(degree: usize) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(LwfrError::Config(format!(
                "polynomial degree {degree} outside supported range 1..={MAX_DEGREE}"
            )));
        }
        let (nodes, weights) = gll_nodes_weights(degree);
        let bary = barycentric_weights(&nodes);
        let dmat = differentiation_matrix(&nodes, &bary);
        let (g_left, g_right, dg_left, dg_right) = radau_correction(degree, &nodes);
        Ok(Self {
            degree,
            nodes,
            weights,
            dmat,
            bary,
            g_left,
            g_right,
            dg_left,
            dg_right,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nodes, `N + 1`.
    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Row-major differentiation matrix.
    pub fn dmat(&self) -> &[f64] {
        &self.dmat
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dmat[i * self.len() + j]
    }

    pub fn g_left(&self) -> &[f64] {
        &self.g_left
    }

    pub fn g_right(&self) -> &[f64] {
        &self.g_right
    }

    pub fn dg_left(&self) -> &[f64] {
        &self.dg_left
    }

    pub fn dg_right(&self) -> &[f64] {
        &self.dg_right
    }

    /// Applies `D` to nodal values.
    pub fn differentiate(&self, values: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.dmat[i * n + j] * values[j]).sum())
            .collect()
    }

    /// Values of all Lagrange basis functions at `x`.
    pub fn lagrange_at(&self, x: f64) -> Vec<f64> {
        let n = self.len();
        if let Some(k) = self.nodes.iter().position(|&xi| xi == x) {
            let mut out = vec![0.0; n];
            out[k] = 1.0;
            return out;
        }
        let terms: Vec<f64> = (0..n).map(|j| self.bary[j] / (x - self.nodes[j])).collect();
        let denom: f64 = terms.iter().sum();
        terms.into_iter().map(|t| t / denom).collect()
    }

    /// Evaluates the degree-`N` interpolant of nodal `values` at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        self.lagrange_at(x)
            .iter()
            .zip(values)
            .map(|(l, v)| l * v)
            .sum()
    }

    /// Quadrature of nodal `values` with the GLL weights.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}
