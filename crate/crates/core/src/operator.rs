//! Graph shift operators: adjacency, combinatorial Laplacian and symmetric
//! normalized Laplacian, stored dense for small graphs and as CSR otherwise.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GspError, Result};
use crate::graph::Graph;

/// Operators on at most this many nodes are stored dense.
pub const DENSE_THRESHOLD: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftKind {
    Adjacency,
    CombinatorialLaplacian,
    NormalizedLaplacian,
}

impl ShiftKind {
    pub fn is_laplacian(self) -> bool {
        !matches!(self, ShiftKind::Adjacency)
    }
}

impl fmt::Display for ShiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShiftKind::Adjacency => "adjacency",
            ShiftKind::CombinatorialLaplacian => "laplacian",
            ShiftKind::NormalizedLaplacian => "normalized",
        })
    }
}

impl FromStr for ShiftKind {
    type Err = GspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacency" => Ok(ShiftKind::Adjacency),
            "laplacian" => Ok(ShiftKind::CombinatorialLaplacian),
            "normalized" => Ok(ShiftKind::NormalizedLaplacian),
            other => Err(GspError::Parse(format!("unknown shift kind `{other}`"))),
        }
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// explicit zeros dropped.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> CsrMatrix {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if (last.0, last.1) == (r, c) => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|t| t.2 != 0.0);

        let mut row_ptr = vec![0usize; n + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = merged.iter().map(|t| t.1).collect();
        let values = merged.iter().map(|t| t.2).collect();
        CsrMatrix { n, row_ptr, col_idx, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorMatrix {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix),
}

/// A concrete shift matrix tagged with its kind and source graph.
#[derive(Debug, Clone)]
pub struct ShiftOperator {
    kind: ShiftKind,
    matrix: OperatorMatrix,
    graph: Arc<Graph>,
    symmetric: bool,
}

impl ShiftOperator {
    /// Builds the requested operator for `g`.
    ///
    /// Convention: an edge `src -> dst` of weight `w` sets `A[dst][src] = w`,
    /// so row `i` of the adjacency holds the in-edges of node `i` and the
    /// directed cycle reproduces the cyclic delay `(A s)_i = s_{i-1}`.
    pub fn new(g: &Graph, kind: ShiftKind) -> Result<ShiftOperator> {
        let n = g.node_count();
        if kind.is_laplacian() && g.is_directed() {
            return Err(GspError::DirectedLaplacian);
        }
        let degrees = g.degrees();
        let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(g.edges().len() + n);
        match kind {
            ShiftKind::Adjacency => {
                triplets.extend(g.edges().iter().map(|e| (e.dst, e.src, e.weight)));
            }
            ShiftKind::CombinatorialLaplacian => {
                triplets.extend(g.edges().iter().map(|e| (e.dst, e.src, -e.weight)));
                triplets.extend(degrees.iter().enumerate().map(|(i, &d)| (i, i, d)));
            }
            ShiftKind::NormalizedLaplacian => {
                if let Some(i) = degrees.iter().position(|&d| d <= 0.0) {
                    return Err(GspError::IsolatedNode(i));
                }
                let inv_sqrt: Vec<f64> = degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
                triplets.extend(
                    g.edges()
                        .iter()
                        .map(|e| (e.dst, e.src, -e.weight * inv_sqrt[e.dst] * inv_sqrt[e.src])),
                );
                triplets.extend((0..n).map(|i| (i, i, 1.0)));
            }
        }
        let csr = CsrMatrix::from_triplets(n, triplets);
        let symmetric = !g.is_directed() || is_symmetric_csr(&csr);
        let matrix = if n <= DENSE_THRESHOLD {
            OperatorMatrix::Dense(csr.to_dense())
        } else {
            OperatorMatrix::Sparse(csr)
        };
        Ok(ShiftOperator { kind, matrix, graph: Arc::new(g.clone()), symmetric })
    }

    pub fn kind(&self) -> ShiftKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.graph.node_count()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn matrix(&self) -> &OperatorMatrix {
        &self.matrix
    }

    /// Exact symmetry of the stored matrix.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.matrix {
            OperatorMatrix::Dense(m) => m.clone(),
            OperatorMatrix::Sparse(m) => m.to_dense(),
        }
    }

    /// `y = M x` for real vectors.
    pub fn apply_real(&self, x: &[f64], y: &mut [f64]) {
        match &self.matrix {
            OperatorMatrix::Dense(m) => {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = m.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
                }
            }
            OperatorMatrix::Sparse(m) => {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = m.row(i).map(|(j, a)| a * x[j]).sum();
                }
            }
        }
    }

    /// `y = M x` for complex vectors.
    pub fn apply_complex(&self, x: &[Complex64], y: &mut [Complex64]) {
        match &self.matrix {
            OperatorMatrix::Dense(m) => {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = m.row(i).iter().zip(x).map(|(a, b)| b * *a).sum();
                }
            }
            OperatorMatrix::Sparse(m) => {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = m.row(i).map(|(j, a)| x[j] * a).sum();
                }
            }
        }
    }

    /// Gershgorin disc bounds `(lower, upper)` on the real parts of the spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut visit = |diag: f64, radius: f64| {
            lo = lo.min(diag - radius);
            hi = hi.max(diag + radius);
        };
        match &self.matrix {
            OperatorMatrix::Dense(m) => {
                for i in 0..m.nrows() {
                    let radius: f64 = (0..m.ncols()).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
                    visit(m[(i, i)], radius);
                }
            }
            OperatorMatrix::Sparse(m) => {
                for i in 0..self.dim() {
                    let (mut diag, mut radius) = (0.0, 0.0);
                    for (j, a) in m.row(i) {
                        if j == i {
                            diag = a;
                        } else {
                            radius += a.abs();
                        }
                    }
                    visit(diag, radius);
                }
            }
        }
        (lo, hi)
    }

    /// Matrix of the same operator after relabeling node `i` as `perm[i]`,
    /// i.e. `P M P^T`.
    pub fn permuted_dense(&self, perm: &[usize]) -> DMatrix<f64> {
        let m = self.to_dense();
        let n = m.nrows();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(perm[i], perm[j])] = m[(i, j)];
            }
        }
        out
    }
}

fn is_symmetric_csr(m: &CsrMatrix) -> bool {
    let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(m.nnz());
    for i in 0..m.n {
        entries.extend(m.row(i).map(|(j, v)| (i, j, v)));
    }
    let mut transposed: Vec<(usize, usize, f64)> = entries.iter().map(|&(i, j, v)| (j, i, v)).collect();
    transposed.sort_by_key(|t| (t.0, t.1));
    entries == transposed
}
