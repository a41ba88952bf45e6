//! Eigendecomposition of shift operators, the graph Fourier transform pair,
//! total variation and frequency ordering.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::eigen;
use crate::error::{GspError, Result};
use crate::operator::{ShiftKind, ShiftOperator, DENSE_THRESHOLD};
use crate::signal::{check_len, GraphSignal};

/// Largest tolerated condition number of the eigenvector matrix.
pub const MAX_CONDITION: f64 = 1e10;
/// Relative Frobenius error allowed when reassembling `V diag(lambda) F`.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
/// Relative resolution below which two frequency keys are considered tied.
const TIE_TOL: f64 = 1e-9;

/// Eigenvalues, eigenvectors and forward transform of a shift operator,
/// together with the low-to-high frequency ordering.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    kind: ShiftKind,
    eigenvalues: Vec<Complex64>,
    vectors: DMatrix<Complex64>,
    forward: DMatrix<Complex64>,
    ordering: Vec<usize>,
    condition: f64,
    orthonormal: bool,
}

impl SpectralBasis {
    pub fn kind(&self) -> ShiftKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in solver order (column order of `V`).
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Eigenvector matrix `V`; column `k` pairs with `eigenvalues()[k]`.
    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// Forward transform `F = V^{-1}`.
    pub fn forward(&self) -> &DMatrix<Complex64> {
        &self.forward
    }

    /// `ordering[r]` is the column index of the `r`-th lowest frequency.
    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    /// 2-norm condition number of `V` (1 for symmetric shifts).
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// True when `V` is real orthogonal and `F = V^T`.
    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    pub fn ordered_eigenvalues(&self) -> Vec<Complex64> {
        self.ordering.iter().map(|&k| self.eigenvalues[k]).collect()
    }

    /// Spectral component `v_k` as a signal.
    pub fn component(&self, k: usize) -> GraphSignal {
        GraphSignal::from_vec_unchecked(self.vectors.column(k).iter().copied().collect())
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max)
    }

    /// Real eigenvector matrix for orthonormal bases.
    pub(crate) fn real_vectors(&self) -> Option<DMatrix<f64>> {
        self.orthonormal.then(|| self.vectors.map(|v| v.re))
    }
}

/// Diagonalizes a shift operator.
///
/// Symmetric operators yield a real orthonormal basis. Other operators are
/// decomposed over the complex numbers and rejected as [`GspError::Defective`]
/// when the eigenvectors are numerically dependent.
pub fn eigendecompose(op: &ShiftOperator) -> Result<SpectralBasis> {
    let n = op.dim();
    if n > DENSE_THRESHOLD {
        return Err(GspError::TooLarge { n, limit: DENSE_THRESHOLD });
    }
    let a = op.to_dense();
    let mut basis = if op.is_symmetric() {
        let (values, vectors) = eigen::symmetric(&a);
        let vectors = vectors.map(|v| Complex64::new(v, 0.0));
        SpectralBasis {
            kind: op.kind(),
            eigenvalues: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            forward: vectors.transpose(),
            vectors,
            ordering: Vec::new(),
            condition: 1.0,
            orthonormal: true,
        }
    } else {
        let (values, vectors) = eigen::general(&a).ok_or(GspError::Defective { cond: f64::INFINITY })?;
        let singular = vectors.clone().svd(false, false).singular_values;
        let smax = singular.max();
        let smin = singular.min();
        let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if !(condition <= MAX_CONDITION) {
            return Err(GspError::Defective { cond: condition });
        }
        let forward = vectors.clone().try_inverse().ok_or(GspError::Defective { cond: condition })?;
        let lambda = DMatrix::from_diagonal(&DVector::from_vec(values.clone()));
        let rebuilt = &vectors * lambda * &forward;
        let ac = a.map(|x| Complex64::new(x, 0.0));
        let err = (rebuilt - &ac).norm();
        if err > RECONSTRUCTION_TOL * ac.norm().max(1.0) {
            return Err(GspError::Defective { cond: condition });
        }
        SpectralBasis {
            kind: op.kind(),
            eigenvalues: values,
            vectors,
            forward,
            ordering: Vec::new(),
            condition,
            orthonormal: false,
        }
    };
    basis.ordering = order_frequencies(&basis, op);
    Ok(basis)
}

/// Graph Fourier analysis `s_hat = F s`.
pub fn gft(basis: &SpectralBasis, s: &GraphSignal) -> Result<GraphSignal> {
    check_len(s.len(), basis.dim())?;
    let x = DVector::from_column_slice(s.values());
    Ok(GraphSignal::from_vec_unchecked((&basis.forward * x).iter().copied().collect()))
}

/// Graph Fourier synthesis `s = V s_hat`.
pub fn igft(basis: &SpectralBasis, shat: &GraphSignal) -> Result<GraphSignal> {
    check_len(shat.len(), basis.dim())?;
    let x = DVector::from_column_slice(shat.values());
    Ok(GraphSignal::from_vec_unchecked((&basis.vectors * x).iter().copied().collect()))
}

/// Largest eigenvalue modulus of the operator (dense computation).
pub fn spectral_radius(op: &ShiftOperator) -> Result<f64> {
    let n = op.dim();
    if n > DENSE_THRESHOLD {
        return Err(GspError::TooLarge { n, limit: DENSE_THRESHOLD });
    }
    let a = op.to_dense();
    let radius = if op.is_symmetric() {
        a.symmetric_eigenvalues().iter().map(|v| v.abs()).fold(0.0, f64::max)
    } else {
        eigen::complex_eigenvalues(&a)
            .ok_or(GspError::Defective { cond: f64::INFINITY })?
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    };
    Ok(radius)
}

/// `||v - A v / lambda_max||_1` with `lambda_max` the spectral radius of the
/// adjacency.
pub fn total_variation(op: &ShiftOperator, v: &GraphSignal) -> Result<f64> {
    if op.kind() != ShiftKind::Adjacency {
        return Err(GspError::InvalidParameter("total variation is defined on the adjacency shift".into()));
    }
    check_len(v.len(), op.dim())?;
    if v.norm2() == 0.0 {
        return Err(GspError::ZeroVector);
    }
    total_variation_with_radius(op, v.values(), spectral_radius(op)?)
}

fn total_variation_with_radius(op: &ShiftOperator, v: &[Complex64], radius: f64) -> Result<f64> {
    if radius == 0.0 {
        return Err(GspError::ZeroSpectralRadius);
    }
    let mut av = vec![Complex64::new(0.0, 0.0); v.len()];
    op.apply_complex(v, &mut av);
    Ok(v.iter().zip(&av).map(|(x, y)| (x - y / radius).norm()).sum())
}

/// Low-to-high frequency ordering of the basis columns.
///
/// Laplacian shifts order by eigenvalue; the adjacency orders by total
/// variation of the eigenvectors. Ties (within a relative `1e-9`) fall back to
/// the eigenvalue's real part, then imaginary part, then column index.
pub fn order_frequencies(basis: &SpectralBasis, op: &ShiftOperator) -> Vec<usize> {
    let n = basis.dim();
    let primary: Vec<f64> = if op.kind() == ShiftKind::Adjacency {
        let radius = basis.spectral_radius();
        (0..n)
            .map(|k| {
                let v: Vec<Complex64> = basis.vectors.column(k).iter().copied().collect();
                // zero radius means a zero adjacency: every component is equally smooth
                total_variation_with_radius(op, &v, radius).unwrap_or(0.0)
            })
            .collect()
    } else {
        basis.eigenvalues.iter().map(|l| l.re).collect()
    };
    let quantize = |xs: &[f64]| -> Vec<i64> {
        let scale = xs.iter().map(|x| x.abs()).fold(1.0, f64::max) * TIE_TOL;
        xs.iter().map(|x| (x / scale).round() as i64).collect()
    };
    let p = quantize(&primary);
    let re = quantize(&basis.eigenvalues.iter().map(|l| l.re).collect::<Vec<_>>());
    let im = quantize(&basis.eigenvalues.iter().map(|l| l.im).collect::<Vec<_>>());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| (p[k], re[k], im[k], k));
    order
}

/// `x^H L x / x^H x` for a Laplacian shift.
pub fn rayleigh_quotient(op: &ShiftOperator, x: &GraphSignal) -> Result<f64> {
    if !op.kind().is_laplacian() || !op.is_symmetric() {
        return Err(GspError::NotSymmetric);
    }
    check_len(x.len(), op.dim())?;
    let denom = x.norm2().powi(2);
    if denom == 0.0 {
        return Err(GspError::ZeroVector);
    }
    let mut lx = vec![Complex64::new(0.0, 0.0); x.len()];
    op.apply_complex(x.values(), &mut lx);
    let num: Complex64 = x.values().iter().zip(&lx).map(|(a, b)| a.conj() * b).sum();
    Ok(num.re / denom)
}
