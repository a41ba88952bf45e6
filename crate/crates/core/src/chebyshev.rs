//! Chebyshev approximation of frequency responses.
//!
//! A response on `[0, lambda_ub]` is expanded in Chebyshev polynomials of the
//! shifted variable `x = 2 lambda / lambda_ub - 1` and applied to a signal
//! with the three-term recurrence on `(2 / lambda_ub) L - I`. Only sparse
//! mat-vecs are needed, so no eigendecomposition is involved and a degree-K
//! filter touches only the K-hop neighborhood of each node.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::eigen::power_iteration;
use crate::error::{GspError, Result};
use crate::filter::FilterKernel;
use crate::operator::{ShiftKind, ShiftOperator};
use crate::signal::{check_len, GraphSignal};

/// Minimum number of Chebyshev-Gauss quadrature nodes used for a fit.
pub const MIN_QUADRATURE_NODES: usize = 64;
/// Power-iteration estimates are inflated by this factor to bound the spectrum.
pub const BOUND_INFLATION: f64 = 1.01;
const POWER_ITERATIONS: usize = 300;

/// Truncated Chebyshev series `h(lambda) ~ sum_k c_k T_k(2 lambda / lambda_ub - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevFilter {
    coefficients: Vec<f64>,
    upper_bound: f64,
}

impl ChebyshevFilter {
    /// Fits `kernel` on `[0, upper_bound]` with a degree-`degree` series.
    ///
    /// Coefficients come from Chebyshev-Gauss quadrature on
    /// `max(degree + 1, 64)` nodes, which is exact for polynomial kernels of
    /// degree at most `degree`.
    pub fn fit(kernel: &FilterKernel, degree: usize, upper_bound: f64) -> Result<ChebyshevFilter> {
        if !(upper_bound > 0.0 && upper_bound.is_finite()) {
            return Err(GspError::InvalidInterval(upper_bound));
        }
        let nodes = (degree + 1).max(MIN_QUADRATURE_NODES);
        let angles: Vec<f64> = (0..nodes).map(|j| PI * (j as f64 + 0.5) / nodes as f64).collect();
        let samples = angles
            .iter()
            .map(|theta| kernel.evaluate_real(upper_bound * (theta.cos() + 1.0) / 2.0))
            .collect::<Result<Vec<_>>>()?;
        let mut coefficients: Vec<f64> = (0..=degree)
            .map(|k| {
                let sum: f64 = angles.iter().zip(&samples).map(|(theta, h)| h * (k as f64 * theta).cos()).sum();
                2.0 * sum / nodes as f64
            })
            .collect();
        coefficients[0] /= 2.0;
        ChebyshevFilter::from_coefficients(coefficients, upper_bound)
    }

    pub fn from_coefficients(coefficients: Vec<f64>, upper_bound: f64) -> Result<ChebyshevFilter> {
        if !(upper_bound > 0.0 && upper_bound.is_finite()) {
            return Err(GspError::InvalidInterval(upper_bound));
        }
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
            return Err(GspError::InvalidParameter("Chebyshev coefficients must be finite and non-empty".into()));
        }
        Ok(ChebyshevFilter { coefficients, upper_bound })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper_bound
    }

    /// Series value at `lambda` (Clenshaw recurrence).
    pub fn evaluate(&self, lambda: f64) -> f64 {
        let x = 2.0 * lambda / self.upper_bound - 1.0;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coefficients.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        self.coefficients[0] + x * b1 - b2
    }

    /// Largest `|h(lambda) - series(lambda)|` over `points` evenly spaced
    /// samples of `[0, upper_bound]`.
    pub fn sup_error(&self, kernel: &FilterKernel, points: usize) -> Result<f64> {
        let points = points.max(2);
        let mut worst: f64 = 0.0;
        for i in 0..points {
            let lambda = self.upper_bound * i as f64 / (points - 1) as f64;
            worst = worst.max((kernel.evaluate_real(lambda)? - self.evaluate(lambda)).abs());
        }
        Ok(worst)
    }

    /// Applies the series to `s` using exactly `degree` mat-vecs with `op`.
    ///
    /// `op` must be symmetric with its spectrum inside `[0, upper_bound]`.
    /// The bound is checked with Gershgorin discs and, when those are not
    /// conclusive, a power-iteration estimate.
    pub fn apply(&self, op: &ShiftOperator, s: &GraphSignal) -> Result<GraphSignal> {
        if !op.is_symmetric() {
            return Err(GspError::NotSymmetric);
        }
        let n = op.dim();
        check_len(s.len(), n)?;
        self.check_spectrum(op)?;

        let alpha = 2.0 / self.upper_bound;
        let zero = Complex64::new(0.0, 0.0);
        // x = alpha L t - t
        let step = |t: &[Complex64], out: &mut [Complex64]| {
            op.apply_complex(t, out);
            for (o, ti) in out.iter_mut().zip(t) {
                *o = *o * alpha - ti;
            }
        };

        let c = &self.coefficients;
        let mut prev: Vec<Complex64> = s.values().to_vec();
        let mut acc: Vec<Complex64> = prev.iter().map(|v| v * c[0]).collect();
        if c.len() == 1 {
            return Ok(GraphSignal::from_vec_unchecked(acc));
        }
        let mut cur = vec![zero; n];
        step(&prev, &mut cur);
        for (a, t) in acc.iter_mut().zip(&cur) {
            *a += t * c[1];
        }
        let mut next = vec![zero; n];
        for &ck in &c[2..] {
            step(&cur, &mut next);
            for ((nx, p), a) in next.iter_mut().zip(&prev).zip(acc.iter_mut()) {
                *nx = *nx * 2.0 - p;
                *a += *nx * ck;
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(GraphSignal::from_vec_unchecked(acc))
    }

    fn check_spectrum(&self, op: &ShiftOperator) -> Result<()> {
        let (lo, hi) = op.gershgorin_bounds();
        if lo < 0.0 {
            // Lower disc edge is attained by a zero-trace adjacency with edges.
            let trace_zero = op.kind() == ShiftKind::Adjacency;
            if trace_zero && hi > 0.0 {
                return Err(GspError::SpectrumExceedsBound { estimate: lo, bound: self.upper_bound });
            }
        }
        if hi <= self.upper_bound {
            return Ok(());
        }
        let estimate = power_iteration(op, POWER_ITERATIONS, 0);
        if estimate > self.upper_bound * (1.0 + 1e-9) {
            return Err(GspError::SpectrumExceedsBound { estimate, bound: self.upper_bound });
        }
        Ok(())
    }
}

/// Upper bound on the spectrum of a Laplacian shift: exactly 2 for the
/// normalized Laplacian, otherwise a power-iteration estimate inflated by 1%,
/// capped by the Gershgorin bound.
pub fn spectral_upper_bound(op: &ShiftOperator, seed: u64) -> f64 {
    if op.kind() == ShiftKind::NormalizedLaplacian {
        return 2.0;
    }
    let (_, gershgorin) = op.gershgorin_bounds();
    let estimate = power_iteration(op, POWER_ITERATIONS, seed).abs() * BOUND_INFLATION;
    let bound = estimate.min(gershgorin);
    if bound > 0.0 {
        bound
    } else {
        1.0
    }
}
