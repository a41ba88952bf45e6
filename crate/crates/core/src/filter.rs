//! Frequency responses and their realization as graph filters.
//!
//! A [`FilterKernel`] is a scalar response `h(lambda)`. It can be applied
//! exactly through the spectral basis ([`apply_exact`]), as a matrix
//! polynomial in the shift ([`apply_polynomial`]) or through a fitted
//! Chebyshev series (see [`crate::chebyshev`]).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::ChebyshevFilter;
use crate::error::{GspError, Result};
use crate::operator::ShiftOperator;
use crate::signal::{check_len, GraphSignal};
use crate::spectral::{gft, igft, SpectralBasis};

/// Eigenvalues within this distance of an ideal cutoff belong to the low band.
pub const CUTOFF_TOL: f64 = 1e-9;
/// Relative slack when testing eigenvalues against a kernel interval, and
/// the largest imaginary part treated as a real eigenvalue.
const DOMAIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Response {
    IdealLowPass { cutoff: f64 },
    IdealHighPass { cutoff: f64 },
    /// `exp(-t lambda)`
    Heat { t: f64 },
    /// `1 / (1 + gamma lambda)`, the smoothness-prior denoiser.
    Tikhonov { gamma: f64 },
    /// `sum_m coefficients[m] lambda^m`
    Polynomial { coefficients: Vec<f64> },
    /// Piecewise-linear through `(lambda, gain)` points sorted by lambda,
    /// constant beyond the first and last point.
    Custom { points: Vec<(f64, f64)> },
}

/// A frequency response together with the eigenvalue interval on which it
/// may be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterKernel {
    #[serde(flatten)]
    response: Response,
    #[serde(default = "unbounded", skip_serializing_if = "is_unbounded")]
    interval: (f64, f64),
}

fn unbounded() -> (f64, f64) {
    (f64::NEG_INFINITY, f64::INFINITY)
}

fn is_unbounded(i: &(f64, f64)) -> bool {
    *i == unbounded()
}

impl FilterKernel {
    pub fn new(response: Response) -> Result<FilterKernel> {
        FilterKernel::with_interval(response, unbounded())
    }

    pub fn with_interval(response: Response, interval: (f64, f64)) -> Result<FilterKernel> {
        let kernel = FilterKernel { response, interval };
        kernel.validate()?;
        Ok(kernel)
    }

    /// `h(lambda) = 1`.
    pub fn identity() -> FilterKernel {
        FilterKernel { response: Response::Polynomial { coefficients: vec![1.0] }, interval: unbounded() }
    }

    pub fn heat(t: f64) -> Result<FilterKernel> {
        FilterKernel::new(Response::Heat { t })
    }

    pub fn polynomial(coefficients: Vec<f64>) -> Result<FilterKernel> {
        FilterKernel::new(Response::Polynomial { coefficients })
    }

    pub fn from_json(text: &str) -> Result<FilterKernel> {
        let kernel: FilterKernel = serde_json::from_str(text)?;
        kernel.validate()?;
        Ok(kernel)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("kernel serializes")
    }

    pub fn response(&self) -> &Response {
        &self.response
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.interval;
        let bad = |msg: String| Err(GspError::InvalidParameter(msg));
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return bad(format!("invalid kernel interval [{lo}, {hi}]"));
        }
        match &self.response {
            Response::IdealLowPass { cutoff } | Response::IdealHighPass { cutoff } => {
                if !cutoff.is_finite() || *cutoff < lo || *cutoff > hi {
                    return bad(format!("cutoff {cutoff} outside kernel interval [{lo}, {hi}]"));
                }
            }
            Response::Heat { t } => {
                if !(t.is_finite() && *t >= 0.0) {
                    return bad(format!("heat scale must be >= 0, got {t}"));
                }
            }
            Response::Tikhonov { gamma } => {
                if !(gamma.is_finite() && *gamma >= 0.0) {
                    return bad(format!("Tikhonov gamma must be >= 0, got {gamma}"));
                }
            }
            Response::Polynomial { coefficients } => {
                if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
                    return bad("polynomial needs at least one finite coefficient".into());
                }
            }
            Response::Custom { points } => {
                if points.is_empty() || points.iter().any(|(l, g)| !l.is_finite() || !g.is_finite()) {
                    return bad("custom response needs finite (lambda, gain) points".into());
                }
                if points.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return bad("custom response points must be strictly increasing in lambda".into());
                }
            }
        }
        Ok(())
    }

    /// Number of polynomial coefficients, if this is a polynomial response.
    pub fn polynomial_len(&self) -> Option<usize> {
        match &self.response {
            Response::Polynomial { coefficients } => Some(coefficients.len()),
            _ => None,
        }
    }

    /// `h(lambda)` at a real frequency.
    pub fn evaluate_real(&self, lambda: f64) -> Result<f64> {
        self.check_domain(Complex64::new(lambda, 0.0))?;
        Ok(self.response_real(lambda))
    }

    /// `h(lambda)` at a possibly complex eigenvalue. Only polynomial responses
    /// extend to complex frequencies; the others reject non-real input.
    pub fn evaluate(&self, lambda: Complex64) -> Result<Complex64> {
        self.check_domain(lambda)?;
        match &self.response {
            Response::Polynomial { coefficients } => {
                Ok(coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * lambda + c))
            }
            _ => Ok(Complex64::new(self.response_real(lambda.re), 0.0)),
        }
    }

    fn check_domain(&self, lambda: Complex64) -> Result<()> {
        let (lo, hi) = self.interval;
        let slack = DOMAIN_TOL * lambda.norm().max(1.0);
        let real_required = !matches!(self.response, Response::Polynomial { .. });
        let tikhonov_pole = matches!(self.response, Response::Tikhonov { gamma } if (1.0 + gamma * lambda.re).abs() <= slack);
        if lambda.re < lo - slack || lambda.re > hi + slack || (real_required && lambda.im.abs() > slack) || tikhonov_pole {
            return Err(GspError::KernelDomain { re: lambda.re, im: lambda.im, lo, hi });
        }
        Ok(())
    }

    fn response_real(&self, lambda: f64) -> f64 {
        match &self.response {
            Response::IdealLowPass { cutoff } => {
                if lambda <= cutoff + CUTOFF_TOL {
                    1.0
                } else {
                    0.0
                }
            }
            Response::IdealHighPass { cutoff } => {
                if lambda <= cutoff + CUTOFF_TOL {
                    0.0
                } else {
                    1.0
                }
            }
            Response::Heat { t } => (-t * lambda).exp(),
            Response::Tikhonov { gamma } => 1.0 / (1.0 + gamma * lambda),
            Response::Polynomial { coefficients } => coefficients.iter().rev().fold(0.0, |acc, &c| acc * lambda + c),
            Response::Custom { points } => interpolate(points, lambda),
        }
    }
}

fn interpolate(points: &[(f64, f64)], x: f64) -> f64 {
    let first = points[0];
    let last = points[points.len() - 1];
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let hi = points.partition_point(|p| p.0 < x);
    let (x0, y0) = points[hi - 1];
    let (x1, y1) = points[hi];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// `V diag(h(lambda_k)) F s`: forward transform, pointwise gain, inverse.
pub fn apply_exact(basis: &SpectralBasis, kernel: &FilterKernel, s: &GraphSignal) -> Result<GraphSignal> {
    check_len(s.len(), basis.dim())?;
    if let Some(len) = kernel.polynomial_len() {
        check_degree(len, basis.dim())?;
    }
    let gains = basis.eigenvalues().iter().map(|&l| kernel.evaluate(l)).collect::<Result<Vec<_>>>()?;
    let shat = gft(basis, s)?;
    let filtered: Vec<Complex64> = shat.values().iter().zip(&gains).map(|(x, h)| x * h).collect();
    igft(basis, &GraphSignal::from_vec_unchecked(filtered))
}

/// Full matrix `V diag(h(lambda_k)) F` of the exact spectral filter.
pub fn exact_matrix(basis: &SpectralBasis, kernel: &FilterKernel) -> Result<DMatrix<Complex64>> {
    let gains = basis.eigenvalues().iter().map(|&l| kernel.evaluate(l)).collect::<Result<Vec<_>>>()?;
    let h = DMatrix::from_diagonal(&DVector::from_vec(gains));
    Ok(basis.vectors() * h * basis.forward())
}

fn check_degree(coefficients: usize, n: usize) -> Result<()> {
    if coefficients > n {
        return Err(GspError::DegreeTooHigh { coefficients, n });
    }
    Ok(())
}

/// `sum_m h_m A^m s` by Horner's rule: one mat-vec per degree, no matrix
/// powers formed.
pub fn apply_polynomial(op: &ShiftOperator, coeffs: &[f64], s: &GraphSignal) -> Result<GraphSignal> {
    let n = op.dim();
    check_len(s.len(), n)?;
    if coeffs.is_empty() {
        return Err(GspError::InvalidParameter("polynomial needs at least one coefficient".into()));
    }
    check_degree(coeffs.len(), n)?;
    let x = s.values();
    let top = coeffs[coeffs.len() - 1];
    let mut acc: Vec<Complex64> = x.iter().map(|v| v * top).collect();
    let mut tmp = vec![Complex64::new(0.0, 0.0); n];
    for &h in coeffs.iter().rev().skip(1) {
        op.apply_complex(&acc, &mut tmp);
        for ((a, t), xi) in acc.iter_mut().zip(&tmp).zip(x) {
            *a = t + xi * h;
        }
    }
    Ok(GraphSignal::from_vec_unchecked(acc))
}

/// Dense matrix `h(A)` of a polynomial filter.
pub fn polynomial_matrix(op: &ShiftOperator, coeffs: &[f64]) -> Result<DMatrix<f64>> {
    let n = op.dim();
    if coeffs.is_empty() {
        return Err(GspError::InvalidParameter("polynomial needs at least one coefficient".into()));
    }
    check_degree(coeffs.len(), n)?;
    let a = op.to_dense();
    let identity = DMatrix::<f64>::identity(n, n);
    let mut h = &identity * coeffs[coeffs.len() - 1];
    for &c in coeffs.iter().rev().skip(1) {
        h = &a * h + &identity * c;
    }
    Ok(h)
}

/// True iff `||A H - H A||_F <= tol ||A||_F ||H||_F`.
pub fn check_shift_invariance(op: &ShiftOperator, h: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let n = op.dim();
    if h.nrows() != n || h.ncols() != n {
        return Err(GspError::DimensionMismatch { expected: n, got: if h.nrows() != n { h.nrows() } else { h.ncols() } });
    }
    let a = op.to_dense();
    let commutator = &a * h - h * &a;
    Ok(commutator.norm() <= tol * a.norm() * h.norm())
}

/// A concrete way of running a filter on a signal.
#[derive(Debug, Clone, Copy)]
pub enum GraphFilter<'a> {
    Spectral { basis: &'a SpectralBasis, kernel: &'a FilterKernel },
    Polynomial(&'a [f64]),
    Chebyshev(&'a ChebyshevFilter),
}

impl GraphFilter<'_> {
    pub fn apply(&self, op: &ShiftOperator, s: &GraphSignal) -> Result<GraphSignal> {
        match self {
            GraphFilter::Spectral { basis, kernel } => apply_exact(basis, kernel, s),
            GraphFilter::Polynomial(coeffs) => apply_polynomial(op, coeffs, s),
            GraphFilter::Chebyshev(f) => f.apply(op, s),
        }
    }
}

/// The filter applied to the unit impulse at node `i`.
pub fn impulse_response(op: &ShiftOperator, filter: GraphFilter<'_>, i: usize) -> Result<GraphSignal> {
    let e = GraphSignal::impulse(op.dim(), i)?;
    filter.apply(op, &e)
}
