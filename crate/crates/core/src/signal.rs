use num_complex::Complex64;

use crate::error::{GspError, Result};

/// One (possibly complex) value per node. Spectra produced by the graph
/// Fourier transform use the same type, indexed by spectral component.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSignal {
    values: Vec<Complex64>,
}

impl GraphSignal {
    pub fn new(values: Vec<Complex64>) -> Result<GraphSignal> {
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(GspError::NonFiniteSignal(i));
        }
        Ok(GraphSignal { values })
    }

    pub fn from_real(values: &[f64]) -> Result<GraphSignal> {
        GraphSignal::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> GraphSignal {
        GraphSignal { values: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// Unit impulse at node `i`.
    pub fn impulse(n: usize, i: usize) -> Result<GraphSignal> {
        if i >= n {
            return Err(GspError::IndexOutOfRange { index: i, n });
        }
        let mut s = GraphSignal::zeros(n);
        s.values[i] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub(crate) fn from_vec_unchecked(values: Vec<Complex64>) -> GraphSignal {
        GraphSignal { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Real parts.
    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// True when every imaginary part is at most `tol` in magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    pub fn max_abs_diff(&self, other: &GraphSignal) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `||self - other||_2 / ||other||_2`, or the absolute difference when
    /// `other` is zero.
    pub fn relative_error(&self, other: &GraphSignal) -> f64 {
        let diff: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let scale = other.norm2();
        if scale > 0.0 {
            diff / scale
        } else {
            diff
        }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: Complex64, other: &GraphSignal, beta: Complex64) -> Result<GraphSignal> {
        check_len(other.len(), self.len())?;
        Ok(GraphSignal {
            values: self.values.iter().zip(&other.values).map(|(a, b)| alpha * a + beta * b).collect(),
        })
    }
}

pub(crate) fn check_len(got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(GspError::DimensionMismatch { expected, got });
    }
    Ok(())
}
