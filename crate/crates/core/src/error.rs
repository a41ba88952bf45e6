use thiserror::Error;

/// Every failure surfaced by the library.
///
/// Variants fall into two families: structural/input problems (bad indices,
/// malformed files, mismatched lengths) and numeric/model problems (defective
/// spectra, kernels evaluated outside their domain, non-unique sampling).
/// [`GspError::is_numeric`] tells them apart, which the CLI maps to exit codes.
#[derive(Debug, Error)]
pub enum GspError {
    #[error("node index {index} out of range for graph with {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({src}, {dst})")]
    DuplicateEdge { src: usize, dst: usize },
    #[error("undirected edge ({src}, {dst}) given with conflicting weights {forward} and {backward}")]
    AsymmetricWeight {
        src: usize,
        dst: usize,
        forward: f64,
        backward: f64,
    },
    #[error("negative weight {weight} on undirected edge ({src}, {dst})")]
    NegativeWeight { src: usize, dst: usize, weight: f64 },
    #[error("non-finite weight on edge ({src}, {dst})")]
    NonFiniteWeight { src: usize, dst: usize },
    #[error("graph needs at least {min} nodes, got {got}")]
    TooSmall { min: usize, got: usize },
    #[error("duplicate points {0} and {1}")]
    DuplicatePoints(usize, usize),
    #[error("k = {k} needs at least {needed} points, got {got}")]
    KTooLarge { k: usize, needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Laplacian shifts are only defined for undirected graphs")]
    DirectedLaplacian,
    #[error("node {0} has zero degree; normalized Laplacian undefined")]
    IsolatedNode(usize),
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigenvector matrix is numerically singular or inexact (cond = {cond:.3e}); shift is not diagonalizable")]
    Defective { cond: f64 },
    #[error("operator of size {n} exceeds dense eigensolver limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("adjacency spectral radius is zero")]
    ZeroSpectralRadius,
    #[error("signal has zero norm")]
    ZeroVector,
    #[error("eigenvalue {re}{im:+}i lies outside the kernel domain [{lo}, {hi}]")]
    KernelDomain { re: f64, im: f64, lo: f64, hi: f64 },
    #[error("polynomial with {coefficients} coefficients exceeds the degree bound for {n} nodes")]
    DegreeTooHigh { coefficients: usize, n: usize },
    #[error("invalid Chebyshev interval upper bound {0}")]
    InvalidInterval(f64),
    #[error("operator spectrum (estimate {estimate}) exceeds Chebyshev bound {bound}")]
    SpectrumExceedsBound { estimate: f64, bound: f64 },
    #[error("operation requires a symmetric shift operator")]
    NotSymmetric,
    #[error("sample count {m} is below the bandwidth {k}")]
    TooFewSamples { m: usize, k: usize },
    #[error("sampling set does not determine the bandlimited signal uniquely (sigma_min = {sigma_min:.3e})")]
    NotUnique { sigma_min: f64 },
    #[error("non-finite value in signal at node {0}")]
    NonFiniteSignal(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl GspError {
    /// True for numeric/model failures, false for input and structural ones.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            GspError::Defective { .. }
                | GspError::TooLarge { .. }
                | GspError::ZeroSpectralRadius
                | GspError::ZeroVector
                | GspError::KernelDomain { .. }
                | GspError::DegreeTooHigh { .. }
                | GspError::InvalidInterval(_)
                | GspError::SpectrumExceedsBound { .. }
                | GspError::NotSymmetric
                | GspError::TooFewSamples { .. }
                | GspError::NotUnique { .. }
                | GspError::DirectedLaplacian
                | GspError::IsolatedNode(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, GspError>;
