//! Bandlimited signals: sampling-set selection, reconstruction from samples,
//! and outlier detection by high-pass filtering.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{GspError, Result};
use crate::filter::{apply_exact, FilterKernel, Response};
use crate::operator::ShiftOperator;
use crate::signal::{check_len, GraphSignal};
use crate::spectral::{eigendecompose, SpectralBasis};

/// Regularization added to the sampled Gram matrix in the log-det criterion.
pub const LOGDET_EPSILON: f64 = 1e-12;
/// Smallest singular value of the sampled eigenvector block that still
/// counts as full column rank.
pub const UNIQUENESS_TOL: f64 = 1e-9;
/// Greedy scores within this relative distance of the best are tied.
const SCORE_TIE_TOL: f64 = 1e-9;

/// Signals spanned by the first `K` ordered spectral components.
#[derive(Debug, Clone)]
pub struct BandlimitedModel {
    bandwidth: usize,
    columns: Vec<usize>,
    /// N x K, columns in frequency order.
    vk: DMatrix<f64>,
}

impl BandlimitedModel {
    /// Requires a real orthonormal basis, i.e. one from a symmetric shift.
    pub fn new(basis: &SpectralBasis, bandwidth: usize) -> Result<BandlimitedModel> {
        let n = basis.dim();
        if bandwidth == 0 || bandwidth > n {
            return Err(GspError::InvalidParameter(format!("bandwidth must lie in 1..={n}, got {bandwidth}")));
        }
        let v = basis.real_vectors().ok_or(GspError::NotSymmetric)?;
        let columns: Vec<usize> = basis.ordering()[..bandwidth].to_vec();
        let vk = DMatrix::from_fn(n, bandwidth, |i, k| v[(i, columns[k])]);
        Ok(BandlimitedModel { bandwidth, columns, vk })
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn dim(&self) -> usize {
        self.vk.nrows()
    }

    /// Basis columns (solver order) of the retained frequencies.
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn vk(&self) -> &DMatrix<f64> {
        &self.vk
    }

    /// Rows of `V_K` at the given nodes, i.e. `M V_K`.
    pub fn sampled(&self, nodes: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(nodes.len(), self.bandwidth, |r, k| self.vk[(nodes[r], k)])
    }
}

/// Sorted, duplicate-free set of sampled nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSet {
    nodes: Vec<usize>,
    selection_order: Vec<usize>,
    scores: Vec<f64>,
}

impl SamplingSet {
    pub fn new(mut nodes: Vec<usize>, n: usize) -> Result<SamplingSet> {
        if nodes.is_empty() {
            return Err(GspError::InvalidParameter("sampling set must not be empty".into()));
        }
        if let Some(&index) = nodes.iter().find(|&&i| i >= n) {
            return Err(GspError::IndexOutOfRange { index, n });
        }
        let selection_order = nodes.clone();
        nodes.sort_unstable();
        if let Some(w) = nodes.windows(2).find(|w| w[0] == w[1]) {
            return Err(GspError::InvalidParameter(format!("node {} sampled twice", w[0])));
        }
        Ok(SamplingSet { nodes, selection_order, scores: Vec::new() })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in the order the greedy selection picked them.
    pub fn selection_order(&self) -> &[usize] {
        &self.selection_order
    }

    /// `log det(V_K^T M^T M V_K + eps I)` after each greedy step; empty for
    /// sets not produced by [`greedy_select`].
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }
}

/// Greedy D-optimal selection: each step adds the node that maximizes
/// `log det(V_K^T M^T M V_K + eps I)`, lowest index on ties.
///
/// By the determinant lemma the gain of adding row `r` is
/// `log(1 + r^T (G + eps I)^{-1} r)`, evaluated through the eigenpairs of the
/// current K x K Gram matrix `G`.
pub fn greedy_select(model: &BandlimitedModel, m: usize) -> Result<SamplingSet> {
    let n = model.dim();
    let k = model.bandwidth;
    if m < k {
        return Err(GspError::TooFewSamples { m, k });
    }
    if m > n {
        return Err(GspError::InvalidParameter(format!("cannot sample {m} of {n} nodes")));
    }
    let mut gram = DMatrix::<f64>::zeros(k, k);
    let mut taken = vec![false; n];
    let mut order = Vec::with_capacity(m);
    let mut scores = Vec::with_capacity(m);
    let mut logdet = k as f64 * LOGDET_EPSILON.ln();

    for _ in 0..m {
        let eig = SymmetricEigen::new(gram.clone());
        // Eigenvalues at rounding level belong to the null space of G.
        let floor = 1e-13 * gram.trace().max(f64::MIN_POSITIVE);
        let weights: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&mu| 1.0 / (if mu <= floor { 0.0 } else { mu } + LOGDET_EPSILON))
            .collect();
        let gain = |i: usize| -> f64 {
            let row = model.vk.row(i);
            (0..k)
                .map(|c| {
                    let proj = row.iter().zip(eig.eigenvectors.column(c).iter()).map(|(a, b)| a * b).sum::<f64>();
                    proj * proj * weights[c]
                })
                .sum()
        };
        let candidates: Vec<(usize, f64)> = (0..n).filter(|&i| !taken[i]).map(|i| (i, gain(i))).collect();
        let best = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        let &(pick, score) = candidates
            .iter()
            .find(|c| c.1 >= best - SCORE_TIE_TOL * best.abs())
            .expect("at least one candidate remains");
        taken[pick] = true;
        order.push(pick);
        logdet += score.ln_1p();
        scores.push(logdet);
        let row = model.vk.row(pick).transpose();
        gram += &row * row.transpose();
    }

    let mut set = SamplingSet::new(order, n)?;
    set.scores = scores;
    Ok(set)
}

/// Smallest singular value of `M V_K` (zero when fewer rows than `K`).
pub fn sampled_sigma_min(model: &BandlimitedModel, set: &SamplingSet) -> f64 {
    if set.len() < model.bandwidth {
        return 0.0;
    }
    model.sampled(set.nodes()).svd(false, false).singular_values.min()
}

/// True iff the sampled eigenvector block has full column rank.
pub fn uniqueness_check(model: &BandlimitedModel, set: &SamplingSet) -> bool {
    sampled_sigma_min(model, set) > UNIQUENESS_TOL
}

/// Least-squares reconstruction `V_K (M V_K)^+ y`.
///
/// `samples[r]` is the observed value at `set.nodes()[r]`.
pub fn reconstruct(model: &BandlimitedModel, set: &SamplingSet, samples: &[f64]) -> Result<GraphSignal> {
    check_len(samples.len(), set.len())?;
    if let Some(&index) = set.nodes().iter().find(|&&i| i >= model.dim()) {
        return Err(GspError::IndexOutOfRange { index, n: model.dim() });
    }
    let sigma_min = sampled_sigma_min(model, set);
    if sigma_min <= UNIQUENESS_TOL {
        return Err(GspError::NotUnique { sigma_min });
    }
    let svd = model.sampled(set.nodes()).svd(true, true);
    let y = DVector::from_column_slice(samples);
    let coeffs = svd.solve(&y, 0.0).map_err(|e| GspError::InvalidParameter(e.to_string()))?;
    let s = &model.vk * coeffs;
    GraphSignal::from_real(s.as_slice())
}

/// `||M s - y||_2`: misfit of a reconstructed signal at the sampled nodes.
pub fn sample_residual(set: &SamplingSet, s: &GraphSignal, samples: &[f64]) -> Result<f64> {
    check_len(samples.len(), set.len())?;
    let values = s.values();
    Ok(set
        .nodes()
        .iter()
        .zip(samples)
        .map(|(&i, y)| (values[i] - Complex64::new(*y, 0.0)).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// `V_K c` with `c` i.i.d. standard normal from a seeded generator.
pub fn random_bandlimited(model: &BandlimitedModel, seed: u64) -> GraphSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = DVector::from_fn(model.bandwidth, |_, _| rng.sample::<f64, _>(StandardNormal));
    let s = &model.vk * c;
    GraphSignal::from_real(s.as_slice()).expect("finite combination of eigenvectors")
}

/// Nodes whose ideal high-pass residual exceeds `tau` standard deviations.
///
/// The residual `r` keeps the frequencies above `cutoff`; node `i` is flagged
/// when `|r_i| > tau * std(r)`. A residual that vanishes to rounding level
/// flags nothing.
pub fn detect_outliers(op: &ShiftOperator, s: &GraphSignal, cutoff: f64, tau: f64) -> Result<Vec<usize>> {
    if !op.is_symmetric() {
        return Err(GspError::NotSymmetric);
    }
    let basis = eigendecompose(op)?;
    detect_outliers_with_basis(&basis, s, cutoff, tau)
}

/// [`detect_outliers`] with a precomputed basis.
pub fn detect_outliers_with_basis(basis: &SpectralBasis, s: &GraphSignal, cutoff: f64, tau: f64) -> Result<Vec<usize>> {
    if !basis.is_orthonormal() {
        return Err(GspError::NotSymmetric);
    }
    if !(tau > 0.0) {
        return Err(GspError::InvalidParameter(format!("threshold must be positive, got {tau}")));
    }
    check_len(s.len(), basis.dim())?;
    let kernel = FilterKernel::new(Response::IdealHighPass { cutoff })?;
    let r = apply_exact(basis, &kernel, s)?.re();
    let n = r.len() as f64;
    let mean = r.iter().sum::<f64>() / n;
    let sigma = (r.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    let rms_input = s.norm2() / n.sqrt();
    if sigma <= 1e-10 * rms_input || sigma == 0.0 {
        return Ok(Vec::new());
    }
    Ok(r.iter().enumerate().filter(|(_, x)| x.abs() > tau * sigma).map(|(i, _)| i).collect())
}
