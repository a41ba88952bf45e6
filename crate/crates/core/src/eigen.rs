//! Dense eigensolvers and power iteration.
//!
//! Symmetric matrices go through nalgebra's symmetric QR solver. General real
//! matrices get their eigenvalues from the real Schur form and eigenvectors
//! from block inverse iteration in complex arithmetic; eigenvalues that agree
//! to within a relative `CLUSTER_TOL` share one block so a repeated eigenvalue
//! with a full eigenspace yields independent vectors.

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::operator::ShiftOperator;

const CLUSTER_TOL: f64 = 1e-8;
const INVERSE_ITERATIONS: usize = 3;
/// Entries below this magnitude are skipped when fixing eigenvector signs.
pub(crate) const SIGN_TOL: f64 = 1e-9;

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending, eigenvectors
/// orthonormal with canonical sign.
pub(crate) fn symmetric(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(k).clone_owned();
        if let Some(first) = v.iter().find(|x| x.abs() > SIGN_TOL) {
            if *first < 0.0 {
                v.neg_mut();
            }
        }
        vectors.set_column(col, &v);
    }
    (values, vectors)
}

/// Eigenvalues of a general real matrix via the real Schur form, or `None`
/// if the QR iteration does not converge. Francis steps can stall on
/// orthogonal matrices such as cyclic permutations, so on failure the
/// transpose and a few diagonally shifted copies are tried.
pub(crate) fn complex_eigenvalues(m: &DMatrix<f64>) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    let max_iter = 100 * n.max(10);
    let scale = m.norm().max(1.0) / (n.max(1) as f64).sqrt();
    for shift in [0.0, 0.3125, -0.4375] {
        let offset = shift * scale;
        let a = m + DMatrix::<f64>::identity(n, n) * offset;
        let found = [a.clone(), a.transpose()]
            .into_iter()
            .find_map(|b| Schur::try_new(b, f64::EPSILON, max_iter));
        if let Some(schur) = found {
            return Some(schur.complex_eigenvalues().iter().map(|l| l - offset).collect());
        }
    }
    None
}

/// Eigenpairs of a general real matrix. Eigenvalues are sorted by
/// `(re, im)`; eigenvectors have unit 2-norm and their first significant
/// entry rotated onto the positive real axis.
pub(crate) fn general(m: &DMatrix<f64>) -> Option<(Vec<Complex64>, DMatrix<Complex64>)> {
    let n = m.nrows();
    let mut values = complex_eigenvalues(m)?;
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let scale = m.norm().max(1.0);
    let mc: DMatrix<Complex64> = m.map(|x| Complex64::new(x, 0.0));
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9);

    let mut start = 0;
    while start < n {
        let anchor = values[start];
        let mut end = start + 1;
        while end < n && (values[end] - anchor).norm() <= CLUSTER_TOL * scale {
            end += 1;
        }
        let size = end - start;
        let mean = values[start..end].iter().sum::<Complex64>() / size as f64;
        // Complex offset keeps the shifted matrix nonsingular for real spectra.
        let sigma = mean + Complex64::new(1e-10, 1e-10) * scale;
        let mut shifted = mc.clone();
        for i in 0..n {
            shifted[(i, i)] -= sigma;
        }
        let lu = shifted.lu();
        let mut block = DMatrix::<Complex64>::from_fn(n, size, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        for _ in 0..INVERSE_ITERATIONS {
            if let Some(x) = lu.solve(&block) {
                block = x;
            }
            orthonormalize(&mut block);
        }
        for c in 0..size {
            let mut v = block.column(c).clone_owned();
            canonical_phase(v.as_mut_slice());
            vectors.set_column(start + c, &v);
        }
        start = end;
    }
    Some((values, vectors))
}

/// Modified Gram-Schmidt on the columns, in place.
fn orthonormalize(block: &mut DMatrix<Complex64>) {
    for c in 0..block.ncols() {
        for p in 0..c {
            let proj = block.column(p).dotc(&block.column(c));
            let prev = block.column(p).clone_owned();
            block.column_mut(c).axpy(-proj, &prev, Complex64::new(1.0, 0.0));
        }
        let norm = block.column(c).norm();
        if norm > 0.0 {
            block.column_mut(c).unscale_mut(norm);
        }
    }
}

/// Normalizes to unit 2-norm and rotates so the first entry with modulus
/// above `SIGN_TOL` is real and positive.
pub(crate) fn canonical_phase(v: &mut [Complex64]) {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let rot = v
        .iter()
        .find(|x| x.norm() / norm > SIGN_TOL)
        .map(|x| x.conj() / x.norm())
        .unwrap_or(Complex64::new(1.0, 0.0));
    for x in v.iter_mut() {
        *x = *x * rot / norm;
    }
}

/// Power iteration on a symmetric operator; returns the Rayleigh quotient
/// estimate of the eigenvalue of largest modulus.
pub fn power_iteration(op: &ShiftOperator, max_iter: usize, seed: u64) -> f64 {
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut y = vec![0.0; n];
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nx = norm(&x);
    x.iter_mut().for_each(|a| *a /= nx);
    let mut estimate = 0.0;
    for _ in 0..max_iter {
        op.apply_real(&x, &mut y);
        let rq: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let ny = norm(&y);
        if ny == 0.0 {
            return 0.0;
        }
        for (a, b) in x.iter_mut().zip(&y) {
            *a = b / ny;
        }
        let converged = (rq - estimate).abs() <= 1e-12 * rq.abs().max(1e-300);
        estimate = rq;
        if converged {
            break;
        }
    }
    estimate
}
