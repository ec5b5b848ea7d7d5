//! Kernel density leaf model with a Scott's-rule bandwidth matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{sample_covariance, sym_eigen, PsdMatrix, TargetMatrix};

/// Ridge applied when a zero-lambda leaf covariance turns out singular.
const LAMBDA_FLOOR: f64 = 1e-8;

/// Eigenvalues at or below this are treated as singular.
const SINGULAR_EIG_TOL: f64 = 1e-12;

/// A fitted leaf density: the stored samples, their mean, the bandwidth
/// matrix B = n^{-1/(d+4)} (cov + lambda I)^{1/2} and its cached inverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeLeaf {
    pub targets: TargetMatrix,
    pub mean: Vec<f64>,
    pub bandwidth_sqrt: PsdMatrix,
    pub bandwidth_inv: PsdMatrix,
    pub log_det_b: f64,
    /// True when the lambda floor had to be applied.
    pub degenerate: bool,
}

/// Fit the kernel density leaf for `targets`.
///
/// The covariance is centered (zero for a single sample), regularized by
/// `lambda` on the diagonal, square-rooted and scaled by Scott's factor
/// n^{-1/(d+4)}. A singular regularized covariance (only possible with
/// lambda = 0) falls back to the 1e-8 ridge and flags the leaf.
pub fn fit_kde_leaf(targets: &TargetMatrix, lambda: f64) -> Result<KdeLeaf> {
    let n = targets.n();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::config(format!(
            "kde lambda must be a non-negative real, got {lambda}"
        )));
    }
    let d = targets.dim();
    let covariance = if n >= 2 {
        sample_covariance(targets, true)?
    } else {
        PsdMatrix::zeros(d)
    };

    let mut sigma = covariance.add_diag(lambda);
    let mut eig = sym_eigen(&sigma)?;
    let mut degenerate = false;
    if eig.values.iter().any(|&l| l <= SINGULAR_EIG_TOL) {
        sigma = sigma.add_diag(LAMBDA_FLOOR);
        eig = sym_eigen(&sigma)?;
        degenerate = true;
    }

    let scott = (n as f64).powf(-1.0 / (d as f64 + 4.0));
    let mut sqrt_data = vec![0.0; d * d];
    let mut inv_data = vec![0.0; d * d];
    let mut log_det_b = 0.0;
    let roots: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    for (k, &root) in roots.iter().enumerate() {
        log_det_b += (scott * root).ln();
        for i in 0..d {
            for j in i..d {
                let outer = eig.vector_entry(i, k) * eig.vector_entry(j, k);
                sqrt_data[i * d + j] += scott * root * outer;
                inv_data[i * d + j] += outer / (scott * root);
            }
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            sqrt_data[j * d + i] = sqrt_data[i * d + j];
            inv_data[j * d + i] = inv_data[i * d + j];
        }
    }

    Ok(KdeLeaf {
        targets: targets.clone(),
        mean: targets.mean(),
        bandwidth_sqrt: PsdMatrix::new(d, sqrt_data)?,
        bandwidth_inv: PsdMatrix::new(d, inv_data)?,
        log_det_b,
        degenerate,
    })
}

/// Log of the leaf density
/// p(y) = (1/n) sum_i N(B^{-1}(y - y_i); 0, I) / det B,
/// evaluated through a max-shifted exponential sum.
pub fn kde_log_density(leaf: &KdeLeaf, y: &[f64]) -> Result<f64> {
    let d = leaf.targets.dim();
    if y.len() != d {
        return Err(Error::domain(format!(
            "query dimension {} does not match leaf dimension {d}",
            y.len()
        )));
    }
    let n = leaf.targets.n();
    let mut exponents = Vec::with_capacity(n);
    let mut diff = vec![0.0; d];
    for row in leaf.targets.rows() {
        for j in 0..d {
            diff[j] = y[j] - row[j];
        }
        let u = leaf.bandwidth_inv.mul_vec(&diff);
        let sq: f64 = u.iter().map(|v| v * v).sum();
        exponents.push(-0.5 * sq);
    }
    let max = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = exponents.iter().map(|e| (e - max).exp()).sum();
    const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_7;
    Ok(max + sum.ln() - (n as f64).ln() - leaf.log_det_b - d as f64 * HALF_LN_TWO_PI)
}
