//! Discrete entropy estimators over class histograms: the plug-in estimate,
//! the Miller bias correction, and the Grassberger digamma-based estimator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::digamma;

/// Per-class counts for a K-class problem. The histogram length is the
/// problem's total class count, including classes absent from the sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassHistogram {
    counts: Vec<u64>,
}

impl ClassHistogram {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    /// Count labels into a histogram of `num_classes` bins.
    pub fn from_labels(labels: &[usize], num_classes: usize) -> Result<Self> {
        let mut counts = vec![0u64; num_classes];
        for &label in labels {
            let slot = counts.get_mut(label).ok_or_else(|| {
                Error::domain(format!("label {label} out of range for K = {num_classes}"))
            })?;
            *slot += 1;
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total sample count n.
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Total class count K of the problem.
    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    /// True when every sample belongs to one class (or the histogram is
    /// empty).
    pub fn is_pure(&self) -> bool {
        self.counts.iter().filter(|&&c| c > 0).count() <= 1
    }
}

/// Plug-in entropy estimate log n - (1/n) sum h_k log h_k, with
/// 0 log 0 taken as zero. Always in [0, log K].
pub fn naive_entropy(hist: &ClassHistogram) -> Result<f64> {
    let n = hist.n();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let n = n as f64;
    let sum: f64 = hist
        .counts()
        .iter()
        .filter(|&&h| h > 0)
        .map(|&h| {
            let h = h as f64;
            h * h.ln()
        })
        .sum();
    // Clamp sub-epsilon negatives from the subtraction.
    Ok((n.ln() - sum / n).max(0.0))
}

/// Miller-corrected entropy: the plug-in estimate plus (K-1)/(2n), with K
/// the problem's total class count rather than the number of occupied bins.
pub fn miller_entropy(hist: &ClassHistogram) -> Result<f64> {
    let naive = naive_entropy(hist)?;
    let k = hist.num_classes() as f64;
    let n = hist.n() as f64;
    Ok(naive + (k - 1.0) / (2.0 * n))
}

/// Grassberger's G(h) = psi(h) + (1/2)(-1)^h (psi((h+1)/2) - psi(h/2)).
///
/// Behaves like log h for large h but corrects the small-count bias of the
/// plug-in estimate.
pub fn grassberger_g(h: u64) -> Result<f64> {
    if h == 0 {
        return Err(Error::domain("grassberger_g requires h >= 1"));
    }
    let hf = h as f64;
    let sign = if h % 2 == 0 { 1.0 } else { -1.0 };
    let correction = digamma((hf + 1.0) / 2.0)? - digamma(hf / 2.0)?;
    Ok(digamma(hf)? + 0.5 * sign * correction)
}

/// Grassberger entropy estimate log n - (1/n) sum_{h_k > 0} h_k G(h_k).
///
/// May be negative or exceed log K for very small samples.
pub fn grassberger_entropy(hist: &ClassHistogram) -> Result<f64> {
    let n = hist.n();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut sum = 0.0;
    for &h in hist.counts().iter().filter(|&&h| h > 0) {
        sum += h as f64 * grassberger_g(h)?;
    }
    let n = n as f64;
    Ok(n.ln() - sum / n)
}
