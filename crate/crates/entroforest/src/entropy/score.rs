//! The split score used during tree induction, and the exact multinomial
//! information gain that serves as simulation ground truth.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::TargetMatrix;

use super::{
    differential_entropy, discrete_entropy, ClassHistogram, EntropyEstimate, EstimatorKind,
};

/// One side of a candidate partition: class counts for classification,
/// target vectors for regression.
#[derive(Debug, Clone, Copy)]
pub enum SplitSide<'a> {
    Discrete(&'a ClassHistogram),
    Continuous(&'a TargetMatrix),
}

impl SplitSide<'_> {
    pub fn count(&self) -> usize {
        match self {
            SplitSide::Discrete(h) => h.n() as usize,
            SplitSide::Continuous(m) => m.n(),
        }
    }
}

/// Negated weighted child-entropy sum
/// -( |L|/n H(L) + |R|/n H(R) ).
///
/// An empty side contributes exactly zero regardless of the estimator; if
/// any evaluated side is flagged degenerate the flag propagates to the
/// score.
pub fn split_score<R: Rng>(
    left: SplitSide,
    right: SplitSide,
    kind: &EstimatorKind,
    rng: &mut R,
) -> Result<EntropyEstimate> {
    if matches!(
        (&left, &right),
        (SplitSide::Discrete(_), SplitSide::Continuous(_))
            | (SplitSide::Continuous(_), SplitSide::Discrete(_))
    ) {
        return Err(Error::config("split sides have mixed target modalities"));
    }
    let total = left.count() + right.count();
    if total == 0 {
        return Err(Error::EmptySample);
    }

    let mut score = 0.0;
    let mut degenerate = false;
    for side in [left, right] {
        let count = side.count();
        if count == 0 {
            continue; // zero weight overrides the estimator
        }
        let weight = count as f64 / total as f64;
        let estimate = match side {
            SplitSide::Discrete(h) => EntropyEstimate {
                value: discrete_entropy(h, kind)?,
                degenerate: false,
            },
            SplitSide::Continuous(m) => differential_entropy(m, kind, rng)?,
        };
        score -= weight * estimate.value;
        degenerate |= estimate.degenerate;
    }
    Ok(EntropyEstimate {
        value: score,
        degenerate,
    })
}

/// A K x 2 joint probability table p(y = k, b in {L, R}).
#[derive(Debug, Clone, PartialEq)]
pub struct JointClassSplitDistribution {
    rows: Vec<[f64; 2]>,
}

impl JointClassSplitDistribution {
    /// Validates non-negativity and normalization to within 1e-9.
    pub fn new(rows: Vec<[f64; 2]>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::domain("joint table has no classes"));
        }
        let mut total = 0.0;
        for (k, row) in rows.iter().enumerate() {
            for &p in row {
                if !(p >= 0.0) || !p.is_finite() {
                    return Err(Error::domain(format!(
                        "invalid probability {p} for class {k}"
                    )));
                }
                total += p;
            }
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "joint table sums to {total}, not 1"
            )));
        }
        Ok(Self { rows })
    }

    /// Build from a class marginal pi and per-class left probabilities q.
    pub fn from_marginal_and_left_prob(pi: &[f64], q: &[f64]) -> Result<Self> {
        if pi.len() != q.len() {
            return Err(Error::domain("marginal and left-probability lengths differ"));
        }
        if let Some(bad) = q.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::domain(format!("left probability {bad} outside [0, 1]")));
        }
        let rows = pi
            .iter()
            .zip(q)
            .map(|(&p, &ql)| [p * ql, p * (1.0 - ql)])
            .collect();
        Self::new(rows)
    }

    pub fn num_classes(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[[f64; 2]] {
        &self.rows
    }

    /// Class marginal p(y).
    pub fn class_marginal(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0] + r[1]).collect()
    }

    /// Branch marginal p(b).
    pub fn branch_marginal(&self) -> [f64; 2] {
        let mut out = [0.0; 2];
        for row in &self.rows {
            out[0] += row[0];
            out[1] += row[1];
        }
        out
    }
}

fn entropy_of(probs: impl Iterator<Item = f64>) -> f64 {
    let mut h = 0.0;
    for p in probs {
        if p > 0.0 {
            h -= p * p.ln();
        }
    }
    h
}

/// Exact mutual information H(y) - sum_b p(b) H(y | b) of the joint table,
/// in nats. Always in [0, log K].
pub fn multinomial_info_gain_exact(joint: &JointClassSplitDistribution) -> f64 {
    let parent = entropy_of(joint.class_marginal().into_iter());
    let branch = joint.branch_marginal();
    let mut conditional = 0.0;
    for (b, &pb) in branch.iter().enumerate() {
        if pb <= 0.0 {
            continue;
        }
        conditional += pb * entropy_of(joint.rows().iter().map(|r| r[b] / pb));
    }
    (parent - conditional).max(0.0)
}
