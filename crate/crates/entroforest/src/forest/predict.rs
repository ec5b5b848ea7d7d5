//! Forest prediction: majority vote for classification, mixture-of-KDEs
//! log-density and averaged leaf means for regression.

use rand::Rng;

use crate::error::{Error, Result};

use super::kde::kde_log_density;
use super::{Forest, KdeLeaf, LeafPayload, TaskInfo};

impl Forest {
    fn check_features(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.num_features {
            return Err(Error::domain(format!(
                "feature vector length {} does not match model ({})",
                x.len(),
                self.num_features
            )));
        }
        Ok(())
    }

    /// Majority vote over the per-tree leaf labels; ties are broken
    /// uniformly at random from `rng`.
    pub fn predict_class<R: Rng>(&self, x: &[f64], rng: &mut R) -> Result<usize> {
        let num_classes = match &self.task {
            TaskInfo::Classification { num_classes, .. } => *num_classes,
            TaskInfo::Regression { .. } => {
                return Err(Error::domain(
                    "predict_class called on a regression forest",
                ))
            }
        };
        self.check_features(x)?;
        let mut votes = vec![0usize; num_classes];
        for tree in &self.trees {
            match tree.route(x) {
                LeafPayload::Classification { label } => votes[*label] += 1,
                LeafPayload::Regression(_) => {
                    return Err(Error::Format(
                        "classification forest contains a regression leaf".into(),
                    ))
                }
            }
        }
        let top = *votes.iter().max().expect("at least one class");
        let tied: Vec<usize> = (0..num_classes).filter(|&k| votes[k] == top).collect();
        Ok(if tied.len() == 1 {
            tied[0]
        } else {
            tied[rng.gen_range(0..tied.len())]
        })
    }

    fn regression_leaves(&self, x: &[f64]) -> Result<Vec<&KdeLeaf>> {
        if !matches!(self.task, TaskInfo::Regression { .. }) {
            return Err(Error::domain(
                "regression prediction called on a classification forest",
            ));
        }
        self.check_features(x)?;
        self.trees
            .iter()
            .map(|tree| match tree.route(x) {
                LeafPayload::Regression(leaf) => Ok(leaf),
                LeafPayload::Classification { .. } => Err(Error::Format(
                    "regression forest contains a classification leaf".into(),
                )),
            })
            .collect()
    }

    /// De-standardized average of the per-tree leaf means.
    pub fn predict_regression(&self, x: &[f64]) -> Result<Vec<f64>> {
        let leaves = self.regression_leaves(x)?;
        let d = match &self.task {
            TaskInfo::Regression { output_dim } => *output_dim,
            _ => unreachable!(),
        };
        let mut mean = vec![0.0; d];
        for leaf in &leaves {
            for (m, v) in mean.iter_mut().zip(&leaf.mean) {
                *m += v;
            }
        }
        let t = leaves.len() as f64;
        for m in &mut mean {
            *m /= t;
        }
        Ok(match &self.standardizer {
            Some(s) => s.invert_vec(&mean),
            None => mean,
        })
    }

    /// Log of the uniform mixture of per-tree leaf densities at `y`
    /// (original units): the KDEs are evaluated in standardized target
    /// space and the result is corrected by the log scale sum.
    pub fn log_density(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let leaves = self.regression_leaves(x)?;
        let d = match &self.task {
            TaskInfo::Regression { output_dim } => *output_dim,
            _ => unreachable!(),
        };
        if y.len() != d {
            return Err(Error::domain(format!(
                "target vector length {} does not match model ({d})",
                y.len()
            )));
        }
        let y_std = match &self.standardizer {
            Some(s) => s.apply_vec(y),
            None => y.to_vec(),
        };
        let log_densities: Result<Vec<f64>> = leaves
            .iter()
            .map(|leaf| kde_log_density(leaf, &y_std))
            .collect();
        let log_densities = log_densities?;
        let max = log_densities
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = log_densities.iter().map(|v| (v - max).exp()).sum();
        let mixture = max + sum.ln() - (log_densities.len() as f64).ln();
        let correction = self
            .standardizer
            .as_ref()
            .map(|s| s.log_scale_sum())
            .unwrap_or(0.0);
        Ok(mixture - correction)
    }
}
