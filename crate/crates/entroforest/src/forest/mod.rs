//! Greedy tree induction with pluggable entropy estimators, majority-class
//! and kernel-density leaf models, forest training, prediction and model
//! serialization.

mod kde;
mod predict;
mod serial;
mod train;

use serde::{Deserialize, Serialize};

use crate::data::Standardizer;
use crate::entropy::EstimatorKind;
use crate::error::{Error, Result};

pub use kde::{fit_kde_leaf, kde_log_density, KdeLeaf};
pub use serial::{deserialize_forest, serialize_forest, FORMAT_VERSION};
pub use train::{grow_tree, partition, propose_split, select_best_split, train_forest};

/// An axis-aligned threshold test x_a <= b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitCandidate {
    pub feature: usize,
    pub threshold: f64,
}

/// What a leaf predicts: a class label, or a kernel density over the
/// training targets that reached it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafPayload {
    Classification { label: usize },
    Regression(KdeLeaf),
}

/// A binary decision tree node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        split: SplitCandidate,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        payload: LeafPayload,
    },
}

impl TreeNode {
    /// Follow threshold tests down to the leaf for feature vector `x`.
    pub fn route(&self, x: &[f64]) -> &LeafPayload {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { payload } => return payload,
                TreeNode::Internal { split, left, right } => {
                    node = if x[split.feature] <= split.threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

/// The prediction task a forest was trained for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskInfo {
    Classification {
        num_classes: usize,
        /// Original label strings by class index (empty when unknown).
        labels: Vec<String>,
    },
    Regression {
        output_dim: usize,
    },
}

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Number of trees in the ensemble.
    pub n_trees: usize,
    /// Number of split candidates T scored at each node.
    pub n_tests: usize,
    /// Nodes with fewer samples become leaves.
    pub min_samples_split: usize,
    /// Candidates leaving a side smaller than this are rejected.
    pub min_samples_leaf: usize,
    /// Optional depth cap; the root is at depth 0.
    pub max_depth: Option<usize>,
    /// Entropy estimator scoring the candidates.
    pub estimator: EstimatorKind,
    /// Ridge added to the leaf covariance before the bandwidth is derived.
    pub kde_lambda: f64,
    /// Master seed; per-tree seeds derive from it by stream index.
    pub master_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            n_trees: 8,
            n_tests: 256,
            min_samples_split: 1,
            min_samples_leaf: 1,
            max_depth: None,
            estimator: EstimatorKind::Naive,
            kde_lambda: 1e-3,
            master_seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::config("n_trees must be at least 1"));
        }
        if self.n_tests == 0 {
            return Err(Error::config("n_tests must be at least 1"));
        }
        if self.min_samples_leaf == 0 {
            return Err(Error::config("min_samples_leaf must be at least 1"));
        }
        if !(self.kde_lambda >= 0.0) || !self.kde_lambda.is_finite() {
            return Err(Error::config(format!(
                "kde_lambda must be a non-negative real, got {}",
                self.kde_lambda
            )));
        }
        if let EstimatorKind::OneNn { subsample_size } = self.estimator {
            if subsample_size < 2 {
                return Err(Error::config("1-NN subsample size must be at least 2"));
            }
        }
        Ok(())
    }
}

/// A trained ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    pub(crate) trees: Vec<TreeNode>,
    pub(crate) task: TaskInfo,
    pub(crate) num_features: usize,
    pub(crate) standardizer: Option<Standardizer>,
    pub(crate) config: TrainConfig,
}

impl Forest {
    pub fn trees(&self) -> &[TreeNode] {
        &self.trees
    }

    pub fn task(&self) -> &TaskInfo {
        &self.task
    }

    pub fn num_features(&self) -> usize {
        self.num_features
    }

    pub fn standardizer(&self) -> Option<&Standardizer> {
        self.standardizer.as_ref()
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn is_classification(&self) -> bool {
        matches!(self.task, TaskInfo::Classification { .. })
    }
}
