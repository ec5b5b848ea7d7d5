//! Versioned model-file serialization.
//!
//! The document is JSON with a `format_version` gate; readers reject files
//! written by a newer format. Floats round-trip exactly through the
//! shortest-representation encoder.

use serde::{Deserialize, Serialize};

use crate::data::Standardizer;
use crate::error::{Error, Result};

use super::{Forest, LeafPayload, TaskInfo, TrainConfig, TreeNode};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    task: TaskInfo,
    num_features: usize,
    standardizer: Option<Standardizer>,
    config: TrainConfig,
    trees: Vec<TreeNode>,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

/// Serialize a forest to the versioned JSON document.
pub fn serialize_forest(forest: &Forest) -> Result<Vec<u8>> {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        task: forest.task.clone(),
        num_features: forest.num_features,
        standardizer: forest.standardizer.clone(),
        config: forest.config.clone(),
        trees: forest.trees.clone(),
    };
    let mut bytes = serde_json::to_vec_pretty(&file)
        .map_err(|e| Error::Format(format!("serialization failed: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Parse and validate a model document.
pub fn deserialize_forest(bytes: &[u8]) -> Result<Forest> {
    let probe: VersionProbe = serde_json::from_slice(bytes)
        .map_err(|e| Error::Format(format!("malformed model document: {e}")))?;
    if probe.format_version != FORMAT_VERSION {
        return Err(Error::Version {
            found: probe.format_version,
            supported: FORMAT_VERSION,
        });
    }
    let file: ModelFile = serde_json::from_slice(bytes)
        .map_err(|e| Error::Format(format!("malformed model document: {e}")))?;
    let forest = Forest {
        trees: file.trees,
        task: file.task,
        num_features: file.num_features,
        standardizer: file.standardizer,
        config: file.config,
    };
    validate(&forest)?;
    Ok(forest)
}

fn validate(forest: &Forest) -> Result<()> {
    if forest.trees.is_empty() {
        return Err(Error::Format("model has no trees".into()));
    }
    if let (TaskInfo::Regression { output_dim }, Some(std)) =
        (&forest.task, &forest.standardizer)
    {
        if std.dim() != *output_dim {
            return Err(Error::Format(format!(
                "standardizer dimension {} does not match output dimension {output_dim}",
                std.dim()
            )));
        }
    }
    for (t, tree) in forest.trees.iter().enumerate() {
        validate_node(tree, forest, t)?;
    }
    Ok(())
}

fn validate_node(node: &TreeNode, forest: &Forest, tree_index: usize) -> Result<()> {
    match node {
        TreeNode::Internal { split, left, right } => {
            if split.feature >= forest.num_features {
                return Err(Error::Format(format!(
                    "tree {tree_index}: split feature {} out of range ({})",
                    split.feature, forest.num_features
                )));
            }
            if !split.threshold.is_finite() {
                return Err(Error::Format(format!(
                    "tree {tree_index}: non-finite split threshold"
                )));
            }
            validate_node(left, forest, tree_index)?;
            validate_node(right, forest, tree_index)
        }
        TreeNode::Leaf { payload } => match (payload, &forest.task) {
            (
                LeafPayload::Classification { label },
                TaskInfo::Classification { num_classes, .. },
            ) => {
                if label >= num_classes {
                    return Err(Error::Format(format!(
                        "tree {tree_index}: leaf label {label} out of range ({num_classes})"
                    )));
                }
                Ok(())
            }
            (LeafPayload::Regression(leaf), TaskInfo::Regression { output_dim }) => {
                if leaf.targets.dim() != *output_dim || leaf.mean.len() != *output_dim {
                    return Err(Error::Format(format!(
                        "tree {tree_index}: leaf dimension does not match output \
                         dimension {output_dim}"
                    )));
                }
                if leaf.targets.n() == 0 {
                    return Err(Error::Format(format!(
                        "tree {tree_index}: regression leaf stores no samples"
                    )));
                }
                Ok(())
            }
            _ => Err(Error::Format(format!(
                "tree {tree_index}: leaf payload does not match task"
            ))),
        },
    }
}
