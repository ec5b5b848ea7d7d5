//! Greedy induction: candidate proposal, partitioning, score-based
//! selection, recursive growth and forest training.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::{fit_standardizer, Dataset, FeatureMatrix, Targets};
use crate::entropy::{
    split_score, ClassHistogram, EntropyEstimate, EstimatorKind, SplitSide,
};
use crate::error::{Error, Result};
use crate::numerics::TargetMatrix;
use crate::seeding::derive_seed;

use super::kde::fit_kde_leaf;
use super::{Forest, LeafPayload, SplitCandidate, TaskInfo, TrainConfig, TreeNode};

/// Borrowed training data: features plus task-typed targets.
#[derive(Clone, Copy)]
pub(crate) enum ViewTargets<'a> {
    Labels {
        labels: &'a [usize],
        num_classes: usize,
    },
    Real(&'a TargetMatrix),
}

#[derive(Clone, Copy)]
pub(crate) struct TrainView<'a> {
    pub features: &'a FeatureMatrix,
    pub targets: ViewTargets<'a>,
}

impl TrainView<'_> {
    fn n(&self) -> usize {
        self.features.n()
    }
}

/// Draw one split candidate: a uniform feature index, with the threshold
/// equal to that coordinate of a uniformly chosen node sample.
pub fn propose_split<R: Rng>(
    features: &FeatureMatrix,
    node: &[usize],
    rng: &mut R,
) -> Result<SplitCandidate> {
    if node.is_empty() {
        return Err(Error::EmptySample);
    }
    let feature = rng.gen_range(0..features.num_features());
    let sample = node[rng.gen_range(0..node.len())];
    Ok(SplitCandidate {
        feature,
        threshold: features.value(sample, feature),
    })
}

/// Partition node samples into (x_a <= b, x_a > b).
pub fn partition(
    features: &FeatureMatrix,
    node: &[usize],
    split: &SplitCandidate,
) -> (Vec<usize>, Vec<usize>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &i in node {
        if features.value(i, split.feature) <= split.threshold {
            left.push(i);
        } else {
            right.push(i);
        }
    }
    (left, right)
}

fn score_partition<R: Rng>(
    view: &TrainView,
    left: &[usize],
    right: &[usize],
    estimator: &EstimatorKind,
    rng: &mut R,
) -> Result<EntropyEstimate> {
    match view.targets {
        ViewTargets::Labels {
            labels,
            num_classes,
        } => {
            let pick = |idx: &[usize]| -> Result<ClassHistogram> {
                let side: Vec<usize> = idx.iter().map(|&i| labels[i]).collect();
                ClassHistogram::from_labels(&side, num_classes)
            };
            let l = pick(left)?;
            let r = pick(right)?;
            split_score(
                SplitSide::Discrete(&l),
                SplitSide::Discrete(&r),
                estimator,
                rng,
            )
        }
        ViewTargets::Real(matrix) => {
            let l = matrix.select_rows(left);
            let r = matrix.select_rows(right);
            split_score(
                SplitSide::Continuous(&l),
                SplitSide::Continuous(&r),
                estimator,
                rng,
            )
        }
    }
}

/// Score `n_tests` proposed candidates and return the first one achieving
/// the strict maximum, or `None` when every candidate was degenerate
/// (empty side, or a side below `min_samples_leaf`).
pub(crate) fn select_best_split_view<R: Rng>(
    view: &TrainView,
    node: &[usize],
    config: &TrainConfig,
    rng: &mut R,
) -> Result<Option<(SplitCandidate, EntropyEstimate)>> {
    // No partition can satisfy the leaf minimum on both sides.
    if node.len() < 2 * config.min_samples_leaf {
        return Ok(None);
    }
    let mut best: Option<(SplitCandidate, EntropyEstimate)> = None;
    for _ in 0..config.n_tests {
        let candidate = propose_split(view.features, node, rng)?;
        let (left, right) = partition(view.features, node, &candidate);
        if left.len() < config.min_samples_leaf || right.len() < config.min_samples_leaf {
            continue; // score of negative infinity
        }
        let score = score_partition(view, &left, &right, &config.estimator, rng)?;
        let improves = match &best {
            None => true,
            Some((_, incumbent)) => score.value > incumbent.value,
        };
        if improves {
            best = Some((candidate, score));
        }
    }
    Ok(best)
}

/// Public wrapper of the selection step for a plain dataset.
pub fn select_best_split<R: Rng>(
    dataset: &Dataset,
    node: &[usize],
    config: &TrainConfig,
    rng: &mut R,
) -> Result<Option<(SplitCandidate, EntropyEstimate)>> {
    let view = dataset_view(dataset);
    select_best_split_view(&view, node, config, rng)
}

fn dataset_view(dataset: &Dataset) -> TrainView<'_> {
    let targets = match &dataset.targets {
        Targets::Classes {
            labels,
            num_classes,
            ..
        } => ViewTargets::Labels {
            labels,
            num_classes: *num_classes,
        },
        Targets::Real(m) => ViewTargets::Real(m),
    };
    TrainView {
        features: &dataset.features,
        targets,
    }
}

fn make_leaf<R: Rng>(
    view: &TrainView,
    node: &[usize],
    config: &TrainConfig,
    rng: &mut R,
) -> Result<TreeNode> {
    let payload = match view.targets {
        ViewTargets::Labels {
            labels,
            num_classes,
        } => {
            let mut counts = vec![0usize; num_classes];
            for &i in node {
                counts[labels[i]] += 1;
            }
            let top = *counts.iter().max().expect("at least one class");
            let tied: Vec<usize> = (0..num_classes).filter(|&k| counts[k] == top).collect();
            let label = if tied.len() == 1 {
                tied[0]
            } else {
                tied[rng.gen_range(0..tied.len())]
            };
            LeafPayload::Classification { label }
        }
        ViewTargets::Real(matrix) => {
            let leaf_targets = matrix.select_rows(node);
            LeafPayload::Regression(fit_kde_leaf(&leaf_targets, config.kde_lambda)?)
        }
    };
    Ok(TreeNode::Leaf { payload })
}

fn node_is_pure(view: &TrainView, node: &[usize]) -> bool {
    match view.targets {
        ViewTargets::Labels { labels, .. } => {
            let first = labels[node[0]];
            node.iter().all(|&i| labels[i] == first)
        }
        ViewTargets::Real(_) => false,
    }
}

fn grow_node<R: Rng>(
    view: &TrainView,
    node: Vec<usize>,
    depth: usize,
    config: &TrainConfig,
    rng: &mut R,
) -> Result<TreeNode> {
    let size_stop = node.len() < config.min_samples_split;
    let depth_stop = config.max_depth.is_some_and(|limit| depth >= limit);
    if !size_stop && !depth_stop && !node_is_pure(view, &node) {
        if let Some((split, _)) = select_best_split_view(view, &node, config, rng)? {
            let (left_idx, right_idx) = partition(view.features, &node, &split);
            let left = grow_node(view, left_idx, depth + 1, config, rng)?;
            let right = grow_node(view, right_idx, depth + 1, config, rng)?;
            return Ok(TreeNode::Internal {
                split,
                left: Box::new(left),
                right: Box::new(right),
            });
        }
    }
    make_leaf(view, &node, config, rng)
}

pub(crate) fn grow_tree_view(
    view: &TrainView,
    config: &TrainConfig,
    tree_seed: u64,
) -> Result<TreeNode> {
    if view.n() == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
    let all: Vec<usize> = (0..view.n()).collect();
    grow_node(view, all, 0, config, &mut rng)
}

/// Grow a single tree over the full dataset with the given seed.
pub fn grow_tree(dataset: &Dataset, config: &TrainConfig, tree_seed: u64) -> Result<TreeNode> {
    config.validate()?;
    check_estimator_modality(dataset, config)?;
    let view = dataset_view(dataset);
    grow_tree_view(&view, config, tree_seed)
}

fn check_estimator_modality(dataset: &Dataset, config: &TrainConfig) -> Result<()> {
    match (&dataset.targets, config.estimator.is_discrete()) {
        (Targets::Classes { .. }, false) => Err(Error::config(format!(
            "estimator {} cannot train a classification forest",
            config.estimator
        ))),
        (Targets::Real(_), true) => Err(Error::config(format!(
            "estimator {} cannot train a regression forest",
            config.estimator
        ))),
        _ => Ok(()),
    }
}

/// Train `n_trees` trees on replicated data; tree t is seeded by a
/// deterministic function of `(master_seed, t)`, so training may run in
/// parallel without losing reproducibility. Regression targets are
/// standardized first and the standardizer stored.
pub fn train_forest(dataset: &Dataset, config: &TrainConfig) -> Result<Forest> {
    config.validate()?;
    if dataset.n() == 0 {
        return Err(Error::EmptySample);
    }
    check_estimator_modality(dataset, config)?;

    let (task, standardizer, owned_targets) = match &dataset.targets {
        Targets::Classes {
            num_classes, names, ..
        } => (
            TaskInfo::Classification {
                num_classes: *num_classes,
                labels: names.clone(),
            },
            None,
            None,
        ),
        Targets::Real(matrix) => {
            let standardizer = fit_standardizer(matrix)?;
            let standardized = standardizer.apply(matrix);
            (
                TaskInfo::Regression {
                    output_dim: matrix.dim(),
                },
                Some(standardizer),
                Some(standardized),
            )
        }
    };

    let view = match (&dataset.targets, &owned_targets) {
        (
            Targets::Classes {
                labels,
                num_classes,
                ..
            },
            _,
        ) => TrainView {
            features: &dataset.features,
            targets: ViewTargets::Labels {
                labels,
                num_classes: *num_classes,
            },
        },
        (Targets::Real(_), Some(standardized)) => TrainView {
            features: &dataset.features,
            targets: ViewTargets::Real(standardized),
        },
        _ => unreachable!("regression targets are standardized above"),
    };

    let seeds: Vec<u64> = (0..config.n_trees)
        .map(|t| derive_seed(config.master_seed, t as u64))
        .collect();
    let trees: Result<Vec<TreeNode>> = seeds
        .par_iter()
        .map(|&seed| grow_tree_view(&view, config, seed))
        .collect();

    Ok(Forest {
        trees: trees?,
        task,
        num_features: dataset.features.num_features(),
        standardizer,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Targets;

    fn class_dataset(features: Vec<Vec<f64>>, labels: Vec<usize>, k: usize) -> Dataset {
        Dataset::new(
            FeatureMatrix::from_rows(&features).unwrap(),
            Targets::Classes {
                labels,
                num_classes: k,
                names: (0..k).map(|i| format!("c{i}")).collect(),
            },
        )
        .unwrap()
    }

    fn separable_dataset(n_each: usize) -> Dataset {
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n_each {
            features.push(vec![i as f64 / n_each as f64]);
            labels.push(0);
            features.push(vec![10.0 + i as f64 / n_each as f64]);
            labels.push(1);
        }
        class_dataset(features, labels, 2)
    }

    #[test]
    fn propose_respects_node_values() {
        let ds = separable_dataset(10);
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let node: Vec<usize> = (0..ds.n()).collect();
        for _ in 0..200 {
            let cand = propose_split(&ds.features, &node, &mut rng).unwrap();
            assert_eq!(cand.feature, 0);
            let values: Vec<f64> = node.iter().map(|&i| ds.features.value(i, 0)).collect();
            assert!(values.contains(&cand.threshold));
        }
    }

    #[test]
    fn propose_single_sample() {
        let ds = separable_dataset(2);
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        let cand = propose_split(&ds.features, &[3], &mut rng).unwrap();
        assert_eq!(cand.threshold, ds.features.value(3, cand.feature));
    }

    #[test]
    fn propose_feature_frequency_uniform() {
        let features: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, -(i as f64), 0.5]).collect();
        let ds = class_dataset(features, vec![0; 20], 1);
        let node: Vec<usize> = (0..20).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        let trials = 10_000;
        let mut counts = [0usize; 3];
        for _ in 0..trials {
            let cand = propose_split(&ds.features, &node, &mut rng).unwrap();
            counts[cand.feature] += 1;
        }
        let p = 1.0 / 3.0;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        for &c in &counts {
            let freq = c as f64 / trials as f64;
            assert!((freq - p).abs() < 3.0 * sigma, "frequency {freq}");
        }
    }

    #[test]
    fn partition_edges() {
        let ds = class_dataset(
            vec![vec![1.0], vec![2.0], vec![3.0], vec![4.0]],
            vec![0, 0, 1, 1],
            2,
        );
        let node = vec![0, 1, 2, 3];
        let split = |b: f64| SplitCandidate {
            feature: 0,
            threshold: b,
        };
        let (l, r) = partition(&ds.features, &node, &split(4.0));
        assert_eq!((l, r), (vec![0, 1, 2, 3], vec![]));
        let (l, r) = partition(&ds.features, &node, &split(0.5));
        assert_eq!((l, r), (vec![], vec![0, 1, 2, 3]));
        let (l, r) = partition(&ds.features, &node, &split(2.0));
        assert_eq!((l, r), (vec![0, 1], vec![2, 3]));
    }

    #[test]
    fn selection_finds_pure_split() {
        let ds = separable_dataset(20);
        let node: Vec<usize> = (0..ds.n()).collect();
        let config = TrainConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(94);
        let (_, score) = select_best_split(&ds, &node, &config, &mut rng)
            .unwrap()
            .expect("separating threshold among 256 draws");
        approx::assert_abs_diff_eq!(score.value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn selection_returns_none_on_identical_samples() {
        let ds = class_dataset(vec![vec![2.0]; 6], vec![0, 1, 0, 1, 0, 1], 2);
        let node: Vec<usize> = (0..6).collect();
        let config = TrainConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(95);
        assert!(select_best_split(&ds, &node, &config, &mut rng)
            .unwrap()
            .is_none());
    }

    #[test]
    fn selection_deterministic_replay() {
        let ds = separable_dataset(15);
        let node: Vec<usize> = (0..ds.n()).collect();
        let config = TrainConfig::default();
        let pick = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            select_best_split(&ds, &node, &config, &mut rng)
                .unwrap()
                .map(|(c, s)| (c.feature, c.threshold, s.value))
        };
        assert_eq!(pick(9), pick(9));
    }

    #[test]
    fn single_leaf_when_min_split_exceeds_n() {
        let ds = separable_dataset(5);
        let config = TrainConfig {
            min_samples_split: 100,
            ..TrainConfig::default()
        };
        let tree = grow_tree(&ds, &config, 1).unwrap();
        assert_eq!(tree.leaf_count(), 1);
    }

    #[test]
    fn pure_node_stops_growth() {
        let ds = class_dataset(
            vec![vec![1.0], vec![2.0], vec![3.0]],
            vec![1, 1, 1],
            2,
        );
        let tree = grow_tree(&ds, &TrainConfig::default(), 2).unwrap();
        assert_eq!(tree.leaf_count(), 1);
        match tree {
            TreeNode::Leaf {
                payload: LeafPayload::Classification { label },
            } => assert_eq!(label, 1),
            other => panic!("expected classification leaf, got {other:?}"),
        }
    }

    #[test]
    fn separable_data_reaches_perfect_training_accuracy() {
        let ds = separable_dataset(25);
        let tree = grow_tree(&ds, &TrainConfig::default(), 3).unwrap();
        let labels = match &ds.targets {
            Targets::Classes { labels, .. } => labels,
            _ => unreachable!(),
        };
        for i in 0..ds.n() {
            match tree.route(ds.features.row(i)) {
                LeafPayload::Classification { label } => assert_eq!(label, &labels[i]),
                _ => panic!("expected classification leaf"),
            }
        }
    }

    #[test]
    fn max_depth_limits_growth() {
        let ds = separable_dataset(30);
        let config = TrainConfig {
            max_depth: Some(1),
            ..TrainConfig::default()
        };
        let tree = grow_tree(&ds, &config, 4).unwrap();
        assert!(tree.depth() <= 2);
    }

    #[test]
    fn modality_mismatch_rejected() {
        let ds = separable_dataset(5);
        let config = TrainConfig {
            estimator: EstimatorKind::MvnPlugin,
            ..TrainConfig::default()
        };
        assert!(matches!(
            train_forest(&ds, &config),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn empty_dataset_rejected() {
        let ds = class_dataset(vec![], vec![], 2);
        assert!(matches!(
            train_forest(&ds, &TrainConfig::default()),
            Err(Error::EmptySample)
        ));
    }
}
