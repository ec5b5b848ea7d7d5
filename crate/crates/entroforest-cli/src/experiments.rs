//! Desk-scale experiment runners: model selection on a validation split,
//! the classification protocol (min-split grid, five replicates) and the
//! regression protocol (lambda grid, ten-plus-ten replicates).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use entroforest::data::{dequantize, split_dataset, Dataset, TaskKind, Targets};
use entroforest::entropy::EstimatorKind;
use entroforest::error::{Error, Result};
use entroforest::forest::{train_forest, Forest, TrainConfig};
use entroforest::numerics::TargetMatrix;
use entroforest::seeding::derive_seed;

/// What model selection optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Maximize multiclass accuracy.
    Accuracy,
    /// Maximize mean per-sample log-likelihood.
    LogLikelihood,
    /// Minimize root mean squared error.
    Rmse,
}

/// Fraction of correct majority votes on `dataset`.
pub fn evaluate_accuracy(forest: &Forest, dataset: &Dataset, seed: u64) -> Result<f64> {
    let labels = match &dataset.targets {
        Targets::Classes { labels, .. } => labels,
        _ => return Err(Error::domain("accuracy needs class targets")),
    };
    if dataset.n() == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut correct = 0usize;
    for i in 0..dataset.n() {
        let vote = forest.predict_class(dataset.features.row(i), &mut rng)?;
        if vote == labels[i] {
            correct += 1;
        }
    }
    Ok(correct as f64 / dataset.n() as f64)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegressionMetrics {
    pub mean_log_likelihood: f64,
    pub rmse: f64,
}

/// Holdout mean log-likelihood (mixture over trees, original units) and
/// root mean squared Euclidean error of the point predictions.
pub fn evaluate_regression(forest: &Forest, dataset: &Dataset) -> Result<RegressionMetrics> {
    let targets = match &dataset.targets {
        Targets::Real(m) => m,
        _ => return Err(Error::domain("regression metrics need real targets")),
    };
    if dataset.n() == 0 {
        return Err(Error::EmptySample);
    }
    let mut ll_sum = 0.0;
    let mut sq_sum = 0.0;
    for i in 0..dataset.n() {
        let x = dataset.features.row(i);
        let y = targets.row(i);
        ll_sum += forest.log_density(x, y)?;
        let prediction = forest.predict_regression(x)?;
        sq_sum += prediction
            .iter()
            .zip(y)
            .map(|(p, t)| (p - t) * (p - t))
            .sum::<f64>();
    }
    let n = dataset.n() as f64;
    Ok(RegressionMetrics {
        mean_log_likelihood: ll_sum / n,
        rmse: (sq_sum / n).sqrt(),
    })
}

fn metric_score(
    forest: &Forest,
    val: &Dataset,
    metric: Metric,
    eval_seed: u64,
) -> Result<f64> {
    match metric {
        Metric::Accuracy => evaluate_accuracy(forest, val, eval_seed),
        Metric::LogLikelihood => Ok(evaluate_regression(forest, val)?.mean_log_likelihood),
        Metric::Rmse => Ok(evaluate_regression(forest, val)?.rmse),
    }
}

/// The winning candidate of a selection run.
#[derive(Debug, Clone)]
pub struct SelectedModel {
    pub index: usize,
    pub config: TrainConfig,
    pub val_score: f64,
}

/// Train every candidate on `train`, score it on `val`, and return the
/// argmax (accuracy, log-likelihood) or argmin (RMSE). The first listed
/// candidate wins ties.
pub fn model_select(
    candidates: &[TrainConfig],
    train: &Dataset,
    val: &Dataset,
    metric: Metric,
    eval_seed: u64,
) -> Result<SelectedModel> {
    if candidates.is_empty() {
        return Err(Error::config("model selection needs at least one candidate"));
    }
    let mut best: Option<SelectedModel> = None;
    for (index, config) in candidates.iter().enumerate() {
        let forest = train_forest(train, config)?;
        let score = metric_score(&forest, val, metric, derive_seed(eval_seed, index as u64))?;
        let better = match &best {
            None => true,
            Some(incumbent) => match metric {
                Metric::Rmse => score < incumbent.val_score,
                _ => score > incumbent.val_score,
            },
        };
        if better {
            best = Some(SelectedModel {
                index,
                config: config.clone(),
                val_score: score,
            });
        }
    }
    Ok(best.expect("candidates checked non-empty"))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationRow {
    pub estimator: String,
    pub replicate: usize,
    pub min_samples_split: usize,
    pub val_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegressionRow {
    pub estimator: String,
    pub replicate: usize,
    pub lambda: f64,
    pub test_log_likelihood: f64,
    pub test_rmse: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

pub fn mean_std(values: &[f64]) -> MeanStd {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    MeanStd { mean, std }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimatorSummary {
    pub estimator: String,
    pub replicates: usize,
    pub selected_params: Vec<f64>,
    pub metrics: Vec<(String, MeanStd)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub task: TaskKind,
    pub seed: u64,
    pub runtime_seconds: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub classification_rows: Vec<ClassificationRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub regression_rows: Vec<RegressionRow>,
    pub summaries: Vec<EstimatorSummary>,
}

/// The classification experiment protocol.
#[derive(Debug, Clone)]
pub struct ClassificationProtocol {
    pub min_split_grid: Vec<usize>,
    pub replicates: usize,
    pub n_trees: usize,
    pub n_tests: usize,
    pub estimators: Vec<EstimatorKind>,
    pub seed: u64,
}

impl Default for ClassificationProtocol {
    fn default() -> Self {
        Self {
            min_split_grid: vec![1, 5, 10],
            replicates: 5,
            n_trees: 8,
            n_tests: 256,
            estimators: vec![EstimatorKind::Naive, EstimatorKind::Grassberger],
            seed: 42,
        }
    }
}

/// Per replicate: split 25/25/50, select min-split on val, retrain on
/// train+val, report test accuracy. Replicates vary only the seed.
pub fn run_classification(
    dataset: &Dataset,
    protocol: &ClassificationProtocol,
) -> Result<ExperimentReport> {
    if dataset.task() != TaskKind::Classification {
        return Err(Error::config("run_classification needs class targets"));
    }
    if protocol.min_split_grid.is_empty() || protocol.estimators.is_empty() {
        return Err(Error::config("empty parameter grid"));
    }
    for estimator in &protocol.estimators {
        if !estimator.is_discrete() {
            return Err(Error::config(format!(
                "estimator {estimator} cannot train a classification forest"
            )));
        }
    }
    let started = std::time::Instant::now();

    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (e, estimator) in protocol.estimators.iter().enumerate() {
        let replicate_rows: Result<Vec<ClassificationRow>> = (0..protocol.replicates)
            .into_par_iter()
            .map(|r| {
                let rep_seed = derive_seed(protocol.seed, ((e as u64) << 32) | r as u64);
                let mut split_rng = ChaCha8Rng::seed_from_u64(derive_seed(rep_seed, 0));
                let (train, val, test) =
                    split_dataset(dataset, (0.25, 0.25, 0.5), &mut split_rng)?;

                let candidates: Vec<TrainConfig> = protocol
                    .min_split_grid
                    .iter()
                    .map(|&min_split| TrainConfig {
                        n_trees: protocol.n_trees,
                        n_tests: protocol.n_tests,
                        min_samples_split: min_split,
                        estimator: estimator.clone(),
                        master_seed: derive_seed(rep_seed, 1),
                        ..TrainConfig::default()
                    })
                    .collect();
                let selected =
                    model_select(&candidates, &train, &val, Metric::Accuracy, derive_seed(rep_seed, 2))?;

                // Retrain the winner on train+val and evaluate on test.
                let trainval = concat_datasets(&train, &val)?;
                let final_config = TrainConfig {
                    master_seed: derive_seed(rep_seed, 3),
                    ..selected.config.clone()
                };
                let forest = train_forest(&trainval, &final_config)?;
                let test_accuracy =
                    evaluate_accuracy(&forest, &test, derive_seed(rep_seed, 4))?;
                Ok(ClassificationRow {
                    estimator: estimator.to_string(),
                    replicate: r,
                    min_samples_split: selected.config.min_samples_split,
                    val_accuracy: selected.val_score,
                    test_accuracy,
                })
            })
            .collect();
        let replicate_rows = replicate_rows?;

        let accuracies: Vec<f64> = replicate_rows.iter().map(|r| r.test_accuracy).collect();
        summaries.push(EstimatorSummary {
            estimator: estimator.to_string(),
            replicates: protocol.replicates,
            selected_params: replicate_rows
                .iter()
                .map(|r| r.min_samples_split as f64)
                .collect(),
            metrics: vec![("test_accuracy".into(), mean_std(&accuracies))],
        });
        rows.extend(replicate_rows);
    }

    Ok(ExperimentReport {
        task: TaskKind::Classification,
        seed: protocol.seed,
        runtime_seconds: started.elapsed().as_secs_f64(),
        classification_rows: rows,
        regression_rows: Vec::new(),
        summaries,
    })
}

/// Row-concatenation of two datasets over the same schema.
pub fn concat_datasets(a: &Dataset, b: &Dataset) -> Result<Dataset> {
    let mut feature_rows: Vec<Vec<f64>> = Vec::with_capacity(a.n() + b.n());
    for ds in [a, b] {
        for i in 0..ds.n() {
            feature_rows.push(ds.features.row(i).to_vec());
        }
    }
    let features = entroforest::data::FeatureMatrix::from_rows(&feature_rows)?;
    let targets = match (&a.targets, &b.targets) {
        (
            Targets::Classes {
                labels: la,
                num_classes,
                names,
            },
            Targets::Classes { labels: lb, .. },
        ) => Targets::Classes {
            labels: la.iter().chain(lb.iter()).copied().collect(),
            num_classes: *num_classes,
            names: names.clone(),
        },
        (Targets::Real(ma), Targets::Real(mb)) => {
            let rows: Vec<Vec<f64>> = ma
                .rows()
                .chain(mb.rows())
                .map(|r| r.to_vec())
                .collect();
            Targets::Real(TargetMatrix::from_rows(&rows)?)
        }
        _ => return Err(Error::domain("cannot concatenate mismatched tasks")),
    };
    Dataset::new(features, targets)
}

/// The regression experiment protocol.
#[derive(Debug, Clone)]
pub struct RegressionProtocol {
    pub lambda_grid: Vec<f64>,
    pub model_select_replicates: usize,
    pub final_replicates: usize,
    pub n_trees: usize,
    pub n_tests: usize,
    pub min_samples_leaf: usize,
    pub estimators: Vec<EstimatorKind>,
    pub seed: u64,
}

impl Default for RegressionProtocol {
    fn default() -> Self {
        Self {
            lambda_grid: vec![1e-4, 1e-3, 1e-2, 0.1, 1.0],
            model_select_replicates: 10,
            final_replicates: 10,
            n_trees: 8,
            n_tests: 256,
            min_samples_leaf: 16,
            estimators: vec![
                EstimatorKind::MvnDiag,
                EstimatorKind::MvnPlugin,
                EstimatorKind::mvn_umvue(),
                EstimatorKind::one_nn(),
            ],
            seed: 42,
        }
    }
}

fn has_duplicate_rows(targets: &TargetMatrix) -> bool {
    let mut seen = std::collections::HashSet::with_capacity(targets.n());
    for row in targets.rows() {
        let key: Vec<u64> = row.iter().map(|v| v.to_bits()).collect();
        if !seen.insert(key) {
            return true;
        }
    }
    false
}

/// Pipeline: dequantize targets, split 60/40 into trainval/test, pick the
/// kernel regularization on ten 40/20 selection replicates, then report
/// holdout log-likelihood and RMSE over the final replicates trained on
/// the full trainval set.
pub fn run_regression(
    dataset: &Dataset,
    protocol: &RegressionProtocol,
) -> Result<ExperimentReport> {
    let targets = match &dataset.targets {
        Targets::Real(m) => m,
        _ => return Err(Error::config("run_regression needs real targets")),
    };
    if protocol.lambda_grid.is_empty() || protocol.estimators.is_empty() {
        return Err(Error::config("empty parameter grid"));
    }
    for estimator in &protocol.estimators {
        if !estimator.is_differential() {
            return Err(Error::config(format!(
                "estimator {estimator} cannot train a regression forest"
            )));
        }
    }
    let started = std::time::Instant::now();

    // Restore absolute continuity once, before any splitting.
    let mut dequant_rng = ChaCha8Rng::seed_from_u64(derive_seed(protocol.seed, 0));
    let dequantized = dequantize(targets, &mut dequant_rng);
    if has_duplicate_rows(&dequantized) {
        // Remaining ties mean some dimension had no positive bin width.
        let one_nn_requested = protocol
            .estimators
            .iter()
            .any(|e| matches!(e, EstimatorKind::OneNn { .. }));
        if one_nn_requested {
            return Err(Error::AbsoluteContinuity(
                "duplicate target vectors survive dequantization (zero bin width); \
                 the 1-NN estimator is not applicable"
                    .into(),
            ));
        }
        eprintln!(
            "warning: duplicate target vectors survive dequantization; \
             continuing with Normal-family estimators"
        );
    }
    let dataset = Dataset::new(dataset.features.clone(), Targets::Real(dequantized))?;

    let mut split_rng = ChaCha8Rng::seed_from_u64(derive_seed(protocol.seed, 1));
    let (trainval, _, test) = split_dataset(&dataset, (0.6, 0.0, 0.4), &mut split_rng)?;

    // Shared selection splits: 40/20 of the full set is 2/3 / 1/3 of
    // trainval. Every estimator and lambda sees the same splits.
    let selection_splits: Result<Vec<(Dataset, Dataset)>> = (0..protocol
        .model_select_replicates)
        .map(|m| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(derive_seed(protocol.seed, 100 + m as u64));
            let (train, val, _) =
                split_dataset(&trainval, (2.0 / 3.0, 1.0 / 3.0, 0.0), &mut rng)?;
            Ok((train, val))
        })
        .collect();
    let selection_splits = selection_splits?;

    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (e, estimator) in protocol.estimators.iter().enumerate() {
        let base_config = |lambda: f64, master_seed: u64| TrainConfig {
            n_trees: protocol.n_trees,
            n_tests: protocol.n_tests,
            min_samples_split: 2,
            min_samples_leaf: protocol.min_samples_leaf,
            estimator: estimator.clone(),
            kde_lambda: lambda,
            master_seed,
            ..TrainConfig::default()
        };

        // Mean validation log-likelihood per lambda over the selection
        // replicates.
        let lambda_scores: Result<Vec<f64>> = protocol
            .lambda_grid
            .par_iter()
            .map(|&lambda| {
                let mut total = 0.0;
                for (m, (train, val)) in selection_splits.iter().enumerate() {
                    let config = base_config(
                        lambda,
                        derive_seed(protocol.seed, ((e as u64) << 40) | (m as u64) << 8),
                    );
                    let forest = train_forest(train, &config)?;
                    total += evaluate_regression(&forest, val)?.mean_log_likelihood;
                }
                Ok(total / selection_splits.len() as f64)
            })
            .collect();
        let lambda_scores = lambda_scores?;
        let mut best_lambda = protocol.lambda_grid[0];
        let mut best_score = lambda_scores[0];
        for (i, &score) in lambda_scores.iter().enumerate() {
            if score > best_score {
                best_score = score;
                best_lambda = protocol.lambda_grid[i];
            }
        }

        let final_rows: Result<Vec<RegressionRow>> = (0..protocol.final_replicates)
            .into_par_iter()
            .map(|r| {
                let config = base_config(
                    best_lambda,
                    derive_seed(protocol.seed, ((e as u64) << 40) | 0xF00 | (r as u64)),
                );
                let forest = train_forest(&trainval, &config)?;
                let metrics = evaluate_regression(&forest, &test)?;
                Ok(RegressionRow {
                    estimator: estimator.to_string(),
                    replicate: r,
                    lambda: best_lambda,
                    test_log_likelihood: metrics.mean_log_likelihood,
                    test_rmse: metrics.rmse,
                })
            })
            .collect();
        let final_rows = final_rows?;

        let lls: Vec<f64> = final_rows.iter().map(|r| r.test_log_likelihood).collect();
        let rmses: Vec<f64> = final_rows.iter().map(|r| r.test_rmse).collect();
        summaries.push(EstimatorSummary {
            estimator: estimator.to_string(),
            replicates: protocol.final_replicates,
            selected_params: vec![best_lambda],
            metrics: vec![
                ("test_log_likelihood".into(), mean_std(&lls)),
                ("test_rmse".into(), mean_std(&rmses)),
            ],
        });
        rows.extend(final_rows);
    }

    Ok(ExperimentReport {
        task: TaskKind::Regression,
        seed: protocol.seed,
        runtime_seconds: started.elapsed().as_secs_f64(),
        classification_rows: Vec::new(),
        regression_rows: rows,
        summaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use entroforest::data::FeatureMatrix;
    use rand::Rng;

    fn separable(n_each: usize) -> Dataset {
        // The separating feature takes one constant per class, so every
        // train subset contains the class extremes and test routing is
        // exact; the second feature is overlapping noise.
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n_each {
            features.push(vec![0.0, (i % 7) as f64]);
            labels.push(0);
            features.push(vec![10.0, ((i + 3) % 7) as f64]);
            labels.push(1);
        }
        Dataset::new(
            FeatureMatrix::from_rows(&features).unwrap(),
            Targets::Classes {
                labels,
                num_classes: 2,
                names: vec!["a".into(), "b".into()],
            },
        )
        .unwrap()
    }

    #[test]
    fn separable_data_reaches_perfect_accuracy() {
        let ds = separable(40);
        let protocol = ClassificationProtocol {
            replicates: 5,
            estimators: vec![EstimatorKind::Naive],
            ..ClassificationProtocol::default()
        };
        let report = run_classification(&ds, &protocol).unwrap();
        let summary = &report.summaries[0];
        assert_eq!(summary.metrics[0].1.mean, 1.0);
        assert_eq!(summary.metrics[0].1.std, 0.0);
    }

    #[test]
    fn shuffled_labels_score_at_chance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3001);
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..400 {
            features.push(vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            labels.push(rng.gen_range(0..2usize));
        }
        let ds = Dataset::new(
            FeatureMatrix::from_rows(&features).unwrap(),
            Targets::Classes {
                labels,
                num_classes: 2,
                names: vec!["a".into(), "b".into()],
            },
        )
        .unwrap();
        let protocol = ClassificationProtocol {
            replicates: 5,
            estimators: vec![EstimatorKind::Naive],
            ..ClassificationProtocol::default()
        };
        let report = run_classification(&ds, &protocol).unwrap();
        let mean = report.summaries[0].metrics[0].1.mean;
        assert!((mean - 0.5).abs() < 0.12, "chance-level accuracy was {mean}");
    }

    #[test]
    fn model_select_single_candidate_and_ties() {
        let ds = separable(30);
        let mut rng = ChaCha8Rng::seed_from_u64(3002);
        let (train, val, _) = split_dataset(&ds, (0.5, 0.25, 0.25), &mut rng).unwrap();

        let config = TrainConfig {
            master_seed: 9,
            ..TrainConfig::default()
        };
        let single = model_select(&[config.clone()], &train, &val, Metric::Accuracy, 1).unwrap();
        assert_eq!(single.index, 0);

        // Identical candidates tie; the first listed wins.
        let tied = model_select(
            &[config.clone(), config],
            &train,
            &val,
            Metric::Accuracy,
            1,
        )
        .unwrap();
        assert_eq!(tied.index, 0);
    }

    #[test]
    fn model_select_matches_exhaustive_replay() {
        let ds = separable(30);
        let mut rng = ChaCha8Rng::seed_from_u64(3003);
        let (train, val, _) = split_dataset(&ds, (0.5, 0.25, 0.25), &mut rng).unwrap();
        let candidates: Vec<TrainConfig> = [1usize, 5, 10]
            .iter()
            .map(|&ms| TrainConfig {
                min_samples_split: ms,
                n_trees: 2,
                n_tests: 32,
                master_seed: 4,
                ..TrainConfig::default()
            })
            .collect();
        let selected =
            model_select(&candidates, &train, &val, Metric::Accuracy, 77).unwrap();

        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, c) in candidates.iter().enumerate() {
            let forest = train_forest(&train, c).unwrap();
            let acc = evaluate_accuracy(&forest, &val, derive_seed(77, i as u64)).unwrap();
            if acc > best.1 {
                best = (i, acc);
            }
        }
        assert_eq!(selected.index, best.0);
    }

    fn quantized_regression(n: usize) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(3004);
        let mut features = Vec::new();
        let mut targets = Vec::new();
        for _ in 0..n {
            let x: f64 = rng.gen_range(0.0..1.0);
            features.push(vec![x]);
            // Discretized at 0.1 so duplicates occur.
            targets.push(vec![(x * 10.0).round() / 10.0]);
        }
        Dataset::new(
            FeatureMatrix::from_rows(&features).unwrap(),
            Targets::Real(TargetMatrix::from_rows(&targets).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn regression_pipeline_runs_on_quantized_targets() {
        let ds = quantized_regression(150);
        let protocol = RegressionProtocol {
            lambda_grid: vec![1e-2, 0.1],
            model_select_replicates: 2,
            final_replicates: 2,
            n_tests: 32,
            min_samples_leaf: 8,
            estimators: vec![EstimatorKind::MvnPlugin, EstimatorKind::one_nn()],
            ..RegressionProtocol::default()
        };
        let report = run_regression(&ds, &protocol).unwrap();
        assert_eq!(report.regression_rows.len(), 4);
        for row in &report.regression_rows {
            assert!(row.test_log_likelihood.is_finite());
            assert!(row.test_rmse.is_finite());
        }
    }

    #[test]
    fn constant_target_has_zero_rmse() {
        let mut features = Vec::new();
        for i in 0..120 {
            features.push(vec![i as f64]);
        }
        let targets = vec![vec![7.5]; 120];
        let ds = Dataset::new(
            FeatureMatrix::from_rows(&features).unwrap(),
            Targets::Real(TargetMatrix::from_rows(&targets).unwrap()),
        )
        .unwrap();
        let protocol = RegressionProtocol {
            lambda_grid: vec![0.1],
            model_select_replicates: 2,
            final_replicates: 2,
            n_tests: 16,
            min_samples_leaf: 8,
            estimators: vec![EstimatorKind::MvnPlugin],
            ..RegressionProtocol::default()
        };
        let report = run_regression(&ds, &protocol).unwrap();
        for row in &report.regression_rows {
            approx::assert_abs_diff_eq!(row.test_rmse, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn one_nn_on_unresolvable_ties_is_an_error() {
        let mut features = Vec::new();
        for i in 0..60 {
            features.push(vec![i as f64]);
        }
        let targets = vec![vec![1.0]; 60];
        let ds = Dataset::new(
            FeatureMatrix::from_rows(&features).unwrap(),
            Targets::Real(TargetMatrix::from_rows(&targets).unwrap()),
        )
        .unwrap();
        let protocol = RegressionProtocol {
            estimators: vec![EstimatorKind::one_nn()],
            ..RegressionProtocol::default()
        };
        assert!(matches!(
            run_regression(&ds, &protocol),
            Err(Error::AbsoluteContinuity(_))
        ));
    }
}
