//! Command-line interface: bias simulation, forest training, prediction,
//! evaluation, and the model-selection experiment protocols.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use entroforest::data::{dequantize, load_csv, CsvSchema, Dataset, TaskKind, Targets};
use entroforest::entropy::EstimatorKind;
use entroforest::error::{Error, Result};
use entroforest::forest::{
    deserialize_forest, serialize_forest, train_forest, Forest, TaskInfo, TrainConfig,
};
use entroforest::seeding::derive_seed;

use entroforest_cli::bias::{simulate_bias, BiasSimConfig};
use entroforest_cli::experiments::{
    evaluate_accuracy, evaluate_regression, run_classification, run_regression,
    ClassificationProtocol, RegressionProtocol,
};
use entroforest_cli::report::{
    bias_rows_to_csv, experiment_summary_json, experiment_summary_text, experiment_to_csv,
};

#[derive(Parser)]
#[command(
    name = "entroforest",
    version,
    about = "Decision forests with bias-corrected entropy estimators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo comparison of information-gain estimators against the
    /// exact gain of a fixed multinomial split distribution.
    SimulateBias {
        /// Output CSV path (n, estimator, mean, std, true gain).
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of classes K.
        #[arg(long, default_value_t = 40)]
        classes: usize,
        /// Replicates per sample size.
        #[arg(long, default_value_t = 500)]
        replicates: usize,
        /// Comma-separated sample sizes to sweep.
        #[arg(long, value_delimiter = ',', num_args = 1..,
              default_values_t = vec![50, 100, 200, 400, 800, 1600, 3200])]
        sizes: Vec<usize>,
        /// Comma-separated discrete estimators to compare.
        #[arg(long, value_delimiter = ',', num_args = 1..,
              default_values_t = vec!["naive".to_string(), "grassberger".to_string()])]
        estimators: Vec<String>,
    },
    /// Train a forest on a CSV dataset and write the model file.
    Train {
        #[arg(long)]
        data: PathBuf,
        /// classification or regression.
        #[arg(long)]
        task: String,
        /// Target column name; repeat for multivariate regression.
        #[arg(long = "target-col", required = true)]
        target_cols: Vec<String>,
        #[arg(long, default_value = "naive")]
        estimator: String,
        #[arg(long, default_value_t = 8)]
        trees: usize,
        #[arg(long, default_value_t = 256)]
        tests: usize,
        #[arg(long = "min-split", default_value_t = 1)]
        min_split: usize,
        #[arg(long = "min-leaf", default_value_t = 1)]
        min_leaf: usize,
        #[arg(long = "max-depth")]
        max_depth: Option<usize>,
        /// Kernel density regularization (regression leaves).
        #[arg(long, default_value_t = 1e-3)]
        lambda: f64,
        /// 1-NN estimator subsample size.
        #[arg(long, default_value_t = 256)]
        subsample: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict with a trained model; writes one prediction per input row.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Target columns present in the data file to ignore.
        #[arg(long = "target-col")]
        target_cols: Vec<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a trained model against labeled data.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long = "target-col", required = true)]
        target_cols: Vec<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Optional metrics CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full experiment protocol with validation-set model selection.
    ModelSelect {
        #[arg(long)]
        data: PathBuf,
        /// classification or regression.
        #[arg(long)]
        task: String,
        #[arg(long = "target-col", required = true)]
        target_cols: Vec<String>,
        /// Comma-separated estimators (defaults per task).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        estimators: Option<Vec<String>>,
        /// Classification grid of minimum samples to continue splitting.
        #[arg(long = "min-split-grid", value_delimiter = ',', num_args = 1..,
              default_values_t = vec![1usize, 5, 10])]
        min_split_grid: Vec<usize>,
        /// Regression grid of kernel regularization values.
        #[arg(long = "lambda-grid", value_delimiter = ',', num_args = 1..,
              default_values_t = vec![1e-4, 1e-3, 1e-2, 0.1, 1.0])]
        lambda_grid: Vec<f64>,
        /// Classification test replicates.
        #[arg(long, default_value_t = 5)]
        replicates: usize,
        /// Regression model-selection replicates.
        #[arg(long = "select-replicates", default_value_t = 10)]
        select_replicates: usize,
        /// Regression final replicates.
        #[arg(long = "final-replicates", default_value_t = 10)]
        final_replicates: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Metrics CSV path (one row per estimator and replicate).
        #[arg(long)]
        out: PathBuf,
        /// Optional structured summary (JSON).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn parse_task(s: &str) -> Result<TaskKind> {
    match s {
        "classification" => Ok(TaskKind::Classification),
        "regression" => Ok(TaskKind::Regression),
        other => Err(Error::config(format!(
            "unknown task {other:?} (expected classification|regression)"
        ))),
    }
}

fn parse_estimator(name: &str, subsample: usize) -> Result<EstimatorKind> {
    let kind = EstimatorKind::from_str(name)?;
    Ok(match kind {
        EstimatorKind::OneNn { .. } => EstimatorKind::OneNn {
            subsample_size: subsample,
        },
        other => other,
    })
}

fn parse_estimators(names: &[String]) -> Result<Vec<EstimatorKind>> {
    names.iter().map(|n| EstimatorKind::from_str(n)).collect()
}

fn load_dataset(data: &Path, target_cols: &[String], task: TaskKind) -> Result<Dataset> {
    load_csv(
        data,
        &CsvSchema {
            target_columns: target_cols.to_vec(),
            task,
        },
    )
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SimulateBias {
            out,
            seed,
            classes,
            replicates,
            sizes,
            estimators,
        } => {
            let config = BiasSimConfig {
                num_classes: classes,
                sample_sizes: sizes,
                replicates,
                estimators: parse_estimators(&estimators)?,
                seed,
                ..BiasSimConfig::default()
            };
            let rows = simulate_bias(&config)?;
            fs::write(&out, bias_rows_to_csv(&rows))?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(())
        }
        Command::Train {
            data,
            task,
            target_cols,
            estimator,
            trees,
            tests,
            min_split,
            min_leaf,
            max_depth,
            lambda,
            subsample,
            seed,
            out,
        } => {
            let task = parse_task(&task)?;
            let mut dataset = load_dataset(&data, &target_cols, task)?;
            if let Targets::Real(targets) = &dataset.targets {
                // Restore absolute continuity before training.
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0));
                dataset = Dataset::new(
                    dataset.features.clone(),
                    Targets::Real(dequantize(targets, &mut rng)),
                )?;
            }
            let config = TrainConfig {
                n_trees: trees,
                n_tests: tests,
                min_samples_split: min_split,
                min_samples_leaf: min_leaf,
                max_depth,
                estimator: parse_estimator(&estimator, subsample)?,
                kde_lambda: lambda,
                master_seed: derive_seed(seed, 1),
            };
            let forest = train_forest(&dataset, &config)?;
            fs::write(&out, serialize_forest(&forest)?)?;
            println!(
                "trained {} trees on {} samples; model written to {}",
                config.n_trees,
                dataset.n(),
                out.display()
            );
            Ok(())
        }
        Command::Predict {
            model,
            data,
            target_cols,
            seed,
            out,
        } => {
            let forest = read_model(&model)?;
            let task = match forest.task() {
                TaskInfo::Classification { .. } => TaskKind::Classification,
                TaskInfo::Regression { .. } => TaskKind::Regression,
            };
            let features = if target_cols.is_empty() {
                load_features_only(&data, forest.num_features())?
            } else {
                load_dataset(&data, &target_cols, task)?.features
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut csv = String::new();
            match forest.task() {
                TaskInfo::Classification { labels, .. } => {
                    csv.push_str("prediction\n");
                    for i in 0..features.n() {
                        let class = forest.predict_class(features.row(i), &mut rng)?;
                        let name = labels
                            .get(class)
                            .cloned()
                            .unwrap_or_else(|| class.to_string());
                        csv.push_str(&name);
                        csv.push('\n');
                    }
                }
                TaskInfo::Regression { output_dim } => {
                    let header: Vec<String> =
                        (0..*output_dim).map(|j| format!("prediction_{j}")).collect();
                    csv.push_str(&header.join(","));
                    csv.push('\n');
                    for i in 0..features.n() {
                        let pred = forest.predict_regression(features.row(i))?;
                        let cells: Vec<String> = pred.iter().map(|v| v.to_string()).collect();
                        csv.push_str(&cells.join(","));
                        csv.push('\n');
                    }
                }
            }
            fs::write(&out, csv)?;
            println!("wrote {} predictions to {}", features.n(), out.display());
            Ok(())
        }
        Command::Evaluate {
            model,
            data,
            target_cols,
            seed,
            out,
        } => {
            let forest = read_model(&model)?;
            match forest.task() {
                TaskInfo::Classification { .. } => {
                    let dataset =
                        load_dataset(&data, &target_cols, TaskKind::Classification)?;
                    let accuracy = evaluate_accuracy(&forest, &dataset, seed)?;
                    println!("accuracy: {accuracy}");
                    if let Some(path) = out {
                        fs::write(&path, format!("metric,value\naccuracy,{accuracy}\n"))?;
                    }
                }
                TaskInfo::Regression { .. } => {
                    let dataset = load_dataset(&data, &target_cols, TaskKind::Regression)?;
                    let metrics = evaluate_regression(&forest, &dataset)?;
                    println!("mean_log_likelihood: {}", metrics.mean_log_likelihood);
                    println!("rmse: {}", metrics.rmse);
                    if let Some(path) = out {
                        fs::write(
                            &path,
                            format!(
                                "metric,value\nmean_log_likelihood,{}\nrmse,{}\n",
                                metrics.mean_log_likelihood, metrics.rmse
                            ),
                        )?;
                    }
                }
            }
            Ok(())
        }
        Command::ModelSelect {
            data,
            task,
            target_cols,
            estimators,
            min_split_grid,
            lambda_grid,
            replicates,
            select_replicates,
            final_replicates,
            seed,
            out,
            summary,
        } => {
            let task = parse_task(&task)?;
            let dataset = load_dataset(&data, &target_cols, task)?;
            let report = match task {
                TaskKind::Classification => {
                    let mut protocol = ClassificationProtocol {
                        min_split_grid,
                        replicates,
                        seed,
                        ..ClassificationProtocol::default()
                    };
                    if let Some(names) = &estimators {
                        protocol.estimators = parse_estimators(names)?;
                    }
                    run_classification(&dataset, &protocol)?
                }
                TaskKind::Regression => {
                    let mut protocol = RegressionProtocol {
                        lambda_grid,
                        model_select_replicates: select_replicates,
                        final_replicates,
                        seed,
                        ..RegressionProtocol::default()
                    };
                    if let Some(names) = &estimators {
                        protocol.estimators = parse_estimators(names)?;
                    }
                    run_regression(&dataset, &protocol)?
                }
            };
            fs::write(&out, experiment_to_csv(&report))?;
            if let Some(path) = summary {
                fs::write(&path, experiment_summary_json(&report)?)?;
            }
            print!("{}", experiment_summary_text(&report));
            Ok(())
        }
    }
}

fn read_model(path: &Path) -> Result<Forest> {
    let bytes = fs::read(path)?;
    deserialize_forest(&bytes)
}

/// Load a CSV of features only (no target columns), checking the width
/// against the model.
fn load_features_only(
    path: &Path,
    expected: usize,
) -> Result<entroforest::data::FeatureMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Format(format!("cannot open {}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let row_number = line + 2;
        let record = record.map_err(|e| Error::Format(format!("row {row_number}: {e}")))?;
        let mut row = Vec::with_capacity(record.len());
        for (col, cell) in record.iter().enumerate() {
            let value = cell.trim().parse::<f64>().map_err(|_| Error::Parse {
                row: row_number,
                col: col + 1,
                msg: format!("non-numeric cell {:?}", cell.trim()),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptySample);
    }
    let features = entroforest::data::FeatureMatrix::from_rows(&rows)?;
    if features.num_features() != expected {
        return Err(Error::domain(format!(
            "data has {} feature columns, model expects {expected}",
            features.num_features()
        )));
    }
    Ok(features)
}

fn main() {
    let cli = Cli::parse();
    if let Err(error) = run(cli) {
        eprintln!("error: {error}");
        let code = match error {
            Error::Config(_) => 2,
            _ => 3,
        };
        std::process::exit(code);
    }
}
