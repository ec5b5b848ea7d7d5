//! Plot-ready CSV output and structured summaries.
//!
//! Floats print through the shortest round-trip formatter, so identical
//! inputs always produce byte-identical files.

use entroforest::data::TaskKind;
use entroforest::error::{Error, Result};

use crate::bias::BiasRow;
use crate::experiments::ExperimentReport;

pub fn bias_rows_to_csv(rows: &[BiasRow]) -> String {
    let mut out = String::from("n,estimator,mean_estimate,std_estimate,true_info_gain\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.sample_size,
            row.estimator,
            row.mean_estimate,
            row.std_estimate,
            row.true_info_gain
        ));
    }
    out
}

pub fn experiment_to_csv(report: &ExperimentReport) -> String {
    match report.task {
        TaskKind::Classification => {
            let mut out = String::from(
                "estimator,replicate,min_samples_split,val_accuracy,test_accuracy\n",
            );
            for row in &report.classification_rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.estimator,
                    row.replicate,
                    row.min_samples_split,
                    row.val_accuracy,
                    row.test_accuracy
                ));
            }
            out
        }
        TaskKind::Regression => {
            let mut out = String::from(
                "estimator,replicate,lambda,test_log_likelihood,test_rmse\n",
            );
            for row in &report.regression_rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.estimator,
                    row.replicate,
                    row.lambda,
                    row.test_log_likelihood,
                    row.test_rmse
                ));
            }
            out
        }
    }
}

pub fn experiment_summary_json(report: &ExperimentReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Format(format!("summary serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// One human-readable line per estimator.
pub fn experiment_summary_text(report: &ExperimentReport) -> String {
    let mut out = String::new();
    for summary in &report.summaries {
        let metrics: Vec<String> = summary
            .metrics
            .iter()
            .map(|(name, ms)| format!("{name} = {:.4} +/- {:.4}", ms.mean, ms.std))
            .collect();
        out.push_str(&format!(
            "{:<12} ({} replicates)  {}\n",
            summary.estimator,
            summary.replicates,
            metrics.join("  ")
        ));
    }
    out.push_str(&format!("runtime: {:.2} s\n", report.runtime_seconds));
    out
}
