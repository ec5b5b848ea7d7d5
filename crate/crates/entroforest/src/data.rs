//! Dataset ingestion, target dequantization, output standardization and
//! train/val/test splitting.

use std::collections::HashSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::TargetMatrix;

/// Scale floor for zero-variance output dimensions.
const SCALE_FLOOR: f64 = 1e-12;

/// Dense n x p feature matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    n: usize,
    p: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(n: usize, p: usize, data: Vec<f64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::domain("feature dimension must be at least 1"));
        }
        if data.len() != n * p {
            return Err(Error::domain(format!(
                "buffer length {} does not match {n} x {p}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite feature entry {bad}")));
        }
        Ok(Self { n, p, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map(|r| r.len()).unwrap_or(1);
        let mut data = Vec::with_capacity(rows.len() * p);
        for row in rows {
            if row.len() != p {
                return Err(Error::domain("ragged feature rows"));
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), p.max(1), data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_features(&self) -> usize {
        self.p
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.p + j]
    }

    pub fn select_rows(&self, indices: &[usize]) -> FeatureMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.p);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        FeatureMatrix {
            n: indices.len(),
            p: self.p,
            data,
        }
    }
}

/// Prediction targets: contiguous class indices or a real matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Targets {
    Classes {
        labels: Vec<usize>,
        num_classes: usize,
        /// Original label string for each class index.
        names: Vec<String>,
    },
    Real(TargetMatrix),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaskKind {
    Classification,
    Regression,
}

/// A loaded dataset: features plus targets with matching row counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: FeatureMatrix,
    pub targets: Targets,
}

impl Dataset {
    pub fn new(features: FeatureMatrix, targets: Targets) -> Result<Self> {
        let target_rows = match &targets {
            Targets::Classes { labels, .. } => labels.len(),
            Targets::Real(m) => m.n(),
        };
        if target_rows != features.n() {
            return Err(Error::domain(format!(
                "feature rows {} != target rows {}",
                features.n(),
                target_rows
            )));
        }
        Ok(Self { features, targets })
    }

    pub fn n(&self) -> usize {
        self.features.n()
    }

    pub fn task(&self) -> TaskKind {
        match self.targets {
            Targets::Classes { .. } => TaskKind::Classification,
            Targets::Real(_) => TaskKind::Regression,
        }
    }

    /// Copy of the rows at `indices`.
    pub fn select_rows(&self, indices: &[usize]) -> Dataset {
        let features = self.features.select_rows(indices);
        let targets = match &self.targets {
            Targets::Classes {
                labels,
                num_classes,
                names,
            } => Targets::Classes {
                labels: indices.iter().map(|&i| labels[i]).collect(),
                num_classes: *num_classes,
                names: names.clone(),
            },
            Targets::Real(m) => Targets::Real(m.select_rows(indices)),
        };
        Dataset { features, targets }
    }
}

/// CSV column schema: which header names hold targets, and the task.
#[derive(Debug, Clone)]
pub struct CsvSchema {
    pub target_columns: Vec<String>,
    pub task: TaskKind,
}

/// Load a comma-separated file with one header row into a dense dataset.
///
/// Classification label strings are mapped to contiguous class indices in
/// first-appearance order, with the original strings recorded.
pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<Dataset> {
    if schema.target_columns.is_empty() {
        return Err(Error::config("no target columns designated"));
    }
    if schema.task == TaskKind::Classification && schema.target_columns.len() != 1 {
        return Err(Error::config(
            "classification requires exactly one target column",
        ));
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::Format(format!("cannot open {}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Format(format!("cannot read header: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();

    let mut target_positions = Vec::new();
    for name in &schema.target_columns {
        match headers.iter().position(|h| h == name) {
            Some(p) => target_positions.push(p),
            None => {
                return Err(Error::Parse {
                    row: 1,
                    col: 0,
                    msg: format!("unknown target column {name:?}"),
                })
            }
        }
    }
    let feature_positions: Vec<usize> = (0..headers.len())
        .filter(|p| !target_positions.contains(p))
        .collect();
    if feature_positions.is_empty() {
        return Err(Error::config("no feature columns remain"));
    }

    let mut feature_rows: Vec<Vec<f64>> = Vec::new();
    let mut label_strings: Vec<String> = Vec::new();
    let mut target_rows: Vec<Vec<f64>> = Vec::new();

    for (line, record) in reader.records().enumerate() {
        let row_number = line + 2; // 1-based, after the header
        let record = record.map_err(|e| Error::Format(format!("row {row_number}: {e}")))?;
        if record.len() != headers.len() {
            return Err(Error::Parse {
                row: row_number,
                col: record.len(),
                msg: format!("expected {} fields, got {}", headers.len(), record.len()),
            });
        }
        let parse_cell = |pos: usize| -> Result<f64> {
            let raw = record.get(pos).unwrap_or("").trim();
            raw.parse::<f64>().map_err(|_| Error::Parse {
                row: row_number,
                col: pos + 1,
                msg: format!("non-numeric cell {raw:?}"),
            })
        };

        let mut features = Vec::with_capacity(feature_positions.len());
        for &pos in &feature_positions {
            features.push(parse_cell(pos)?);
        }
        feature_rows.push(features);

        match schema.task {
            TaskKind::Classification => {
                let raw = record.get(target_positions[0]).unwrap_or("").trim();
                label_strings.push(raw.to_string());
            }
            TaskKind::Regression => {
                let mut row = Vec::with_capacity(target_positions.len());
                for &pos in &target_positions {
                    row.push(parse_cell(pos)?);
                }
                target_rows.push(row);
            }
        }
    }

    if feature_rows.is_empty() {
        return Err(Error::EmptySample);
    }

    let features = FeatureMatrix::from_rows(&feature_rows)?;
    let targets = match schema.task {
        TaskKind::Classification => {
            let mut names: Vec<String> = Vec::new();
            let mut labels = Vec::with_capacity(label_strings.len());
            for s in label_strings {
                let idx = match names.iter().position(|n| *n == s) {
                    Some(i) => i,
                    None => {
                        names.push(s);
                        names.len() - 1
                    }
                };
                labels.push(idx);
            }
            Targets::Classes {
                labels,
                num_classes: names.len(),
                names,
            }
        }
        TaskKind::Regression => Targets::Real(TargetMatrix::from_rows(&target_rows)?),
    };
    Dataset::new(features, targets)
}

/// Per-dimension quantization bin width: the smallest positive difference
/// between consecutive sorted values. Dimensions whose values are all
/// identical get width 0.
pub fn bin_widths(targets: &TargetMatrix) -> Result<Vec<f64>> {
    if targets.n() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: targets.n(),
        });
    }
    let mut widths = Vec::with_capacity(targets.dim());
    for j in 0..targets.dim() {
        let mut column = targets.column(j);
        column.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut width = f64::INFINITY;
        for pair in column.windows(2) {
            let gap = pair[1] - pair[0];
            if gap > 0.0 && gap < width {
                width = gap;
            }
        }
        widths.push(if width.is_finite() { width } else { 0.0 });
    }
    Ok(widths)
}

fn has_duplicate_rows(targets: &TargetMatrix) -> bool {
    let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(targets.n());
    for row in targets.rows() {
        let key: Vec<u64> = row.iter().map(|v| v.to_bits()).collect();
        if !seen.insert(key) {
            return true;
        }
    }
    false
}

/// Restore absolute continuity of quantized targets.
///
/// If any two target vectors are identical, adds independent
/// U(-h_j/2, h_j/2) noise per dimension, with h_j the bin width from
/// [`bin_widths`]. Dimensions with width 0 are left untouched; matrices
/// whose rows are all distinct are returned unchanged.
pub fn dequantize<R: Rng>(targets: &TargetMatrix, rng: &mut R) -> TargetMatrix {
    if targets.n() < 2 || !has_duplicate_rows(targets) {
        return targets.clone();
    }
    let widths = bin_widths(targets).expect("n >= 2 checked above");
    let rows: Vec<Vec<f64>> = targets
        .rows()
        .map(|row| {
            row.iter()
                .zip(&widths)
                .map(|(&v, &h)| {
                    if h > 0.0 {
                        v + rng.gen_range(-h / 2.0..h / 2.0)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    TargetMatrix::from_rows(&rows).expect("noise keeps entries finite")
}

/// Per-dimension affine map taking the fitted targets to zero mean and
/// unit variance. Zero-variance dimensions use a floored scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    pub fn identity(d: usize) -> Self {
        Self {
            mean: vec![0.0; d],
            scale: vec![1.0; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, targets: &TargetMatrix) -> TargetMatrix {
        let rows: Vec<Vec<f64>> = targets.rows().map(|r| self.apply_vec(r)).collect();
        TargetMatrix::from_rows(&rows).expect("standardization keeps entries finite")
    }

    pub fn apply_vec(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn invert(&self, targets: &TargetMatrix) -> TargetMatrix {
        let rows: Vec<Vec<f64>> = targets.rows().map(|r| self.invert_vec(r)).collect();
        TargetMatrix::from_rows(&rows).expect("inverse keeps entries finite")
    }

    pub fn invert_vec(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| v * s + m)
            .collect()
    }

    /// Sum of log scales; the density correction between standardized and
    /// original units.
    pub fn log_scale_sum(&self) -> f64 {
        self.scale.iter().map(|s| s.ln()).sum()
    }
}

/// Fit a [`Standardizer`] with the n-1 variance denominator.
pub fn fit_standardizer(targets: &TargetMatrix) -> Result<Standardizer> {
    if targets.n() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: targets.n(),
        });
    }
    let n = targets.n() as f64;
    let mean = targets.mean();
    let mut scale = vec![0.0; targets.dim()];
    for row in targets.rows() {
        for (j, v) in row.iter().enumerate() {
            scale[j] += (v - mean[j]) * (v - mean[j]);
        }
    }
    for s in &mut scale {
        *s = (*s / (n - 1.0)).sqrt().max(SCALE_FLOOR);
    }
    Ok(Standardizer { mean, scale })
}

/// Disjoint (train, val, test) row partition by seeded shuffle.
///
/// Proportions are taken relative to their sum; every row is assigned, with
/// subset sizes within one row of the exact proportional counts. A zero
/// proportion disables that subset; a positive proportion that yields zero
/// rows is a configuration error.
pub fn split_dataset<R: Rng>(
    dataset: &Dataset,
    proportions: (f64, f64, f64),
    rng: &mut R,
) -> Result<(Dataset, Dataset, Dataset)> {
    let props = [proportions.0, proportions.1, proportions.2];
    if props.iter().any(|p| *p < 0.0 || !p.is_finite()) {
        return Err(Error::config("split proportions must be non-negative"));
    }
    let total: f64 = props.iter().sum();
    if total <= 0.0 {
        return Err(Error::config("split proportions must not all be zero"));
    }
    if total > 1.0 + 1e-9 {
        return Err(Error::config(format!(
            "split proportions sum to {total} > 1"
        )));
    }
    let n = dataset.n();

    // Largest-remainder apportionment of all n rows.
    let mut sizes = [0usize; 3];
    let mut remainders = [0.0f64; 3];
    let mut assigned = 0;
    for (i, p) in props.iter().enumerate() {
        let exact = n as f64 * p / total;
        sizes[i] = exact.floor() as usize;
        remainders[i] = exact - exact.floor();
        assigned += sizes[i];
    }
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| remainders[b].partial_cmp(&remainders[a]).unwrap());
    for &i in order.iter().cycle().take(n - assigned) {
        sizes[i] += 1;
    }
    for (i, &size) in sizes.iter().enumerate() {
        if props[i] > 0.0 && size == 0 {
            return Err(Error::config(format!(
                "requested subset {i} has zero rows (n = {n})"
            )));
        }
    }

    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(rng);
    let take = |count: usize, start: usize| -> Vec<usize> {
        let mut part = indices[start..start + count].to_vec();
        part.sort_unstable();
        part
    };
    let train_idx = take(sizes[0], 0);
    let val_idx = take(sizes[1], sizes[0]);
    let test_idx = take(sizes[2], sizes[0] + sizes[1]);

    Ok((
        dataset.select_rows(&train_idx),
        dataset.select_rows(&val_idx),
        dataset.select_rows(&test_idx),
    ))
}

/// Uniform m-subset of `0..n` without replacement (all of them if n <= m),
/// returned sorted.
pub fn subsample_indices<R: Rng>(n: usize, m: usize, rng: &mut R) -> Vec<usize> {
    if n <= m {
        return (0..n).collect();
    }
    let mut picked = rand::seq::index::sample(rng, n, m).into_vec();
    picked.sort_unstable();
    picked
}

/// Uniform m-subset of `rows` without replacement; all rows if there are no
/// more than m of them.
pub fn subsample_without_replacement<T: Clone, R: Rng>(
    rows: &[T],
    m: usize,
    rng: &mut R,
) -> Vec<T> {
    subsample_indices(rows.len(), m, rng)
        .into_iter()
        .map(|i| rows[i].clone())
        .collect()
}
