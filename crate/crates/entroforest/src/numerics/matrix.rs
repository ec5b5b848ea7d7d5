//! Dense sample matrices and small symmetric PSD linear algebra.
//!
//! Matrices here are tiny (output dimension d <= 64), so the eigen solver is
//! a cyclic Jacobi iteration and the determinant goes through an LDL^T
//! factorization with a pivot floor for rank-deficient scatter matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the symmetry check on [`PsdMatrix`].
const SYMMETRY_TOL: f64 = 1e-12;

/// Pivot floor for [`log_det_psd`]; pivots below it are clamped and the
/// result is flagged degenerate.
pub const DET_PIVOT_FLOOR: f64 = 1e-12;

/// An n x d matrix of real target vectors, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetMatrix {
    n: usize,
    d: usize,
    data: Vec<f64>,
}

impl TargetMatrix {
    /// Build from a flat row-major buffer of length `n * d`.
    pub fn new(n: usize, d: usize, data: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("target dimension must be at least 1"));
        }
        if data.len() != n * d {
            return Err(Error::domain(format!(
                "buffer length {} does not match {n} x {d}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite target entry {bad}")));
        }
        Ok(Self { n, d, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map(|r| r.len()).unwrap_or(1);
        let mut data = Vec::with_capacity(rows.len() * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::domain("ragged target rows"));
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), d.max(1), data)
    }

    /// 1-d column vector convenience.
    pub fn column_vector(values: &[f64]) -> Result<Self> {
        Self::new(values.len(), 1, values.to_vec())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.d + j]).collect()
    }

    /// Copy of the rows at `indices`, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> TargetMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        TargetMatrix {
            n: indices.len(),
            d: self.d,
            data,
        }
    }

    /// Per-dimension mean; zero vector for an empty matrix.
    pub fn mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.d];
        if self.n == 0 {
            return mean;
        }
        for row in self.rows() {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= self.n as f64;
        }
        mean
    }
}

/// A symmetric positive semi-definite d x d matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl PsdMatrix {
    /// Build from a flat row-major buffer, checking symmetry to relative
    /// tolerance 1e-12.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("matrix dimension must be at least 1"));
        }
        if data.len() != dim * dim {
            return Err(Error::domain(format!(
                "buffer length {} does not match {dim} x {dim}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite matrix entry {bad}")));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let a = data[i * dim + j];
                let b = data[j * dim + i];
                let scale = a.abs().max(b.abs());
                if (a - b).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::domain(format!(
                        "matrix not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, v) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = *v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Copy with all off-diagonal entries set to zero.
    pub fn diagonal_part(&self) -> PsdMatrix {
        PsdMatrix::from_diag(&(0..self.dim).map(|i| self.get(i, i)).collect::<Vec<_>>())
    }

    /// Copy with `lambda` added to every diagonal entry.
    pub fn add_diag(&self, lambda: f64) -> PsdMatrix {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += lambda;
        }
        out
    }

    /// Copy scaled by `c`.
    pub fn scaled(&self, c: f64) -> PsdMatrix {
        PsdMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

/// Log-determinant with a degeneracy flag set when any pivot was clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub value: f64,
    pub degenerate: bool,
}

/// Eigendecomposition of a symmetric matrix: `vectors` is row-major with
/// column j holding the eigenvector for `values[j]`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

impl SymEigen {
    pub fn vector_entry(&self, row: usize, col: usize) -> f64 {
        self.vectors[row * self.values.len() + col]
    }
}

/// Sample covariance or raw scatter of the rows of `samples`.
///
/// With `center = true` this is the usual unbiased covariance
/// sum (y - mean)(y - mean)^T / (n - 1) and requires n >= 2. With
/// `center = false` it is the raw scatter sum y y^T (no normalization,
/// valid from n >= 1), which is what the second-moment entropy estimator
/// consumes.
pub fn sample_covariance(samples: &TargetMatrix, center: bool) -> Result<PsdMatrix> {
    if center {
        if samples.n() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: samples.n(),
            });
        }
        let scatter = scatter_matrix(samples, true)?;
        Ok(scatter.scaled(1.0 / (samples.n() as f64 - 1.0)))
    } else {
        scatter_matrix(samples, false)
    }
}

/// Scatter matrix sum (y - c)(y - c)^T with c the sample mean
/// (`center = true`) or the origin (`center = false`).
pub fn scatter_matrix(samples: &TargetMatrix, center: bool) -> Result<PsdMatrix> {
    let n = samples.n();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let d = samples.dim();
    let mean = if center { samples.mean() } else { vec![0.0; d] };
    let mut data = vec![0.0; d * d];
    let mut centered = vec![0.0; d];
    for row in samples.rows() {
        for j in 0..d {
            centered[j] = row[j] - mean[j];
        }
        for i in 0..d {
            for j in i..d {
                data[i * d + j] += centered[i] * centered[j];
            }
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            data[j * d + i] = data[i * d + j];
        }
    }
    Ok(PsdMatrix { dim: d, data })
}

/// Eigendecomposition by cyclic Jacobi rotations.
pub fn sym_eigen(m: &PsdMatrix) -> Result<SymEigen> {
    let d = m.dim;
    let mut a = m.data.clone();
    let mut v = PsdMatrix::identity(d).data;

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                s += a[i * d + j] * a[i * d + j];
            }
        }
        s
    };
    let frob: f64 = a.iter().map(|x| x * x).sum();
    let tol = 1e-28 * frob.max(f64::MIN_POSITIVE);

    let max_sweeps = 100;
    let mut converged = false;
    for _ in 0..max_sweeps {
        if off(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[p * d + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * d + p];
                let aqq = a[q * d + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - s * vkq;
                    v[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off(&a) > tol {
        return Err(Error::Numeric(
            "Jacobi eigen-iteration did not converge".into(),
        ));
    }
    let values = (0..d).map(|i| a[i * d + i]).collect();
    Ok(SymEigen { values, vectors: v })
}

/// Symmetric PSD square root: S with S S = m. Negative eigenvalues within
/// tolerance of zero are clamped; larger ones are a domain error.
pub fn psd_sqrt(m: &PsdMatrix) -> Result<PsdMatrix> {
    let eig = sym_eigen(m)?;
    let d = m.dim;
    let max_abs = eig
        .values
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let neg_tol = 1e-8 * max_abs.max(f64::EPSILON);
    let mut roots = Vec::with_capacity(d);
    for &lambda in &eig.values {
        if lambda < -neg_tol {
            return Err(Error::domain(format!(
                "matrix not PSD: eigenvalue {lambda}"
            )));
        }
        roots.push(lambda.max(0.0).sqrt());
    }
    let mut data = vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            let mut s = 0.0;
            for (k, r) in roots.iter().enumerate() {
                s += eig.vector_entry(i, k) * r * eig.vector_entry(j, k);
            }
            data[i * d + j] = s;
            data[j * d + i] = s;
        }
    }
    Ok(PsdMatrix { dim: d, data })
}

/// Log-determinant through an LDL^T factorization.
///
/// Pivots below [`DET_PIVOT_FLOOR`] are clamped to the floor (both in the
/// log sum and in the continuing factorization) and the result is flagged
/// degenerate, so singular scatter matrices still yield a finite, strongly
/// penalizing value.
pub fn log_det_psd(m: &PsdMatrix) -> LogDet {
    let d = m.dim;
    let mut lower = vec![0.0; d * d];
    let mut pivots = vec![0.0; d];
    let mut degenerate = false;
    let mut log_det = 0.0;

    for j in 0..d {
        let mut pivot = m.get(j, j);
        for k in 0..j {
            pivot -= lower[j * d + k] * lower[j * d + k] * pivots[k];
        }
        if !(pivot >= DET_PIVOT_FLOOR) {
            pivot = DET_PIVOT_FLOOR;
            degenerate = true;
        }
        pivots[j] = pivot;
        log_det += pivot.ln();
        for i in (j + 1)..d {
            let mut value = m.get(i, j);
            for k in 0..j {
                value -= lower[i * d + k] * lower[j * d + k] * pivots[k];
            }
            lower[i * d + j] = value / pivot;
        }
    }
    LogDet {
        value: log_det,
        degenerate,
    }
}
