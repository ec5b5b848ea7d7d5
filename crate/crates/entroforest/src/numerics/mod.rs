//! Special functions and small dense symmetric linear algebra.

mod matrix;
mod special;

pub use matrix::{
    log_det_psd, psd_sqrt, sample_covariance, scatter_matrix, sym_eigen, LogDet, PsdMatrix,
    SymEigen, TargetMatrix, DET_PIVOT_FLOOR,
};
pub use special::{digamma, ln_gamma, unit_ball_volume, EULER_GAMMA};
