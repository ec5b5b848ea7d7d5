//! Differential entropy estimators: Normal-approximation plug-in (full and
//! diagonal covariance), the unbiased minimum-variance Normal estimator, and
//! the 1-nearest-neighbor non-parametric estimator.

use rand::Rng;

use crate::data::subsample_indices;
use crate::error::{Error, Result};
use crate::neighbors::all_1nn_distances;
use crate::numerics::{
    digamma, log_det_psd, sample_covariance, scatter_matrix, unit_ball_volume, TargetMatrix,
    EULER_GAMMA,
};

use super::EntropyEstimate;

/// Clamp applied to zero 1-NN distances before taking the logarithm.
const RHO_FLOOR: f64 = 1e-12;

/// Which scatter and digamma offsets the unbiased Normal estimator uses.
///
/// `Centered` subtracts the sample mean (appropriate for tree-node targets
/// with unknown mean); `AsPrinted` keeps the raw second moment and is
/// unbiased only for data with known zero mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum UmvueVariant {
    Centered,
    AsPrinted,
}

const HALF_LN_TWO_PI_E: f64 = 1.418_938_533_204_672_7;

/// Entropy of the fitted multivariate Normal:
/// (d/2)(1 + log 2 pi) + (1/2) log |C| with C the centered sample
/// covariance. Singular covariances use the clamped log-determinant and
/// flag the estimate degenerate.
pub fn mvn_plugin_entropy(samples: &TargetMatrix) -> Result<EntropyEstimate> {
    let cov = sample_covariance(samples, true)?;
    let ld = log_det_psd(&cov);
    Ok(EntropyEstimate {
        value: samples.dim() as f64 * HALF_LN_TWO_PI_E + 0.5 * ld.value,
        degenerate: ld.degenerate,
    })
}

/// Diagonal special case: the plug-in estimate with all covariances zeroed.
pub fn mvn_diag_entropy(samples: &TargetMatrix) -> Result<EntropyEstimate> {
    let cov = sample_covariance(samples, true)?.diagonal_part();
    let ld = log_det_psd(&cov);
    Ok(EntropyEstimate {
        value: samples.dim() as f64 * HALF_LN_TWO_PI_E + 0.5 * ld.value,
        degenerate: ld.degenerate,
    })
}

/// Uniformly minimum-variance unbiased estimator of the Normal entropy:
/// (d/2) log(e pi) + (1/2) log |scatter| - (1/2) sum_j psi((m + 1 - j)/2),
/// with the scatter and the degrees of freedom m depending on the variant.
pub fn mvn_umvue_entropy(
    samples: &TargetMatrix,
    variant: UmvueVariant,
) -> Result<EntropyEstimate> {
    let n = samples.n();
    let d = samples.dim();
    let needed = match variant {
        UmvueVariant::Centered => d + 2,
        UmvueVariant::AsPrinted => d + 1,
    };
    if n < needed {
        return Err(Error::InsufficientSamples { needed, got: n });
    }

    let (scatter, dof) = match variant {
        UmvueVariant::Centered => (scatter_matrix(samples, true)?, n as f64 - 1.0),
        UmvueVariant::AsPrinted => (scatter_matrix(samples, false)?, n as f64),
    };
    let ld = log_det_psd(&scatter);
    let mut psi_sum = 0.0;
    for j in 1..=d {
        psi_sum += digamma((dof + 1.0 - j as f64) / 2.0)?;
    }
    let half_ln_e_pi = 0.5 * (1.0 + std::f64::consts::PI.ln());
    Ok(EntropyEstimate {
        value: d as f64 * half_ln_e_pi + 0.5 * ld.value - 0.5 * psi_sum,
        degenerate: ld.degenerate,
    })
}

/// Kozachenko-Leonenko 1-nearest-neighbor estimate
/// (d/m) sum log rho_i + log(m - 1) + gamma + log V_d,
/// on a without-replacement subsample of at most `subsample_size` rows.
///
/// Zero distances (exact duplicates) are clamped to 1e-12 and flag the
/// estimate degenerate; dequantizing the targets upstream is the real fix.
pub fn one_nn_entropy<R: Rng>(
    samples: &TargetMatrix,
    rng: &mut R,
    subsample_size: usize,
) -> Result<EntropyEstimate> {
    if samples.n() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples.n(),
        });
    }
    if subsample_size < 2 {
        return Err(Error::config(format!(
            "1-NN subsample size must be at least 2, got {subsample_size}"
        )));
    }
    let indices = subsample_indices(samples.n(), subsample_size, rng);
    let subset = samples.select_rows(&indices);
    let m = subset.n();
    let d = subset.dim();

    let distances = all_1nn_distances(&subset)?;
    let mut degenerate = false;
    let mut log_sum = 0.0;
    for rho in distances {
        if rho <= 0.0 {
            degenerate = true;
            log_sum += RHO_FLOOR.ln();
        } else {
            log_sum += rho.ln();
        }
    }
    let value = d as f64 / m as f64 * log_sum
        + (m as f64 - 1.0).ln()
        + EULER_GAMMA
        + unit_ball_volume(d).ln();
    Ok(EntropyEstimate { value, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian_sample(n: usize, rng: &mut ChaCha8Rng) -> TargetMatrix {
        let values: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        TargetMatrix::column_vector(&values).unwrap()
    }

    /// Three zero-mean points whose centered sample covariance is
    /// exactly the identity: scaled third roots of unity.
    fn unit_covariance_rows() -> Vec<[f64; 2]> {
        let s = 2.0 / 3.0f64.sqrt();
        let h = 3.0f64.sqrt() / 2.0;
        vec![[s, 0.0], [-0.5 * s, h * s], [-0.5 * s, -h * s]]
    }

    #[test]
    fn plugin_matches_closed_form_on_unit_variance() {
        let m = TargetMatrix::column_vector(&[
            -std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        ])
        .unwrap();
        let est = mvn_plugin_entropy(&m).unwrap();
        assert_abs_diff_eq!(est.value, HALF_LN_TWO_PI_E, epsilon = 1e-10);
        assert!(!est.degenerate);
    }

    #[test]
    fn plugin_two_dimensional_values() {
        let rows: Vec<Vec<f64>> = unit_covariance_rows()
            .iter()
            .map(|r| r.to_vec())
            .collect();
        let m = TargetMatrix::from_rows(&rows).unwrap();
        let est = mvn_plugin_entropy(&m).unwrap();
        assert_abs_diff_eq!(est.value, 2.0 * HALF_LN_TWO_PI_E, epsilon = 1e-10);
    }

    #[test]
    fn plugin_correlated_covariance() {
        // y = L z maps the identity-covariance sample to covariance
        // [[1, .5], [.5, 1]] through its Cholesky factor L.
        let l21 = 0.5;
        let l22 = (1.0f64 - 0.25).sqrt();
        let rows: Vec<Vec<f64>> = unit_covariance_rows()
            .iter()
            .map(|r| vec![r[0], l21 * r[0] + l22 * r[1]])
            .collect();
        let m = TargetMatrix::from_rows(&rows).unwrap();
        let est = mvn_plugin_entropy(&m).unwrap();
        // 2 * (1/2)(1 + ln 2 pi) + (1/2) ln(3/4)
        assert_abs_diff_eq!(est.value, 2.69403603018345502, epsilon = 1e-10);
    }

    #[test]
    fn diag_equals_plugin_on_diagonal_covariance() {
        let m = TargetMatrix::from_rows(&[
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 2.0],
            vec![0.0, -2.0],
        ])
        .unwrap();
        let a = mvn_plugin_entropy(&m).unwrap().value;
        let b = mvn_diag_entropy(&m).unwrap().value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
    }

    #[test]
    fn diag_ignores_correlation() {
        let l21 = 0.5;
        let l22 = (1.0f64 - 0.25).sqrt();
        let rows: Vec<Vec<f64>> = unit_covariance_rows()
            .iter()
            .map(|r| vec![r[0], l21 * r[0] + l22 * r[1]])
            .collect();
        let m = TargetMatrix::from_rows(&rows).unwrap();
        let est = mvn_diag_entropy(&m).unwrap();
        assert_abs_diff_eq!(est.value, 2.0 * HALF_LN_TWO_PI_E, epsilon = 1e-10);
    }

    #[test]
    fn diag_dominates_plugin() {
        // Hadamard: |C| <= prod C_jj, so the diagonal entropy can only be
        // larger.
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..50 {
            let rows: Vec<Vec<f64>> = (0..12)
                .map(|_| {
                    let a: f64 = StandardNormal.sample(&mut rng);
                    let b: f64 = StandardNormal.sample(&mut rng);
                    vec![a, 0.7 * a + 0.3 * b]
                })
                .collect();
            let m = TargetMatrix::from_rows(&rows).unwrap();
            let plugin = mvn_plugin_entropy(&m).unwrap().value;
            let diag = mvn_diag_entropy(&m).unwrap().value;
            assert!(diag >= plugin - 1e-12);
        }
    }

    #[test]
    fn plugin_needs_two_samples() {
        let m = TargetMatrix::column_vector(&[1.0]).unwrap();
        assert!(mvn_plugin_entropy(&m).is_err());
    }

    #[test]
    fn plugin_flags_singular() {
        let m = TargetMatrix::column_vector(&[2.0, 2.0, 2.0]).unwrap();
        let est = mvn_plugin_entropy(&m).unwrap();
        assert!(est.degenerate);
        assert!(est.value < -10.0);
    }

    #[test]
    fn umvue_hand_value() {
        // Centered, d = 1, n = 3, centered scatter exactly 2:
        // (1/2)(1 + ln pi) + (1/2) ln 2 + gamma / 2.
        let m = TargetMatrix::column_vector(&[-1.0, 0.0, 1.0]).unwrap();
        let est = mvn_umvue_entropy(&m, UmvueVariant::Centered).unwrap();
        assert_abs_diff_eq!(est.value, 1.7075463656554392, epsilon = 1e-10);
    }

    #[test]
    fn umvue_minimum_counts() {
        let m = TargetMatrix::column_vector(&[0.0, 1.0]).unwrap();
        assert!(mvn_umvue_entropy(&m, UmvueVariant::Centered).is_err());
        assert!(mvn_umvue_entropy(&m, UmvueVariant::AsPrinted).is_ok());
    }

    #[test]
    fn one_nn_hand_value() {
        // Two points distance 1 apart: gamma + ln 2.
        let m = TargetMatrix::column_vector(&[0.0, 1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let est = one_nn_entropy(&m, &mut rng, 256).unwrap();
        assert_abs_diff_eq!(est.value, 1.2703628454614782, epsilon = 1e-10);
        assert!(!est.degenerate);
    }

    #[test]
    fn one_nn_flags_duplicates() {
        let m = TargetMatrix::column_vector(&[3.0, 3.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let est = one_nn_entropy(&m, &mut rng, 256).unwrap();
        assert!(est.degenerate);
    }

    #[test]
    fn one_nn_needs_two() {
        let m = TargetMatrix::column_vector(&[3.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        assert!(one_nn_entropy(&m, &mut rng, 256).is_err());
        let m = TargetMatrix::column_vector(&[3.0, 4.0]).unwrap();
        assert!(one_nn_entropy(&m, &mut rng, 1).is_err());
    }

    #[test]
    fn one_nn_translation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        let m = gaussian_sample(400, &mut rng);
        let shifted_rows: Vec<Vec<f64>> = m.rows().map(|r| vec![r[0] + 17.25]).collect();
        let shifted = TargetMatrix::from_rows(&shifted_rows).unwrap();

        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        let a = one_nn_entropy(&m, &mut r1, 256).unwrap().value;
        let b = one_nn_entropy(&shifted, &mut r2, 256).unwrap().value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
    }

    #[test]
    fn one_nn_scaling_shift() {
        // Scaling y -> c y shifts the estimate by exactly d ln c.
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        let m = gaussian_sample(300, &mut rng);
        let c = 3.5;
        let scaled_rows: Vec<Vec<f64>> = m.rows().map(|r| vec![c * r[0]]).collect();
        let scaled = TargetMatrix::from_rows(&scaled_rows).unwrap();

        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        let a = one_nn_entropy(&m, &mut r1, 256).unwrap().value;
        let b = one_nn_entropy(&scaled, &mut r2, 256).unwrap().value;
        assert_abs_diff_eq!(b - a, c.ln(), epsilon = 1e-9);
    }
}
