//! Discrete and differential entropy estimators, split scoring, and the
//! exact multinomial information gain.

mod differential;
mod discrete;
mod score;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::TargetMatrix;

pub use differential::{
    mvn_diag_entropy, mvn_plugin_entropy, mvn_umvue_entropy, one_nn_entropy, UmvueVariant,
};
pub use discrete::{
    grassberger_entropy, grassberger_g, miller_entropy, naive_entropy, ClassHistogram,
};
pub use score::{
    multinomial_info_gain_exact, split_score, JointClassSplitDistribution, SplitSide,
};

/// Default without-replacement subsample size for the 1-NN estimator.
pub const DEFAULT_ONE_NN_SUBSAMPLE: usize = 256;

/// An entropy value in nats plus a flag marking estimates that hit a
/// numerical clamp (singular covariance, zero 1-NN distance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub value: f64,
    pub degenerate: bool,
}

/// Which entropy estimator split scoring uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EstimatorKind {
    Naive,
    Miller,
    Grassberger,
    MvnPlugin,
    MvnDiag,
    MvnUmvue { variant: UmvueVariant },
    OneNn { subsample_size: usize },
}

impl EstimatorKind {
    /// Default minimum-variance unbiased Normal estimator (centered).
    pub fn mvn_umvue() -> Self {
        EstimatorKind::MvnUmvue {
            variant: UmvueVariant::Centered,
        }
    }

    /// Default 1-NN estimator with the 256-sample subsample.
    pub fn one_nn() -> Self {
        EstimatorKind::OneNn {
            subsample_size: DEFAULT_ONE_NN_SUBSAMPLE,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            EstimatorKind::Naive | EstimatorKind::Miller | EstimatorKind::Grassberger
        )
    }

    pub fn is_differential(&self) -> bool {
        !self.is_discrete()
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            EstimatorKind::Naive => "naive",
            EstimatorKind::Miller => "miller",
            EstimatorKind::Grassberger => "grassberger",
            EstimatorKind::MvnPlugin => "mvn-plugin",
            EstimatorKind::MvnDiag => "mvn-diag",
            EstimatorKind::MvnUmvue { .. } => "mvn-umvue",
            EstimatorKind::OneNn { .. } => "one-nn",
        };
        f.write_str(name)
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(EstimatorKind::Naive),
            "miller" => Ok(EstimatorKind::Miller),
            "grassberger" => Ok(EstimatorKind::Grassberger),
            "mvn-plugin" => Ok(EstimatorKind::MvnPlugin),
            "mvn-diag" => Ok(EstimatorKind::MvnDiag),
            "mvn-umvue" => Ok(EstimatorKind::mvn_umvue()),
            "one-nn" => Ok(EstimatorKind::one_nn()),
            other => Err(Error::config(format!(
                "unknown estimator {other:?} (expected naive|miller|grassberger|\
                 mvn-plugin|mvn-diag|mvn-umvue|one-nn)"
            ))),
        }
    }
}

/// Dispatch a discrete estimator over a class histogram.
pub fn discrete_entropy(hist: &ClassHistogram, kind: &EstimatorKind) -> Result<f64> {
    match kind {
        EstimatorKind::Naive => naive_entropy(hist),
        EstimatorKind::Miller => miller_entropy(hist),
        EstimatorKind::Grassberger => grassberger_entropy(hist),
        other => Err(Error::config(format!(
            "estimator {other} cannot score a class histogram"
        ))),
    }
}

/// Dispatch a differential estimator over a target matrix.
pub fn differential_entropy<R: Rng>(
    samples: &TargetMatrix,
    kind: &EstimatorKind,
    rng: &mut R,
) -> Result<EntropyEstimate> {
    match kind {
        EstimatorKind::MvnPlugin => mvn_plugin_entropy(samples),
        EstimatorKind::MvnDiag => mvn_diag_entropy(samples),
        EstimatorKind::MvnUmvue { variant } => mvn_umvue_entropy(samples, *variant),
        EstimatorKind::OneNn { subsample_size } => {
            one_nn_entropy(samples, rng, *subsample_size)
        }
        other => Err(Error::config(format!(
            "estimator {other} cannot score continuous targets"
        ))),
    }
}
