//! Decision forest induction with improved entropy estimators.
//!
//! Split selection during tree growth maximizes an information-gain score;
//! this crate provides bias-corrected discrete estimators (Miller,
//! Grassberger) and differential estimators (Normal plug-in and UMVUE,
//! 1-nearest-neighbor) behind a common interface, plus the forest trainer,
//! kernel-density leaf models, and the dataset plumbing around them.

pub mod data;
pub mod entropy;
pub mod error;
pub mod forest;
pub mod neighbors;
pub mod numerics;
pub mod seeding;

pub use error::{Error, Result};
