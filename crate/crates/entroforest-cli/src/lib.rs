//! Experiment runners behind the `entroforest` command-line interface:
//! the information-gain bias simulation, classification and regression
//! protocols with model selection, and report rendering.

pub mod bias;
pub mod experiments;
pub mod report;
