//! Seeded Monte Carlo experiments.
//!
//! A run is a pure function of `(config, run_index)`. Runs may execute in
//! parallel, but aggregation always walks them in ascending run index, so
//! results are bit-identical regardless of thread count.

mod config;
mod experiments;
mod run;

use thiserror::Error;

use crate::env::EnvError;

pub use config::{
    raise_top_arms, ExperimentConfig, ImpairmentModel, InstanceConfig, MeansSource, OutputKind,
    PolicyConfig, PolicyKind, SweepConfig,
};
pub use experiments::{
    bucket_size_sweep, impairment_sweep, mean_bin, same_arm_counts, switching_experiment,
    switching_histogram, BucketSweep,
};
pub use run::{run_monte_carlo, run_single, AggregateCurve, Experiment, RunResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("unknown policy `{0}` (expected one of ucb1, se, phased-se, ucb-revisited, ucb-revisited-plus)")]
    UnknownPolicy(String),
    #[error("invalid experiment: {0}")]
    Config(String),
}
