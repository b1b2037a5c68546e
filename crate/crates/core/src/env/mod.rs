//! The impaired bandit environment: instances, the accrual rule and regret
//! accounting.

mod instance;
mod step;
mod trace;
mod window;

use thiserror::Error;

pub use instance::{
    epsilon_of, gaps_of, ArmSpec, BanditInstance, Gaps, ImpairmentKind, ImpairmentSpec,
    MOMENT_SAMPLES,
};
pub use step::{EnvSeeds, ImpairedEnv};
pub use trace::{cumulative_regret, oracle_trace, Benchmark, RegretMode, RoundRecord, Trace};
pub use window::SlidingWindowCounter;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("an instance needs at least 2 arms, got {0}")]
    TooFewArms(usize),
    #[error("arm mean {0} is outside [0, 1]")]
    MeanOutOfRange(f64),
    #[error("{impairments} impairment specs for {arms} arms")]
    ImpairmentCount { arms: usize, impairments: usize },
    #[error("window N must be positive")]
    ZeroWindow,
    #[error("horizon T must be positive")]
    ZeroHorizon,
    #[error("arm {arm}: d_max = {d_max} exceeds window N = {window}")]
    DMaxExceedsWindow { arm: usize, d_max: u32, window: u32 },
    #[error("invalid impairment: {0}")]
    InvalidImpairment(String),
    #[error("arm index {arm} out of range for {num_arms} arms")]
    InvalidArm { arm: usize, num_arms: usize },
    #[error("trace does not match instance: {0}")]
    TraceMismatch(String),
}
