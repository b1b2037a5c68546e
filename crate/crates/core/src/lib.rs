//! Stochastic multi-armed bandits under impairment feedback.
//!
//! A play of arm `j` in round `t` accrues its Bernoulli reward only if `j`
//! was played at least `d_{t,j}` times over the last `N` rounds (round `t`
//! included), where `d_{t,j}` is drawn afresh every round. The crate
//! provides the environment, phase-based elimination policies designed for
//! this feedback (bucketed Phased-SE and UCB-Revisited+), baselines (UCB1,
//! SE, UCB-Revisited), schedule and regret-bound calculators, and a seeded
//! Monte Carlo harness with a CLI on top.
//!
//! Numeric code is generic over [`Real`]; the aliases below fix it to `f64`.

pub mod bounds;
pub mod cli_io;
pub mod env;
pub mod harness;
pub mod policies;
pub mod rng;
pub mod scalar;
pub mod schedule;

pub use scalar::Real;

pub type Instance = env::BanditInstance<f64>;
pub type Impairment = env::ImpairmentSpec<f64>;
pub type Record = env::RoundRecord<f64>;
pub type SimTrace = env::Trace<f64>;
pub type Curve = harness::AggregateCurve<f64>;
pub type Config = harness::ExperimentConfig<f64>;
pub type PhaseSchedule = schedule::Schedule<f64>;
