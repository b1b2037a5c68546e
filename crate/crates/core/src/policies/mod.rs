//! Sequential policies. Every policy is a state machine driven by the
//! harness: `select_arm` names the arm for round `t`, `observe` feeds back
//! the resulting record. Non-accruing plays are reported as such, never as
//! zero rewards.

mod phase;
mod phased_se;
mod se;
mod ucb1;
mod ucb_revisited;

use crate::env::RoundRecord;
use crate::scalar::Real;

pub use phase::{
    bucket_capacity, end_of_phase_eliminate, partition_buckets, phase_mean, PhaseMeanMode,
    PhaseSummary,
};
pub use phased_se::PhasedSe;
pub use se::{se_eliminates, SeRound, SuccessiveElimination};
pub use ucb1::Ucb1;
pub use ucb_revisited::UcbRevisitedPlus;

pub trait Policy<F: Real> {
    fn name(&self) -> &'static str;

    /// Arm to play in round `t` (1-based).
    fn select_arm(&mut self, t: u64) -> usize;

    fn observe(&mut self, record: &RoundRecord<F>);

    /// Arms not yet eliminated, ascending.
    fn active_arms(&self) -> Vec<usize>;

    fn horizon(&self) -> u64;

    fn is_done(&self, t: u64) -> bool {
        t > self.horizon()
    }
}

/// Accrued-sample statistics of one arm.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ArmStats<F> {
    pub plays: u64,
    pub accrued: u64,
    pub reward_sum: F,
}

impl<F: Real> ArmStats<F> {
    /// Mean of accrued rewards; zero before the first accrual.
    pub fn mean(&self) -> F {
        if self.accrued == 0 {
            F::zero()
        } else {
            self.reward_sum / F::from_count(self.accrued)
        }
    }

    pub fn record(&mut self, record: &RoundRecord<F>) {
        self.plays += 1;
        if record.accrued {
            self.accrued += 1;
            self.reward_sum += record.reward;
        }
    }
}
