//! Successive elimination over a set of arms played round-robin.

use crate::env::{EnvError, ImpairedEnv, RoundRecord};
use crate::scalar::{ln_horizon, Real};

use super::{ArmStats, Policy};

/// Confidence radius `sqrt(ln T / n)`.
fn radius<F: Real>(ln_t: F, accrued: u64) -> F {
    (ln_t / F::from_count(accrued)).sqrt()
}

/// Whether `arm` is eliminated against `active`:
/// `X̄_j + CB_j < max_{j'} (X̄_{j'} − CB_{j'})`, where arms with no accrued
/// sample sit out on both sides.
pub fn se_eliminates<F: Real>(
    arm: usize,
    active: &[usize],
    stats: &[ArmStats<F>],
    ln_t: F,
) -> bool {
    let own = &stats[arm];
    if own.accrued == 0 {
        return false;
    }
    let upper = own.mean() + radius(ln_t, own.accrued);
    active
        .iter()
        .filter(|&&j| stats[j].accrued > 0)
        .any(|&j| stats[j].mean() - radius(ln_t, stats[j].accrued) > upper)
}

/// One call of SE on a bucket: plays the bucket's surviving arms in
/// ascending index order, cycling, for `budget` rounds. After each play the
/// played arm faces the elimination test.
#[derive(Clone, Debug, PartialEq)]
pub struct SeRound<F> {
    arms: Vec<usize>,
    cursor: usize,
    budget: u64,
    played: u64,
    ln_t: F,
}

impl<F: Real> SeRound<F> {
    /// `overall_horizon` is the `T` inside the confidence radius.
    pub fn new(arms: &[usize], budget: u64, overall_horizon: u64) -> Self {
        let mut arms = arms.to_vec();
        arms.sort_unstable();
        assert!(!arms.is_empty(), "SE needs at least one arm");
        Self {
            arms,
            cursor: 0,
            budget,
            played: 0,
            ln_t: ln_horizon(overall_horizon),
        }
    }

    pub fn current_arm(&self) -> usize {
        self.arms[self.cursor]
    }

    pub fn active(&self) -> &[usize] {
        &self.arms
    }

    pub fn played(&self) -> u64 {
        self.played
    }

    pub fn is_finished(&self) -> bool {
        self.played >= self.budget
    }

    /// Consumes the outcome of playing [`Self::current_arm`].
    pub fn record(&mut self, record: &RoundRecord<F>, stats: &mut [ArmStats<F>]) {
        let arm = self.current_arm();
        debug_assert_eq!(record.arm, arm);
        stats[arm].record(record);
        self.played += 1;
        if self.arms.len() > 1 && se_eliminates(arm, &self.arms, stats, self.ln_t) {
            self.arms.remove(self.cursor);
            if self.cursor == self.arms.len() {
                self.cursor = 0;
            }
        } else {
            self.cursor = (self.cursor + 1) % self.arms.len();
        }
    }

    /// Runs the remaining budget (or up to `limit` more rounds) against `env`.
    pub fn run(
        &mut self,
        env: &mut ImpairedEnv<'_, F>,
        stats: &mut [ArmStats<F>],
        limit: u64,
    ) -> Result<Vec<RoundRecord<F>>, EnvError> {
        let mut out = Vec::new();
        while !self.is_finished() && (out.len() as u64) < limit {
            let rec = env.step(self.current_arm())?;
            self.record(&rec, stats);
            out.push(rec);
        }
        Ok(out)
    }
}

/// Standalone SE over all arms for the whole horizon.
#[derive(Clone, Debug)]
pub struct SuccessiveElimination<F> {
    stats: Vec<ArmStats<F>>,
    round: SeRound<F>,
    horizon: u64,
}

impl<F: Real> SuccessiveElimination<F> {
    pub fn new(num_arms: usize, horizon: u64) -> Self {
        let arms: Vec<usize> = (0..num_arms).collect();
        Self {
            stats: vec![ArmStats::default(); num_arms],
            round: SeRound::new(&arms, horizon, horizon),
            horizon,
        }
    }

    /// SE over `arms` for `budget` rounds, inheriting earlier statistics.
    pub fn with_state(
        arms: &[usize],
        budget: u64,
        overall_horizon: u64,
        stats: Vec<ArmStats<F>>,
    ) -> Self {
        Self {
            stats,
            round: SeRound::new(arms, budget, overall_horizon),
            horizon: budget,
        }
    }

    pub fn stats(&self) -> &[ArmStats<F>] {
        &self.stats
    }
}

impl<F: Real> Policy<F> for SuccessiveElimination<F> {
    fn name(&self) -> &'static str {
        "se"
    }

    fn select_arm(&mut self, _t: u64) -> usize {
        self.round.current_arm()
    }

    fn observe(&mut self, record: &RoundRecord<F>) {
        self.round.record(record, &mut self.stats);
    }

    fn active_arms(&self) -> Vec<usize> {
        self.round.active().to_vec()
    }

    fn horizon(&self) -> u64 {
        self.horizon
    }
}
