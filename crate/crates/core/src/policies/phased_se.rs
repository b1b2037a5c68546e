//! Phase-based elimination with bucketed successive elimination inside each
//! phase.
//!
//! At the start of phase `m` the active arms are split into buckets of at
//! most `⌊N / d_max⌋` arms. Each bucket runs SE for
//! `capacity · (n_m − n_{m−1})` rounds, so an arm in a full bucket is played
//! at least once every `capacity` rounds and meets any requirement
//! `d ≤ d_max` inside a window of `N` rounds. Survivors of all buckets then
//! face the end-of-phase test at threshold `Δ̃_m`, and `Δ̃` halves.

use crate::env::RoundRecord;
use crate::scalar::Real;
use crate::schedule::{delta_tilde, Schedule};

use super::{
    bucket_capacity, end_of_phase_eliminate, partition_buckets, ArmStats, PhaseMeanMode,
    PhaseSummary, Policy, SeRound,
};

#[derive(Clone, Debug)]
pub struct PhasedSe<F> {
    stats: Vec<ArmStats<F>>,
    schedule: Schedule<F>,
    window: u32,
    d_max: u32,
    capacity_override: Option<usize>,
    mode: PhaseMeanMode,
    horizon: u64,
    phase: u32,
    delta_tilde: F,
    active: Vec<usize>,
    buckets: Vec<Vec<usize>>,
    bucket_idx: usize,
    bucket_budget: u64,
    round: SeRound<F>,
    within_survivors: Vec<usize>,
    log: Vec<PhaseSummary<F>>,
    next_round: u64,
}

impl<F: Real> PhasedSe<F> {
    pub fn new(
        num_arms: usize,
        window: u32,
        d_max: u32,
        schedule: Schedule<F>,
        horizon: u64,
    ) -> Self {
        let all: Vec<usize> = (0..num_arms).collect();
        let mut policy = Self {
            stats: vec![ArmStats::default(); num_arms],
            schedule,
            window,
            d_max,
            capacity_override: None,
            mode: PhaseMeanMode::default(),
            horizon,
            phase: 1,
            delta_tilde: delta_tilde(1),
            active: all.clone(),
            buckets: Vec::new(),
            bucket_idx: 0,
            bucket_budget: 0,
            round: SeRound::new(&all, 1, horizon),
            within_survivors: Vec::new(),
            log: Vec::new(),
            next_round: 1,
        };
        policy.start_phase();
        policy
    }

    /// Forces the bucket capacity instead of `⌊N / d_max⌋`.
    pub fn with_capacity(mut self, capacity: Option<usize>) -> Self {
        self.capacity_override = capacity.map(|c| c.max(1));
        self.restart();
        self
    }

    pub fn with_mean_mode(mut self, mode: PhaseMeanMode) -> Self {
        self.mode = mode;
        self
    }

    fn restart(&mut self) {
        assert_eq!(self.next_round, 1, "configuration must precede play");
        self.log.clear();
        self.start_phase();
    }

    pub fn capacity(&self) -> usize {
        self.capacity_override
            .unwrap_or_else(|| bucket_capacity(self.active.len(), self.window, self.d_max))
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn delta_tilde(&self) -> F {
        self.delta_tilde
    }

    pub fn stats(&self) -> &[ArmStats<F>] {
        &self.stats
    }

    /// One entry per started phase; the last may be incomplete.
    pub fn phase_log(&self) -> &[PhaseSummary<F>] {
        &self.log
    }

    fn start_phase(&mut self) {
        let capacity = self.capacity();
        self.buckets = partition_buckets(&self.active, capacity);
        self.bucket_budget = (capacity as u64).saturating_mul(self.schedule.increment(self.phase));
        self.bucket_idx = 0;
        self.within_survivors.clear();
        self.round = SeRound::new(&self.buckets[0], self.bucket_budget, self.horizon);
        self.log.push(PhaseSummary {
            phase: self.phase,
            delta_tilde: self.delta_tilde,
            start_round: self.next_round,
            target: self.schedule.target(self.phase),
            active: self.active.clone(),
            buckets: self.buckets.clone(),
            bucket_budget: self.bucket_budget,
            within_survivors: None,
            survivors: None,
        });
    }

    fn finish_bucket(&mut self) {
        self.within_survivors.extend_from_slice(self.round.active());
        self.bucket_idx += 1;
        if self.bucket_idx < self.buckets.len() {
            self.round = SeRound::new(
                &self.buckets[self.bucket_idx],
                self.bucket_budget,
                self.horizon,
            );
        } else {
            self.finish_phase();
        }
    }

    fn finish_phase(&mut self) {
        let mut within = std::mem::take(&mut self.within_survivors);
        within.sort_unstable();
        let target = self.schedule.target(self.phase);
        let survivors =
            end_of_phase_eliminate(&within, &self.stats, target, self.delta_tilde, self.mode);
        if let Some(entry) = self.log.last_mut() {
            entry.within_survivors = Some(within);
            entry.survivors = Some(survivors.clone());
        }
        self.active = survivors;
        self.phase += 1;
        self.delta_tilde = delta_tilde(self.phase);
        self.start_phase();
    }
}

impl<F: Real> Policy<F> for PhasedSe<F> {
    fn name(&self) -> &'static str {
        "phased-se"
    }

    fn select_arm(&mut self, _t: u64) -> usize {
        self.round.current_arm()
    }

    fn observe(&mut self, record: &RoundRecord<F>) {
        self.round.record(record, &mut self.stats);
        self.next_round += 1;
        if self.round.is_finished() {
            self.finish_bucket();
        }
    }

    fn active_arms(&self) -> Vec<usize> {
        let mut arms = self.within_survivors.clone();
        arms.extend_from_slice(self.round.active());
        arms.extend(
            self.buckets
                .iter()
                .skip(self.bucket_idx + 1)
                .flatten()
                .copied(),
        );
        arms.sort_unstable();
        arms
    }

    fn horizon(&self) -> u64 {
        self.horizon
    }
}
