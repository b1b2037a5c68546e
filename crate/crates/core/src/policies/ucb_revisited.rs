//! Phase-based elimination with consecutive blocks: each active arm is
//! played `n_m − n_{m−1}` rounds in a row per phase, then arms whose
//! estimate trails the leader by more than `Δ̃_m` are dropped.
//!
//! With [`Schedule::KnownExpectation`] this is UCB-Revisited+; with
//! [`Schedule::KnownSupport`] it is the UCB-Revisited variant used as the
//! unbucketed baseline.

use crate::env::RoundRecord;
use crate::scalar::Real;
use crate::schedule::{delta_tilde, Schedule};

use super::{end_of_phase_eliminate, ArmStats, PhaseMeanMode, PhaseSummary, Policy};

#[derive(Clone, Debug)]
pub struct UcbRevisitedPlus<F> {
    stats: Vec<ArmStats<F>>,
    schedule: Schedule<F>,
    mode: PhaseMeanMode,
    horizon: u64,
    phase: u32,
    delta_tilde: F,
    active: Vec<usize>,
    position: usize,
    block_played: u64,
    block_len: u64,
    log: Vec<PhaseSummary<F>>,
    next_round: u64,
    name: &'static str,
}

impl<F: Real> UcbRevisitedPlus<F> {
    pub fn new(num_arms: usize, schedule: Schedule<F>, horizon: u64) -> Self {
        let name = match schedule {
            Schedule::KnownSupport { .. } => "ucb-revisited",
            _ => "ucb-revisited-plus",
        };
        let mut policy = Self {
            stats: vec![ArmStats::default(); num_arms],
            schedule,
            mode: PhaseMeanMode::default(),
            horizon,
            phase: 1,
            delta_tilde: delta_tilde(1),
            active: (0..num_arms).collect(),
            position: 0,
            block_played: 0,
            block_len: 0,
            log: Vec::new(),
            next_round: 1,
            name,
        };
        policy.start_phase();
        policy
    }

    pub fn with_mean_mode(mut self, mode: PhaseMeanMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn stats(&self) -> &[ArmStats<F>] {
        &self.stats
    }

    pub fn phase_log(&self) -> &[PhaseSummary<F>] {
        &self.log
    }

    fn start_phase(&mut self) {
        self.position = 0;
        self.block_played = 0;
        self.block_len = self.schedule.increment(self.phase);
        self.log.push(PhaseSummary {
            phase: self.phase,
            delta_tilde: self.delta_tilde,
            start_round: self.next_round,
            target: self.schedule.target(self.phase),
            active: self.active.clone(),
            buckets: self.active.iter().map(|&j| vec![j]).collect(),
            bucket_budget: self.block_len,
            within_survivors: None,
            survivors: None,
        });
    }

    fn finish_phase(&mut self) {
        let target = self.schedule.target(self.phase);
        let survivors = end_of_phase_eliminate(
            &self.active,
            &self.stats,
            target,
            self.delta_tilde,
            self.mode,
        );
        if let Some(entry) = self.log.last_mut() {
            entry.within_survivors = Some(self.active.clone());
            entry.survivors = Some(survivors.clone());
        }
        self.active = survivors;
        self.phase += 1;
        self.delta_tilde = delta_tilde(self.phase);
        self.start_phase();
    }
}

impl<F: Real> Policy<F> for UcbRevisitedPlus<F> {
    fn name(&self) -> &'static str {
        self.name
    }

    fn select_arm(&mut self, _t: u64) -> usize {
        self.active[self.position]
    }

    fn observe(&mut self, record: &RoundRecord<F>) {
        self.stats[record.arm].record(record);
        self.next_round += 1;
        self.block_played += 1;
        if self.block_played >= self.block_len {
            self.block_played = 0;
            self.position += 1;
            if self.position == self.active.len() {
                self.finish_phase();
            }
        }
    }

    fn active_arms(&self) -> Vec<usize> {
        self.active.clone()
    }

    fn horizon(&self) -> u64 {
        self.horizon
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{BanditInstance, EnvSeeds, ImpairedEnv, ImpairmentSpec};

    #[test]
    fn consecutive_blocks_follow_schedule() {
        let horizon = 5000;
        let schedule = Schedule::KnownSupport { horizon, d_max: 3 };
        let inst =
            BanditInstance::from_means(&[0.5, 0.5, 0.5], ImpairmentSpec::constant(3), 5, horizon)
                .unwrap();
        let mut env = ImpairedEnv::new(&inst, EnvSeeds::for_run(8, 1));
        let mut p = UcbRevisitedPlus::new(3, schedule.clone(), horizon);
        let mut arms = Vec::new();
        for t in 1..=3 * 38 {
            let a = p.select_arm(t);
            p.observe(&env.step(a).unwrap());
            arms.push(a);
        }
        let expected: Vec<usize> = (0..3).flat_map(|j| std::iter::repeat_n(j, 38)).collect();
        assert_eq!(arms, expected);
        assert_eq!(p.phase(), 2);
        // each block loses exactly its first two plays to d = 3
        assert!(p.stats().iter().all(|s| s.plays - s.accrued == 2));
    }

    #[test]
    fn lone_survivor_plays_every_round() {
        let horizon = 4000;
        let inst =
            BanditInstance::from_means(&[0.95, 0.05], ImpairmentSpec::none(), 5, horizon).unwrap();
        let mut env = ImpairedEnv::new(&inst, EnvSeeds::for_run(2, 0));
        let mut p = UcbRevisitedPlus::new(
            2,
            Schedule::KnownExpectation {
                horizon,
                expected_d: 0.0,
            },
            horizon,
        );
        let mut arms = Vec::new();
        for t in 1..=horizon {
            let a = p.select_arm(t);
            p.observe(&env.step(a).unwrap());
            arms.push(a);
        }
        assert_eq!(p.active_arms(), vec![0]);
        let last_elim = p
            .phase_log()
            .iter()
            .find(|e| e.survivors.as_deref() == Some(&[0][..]))
            .unwrap();
        let after = p
            .phase_log()
            .iter()
            .find(|e| e.phase == last_elim.phase + 1)
            .unwrap();
        assert!(arms[after.start_round as usize - 1..]
            .iter()
            .all(|&a| a == 0));
    }
}
