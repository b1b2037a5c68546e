//! UCB1 on accrued samples.

use crate::env::RoundRecord;
use crate::scalar::Real;

use super::{ArmStats, Policy};

/// Plays `argmax_j X̄_j + sqrt(2 ln t / n_j)`, where `n_j` counts accrued
/// samples only. Arms without an accrued sample have an infinite index; ties
/// go to the lowest index.
#[derive(Clone, Debug)]
pub struct Ucb1<F> {
    stats: Vec<ArmStats<F>>,
    horizon: u64,
}

impl<F: Real> Ucb1<F> {
    pub fn new(num_arms: usize, horizon: u64) -> Self {
        Self {
            stats: vec![ArmStats::default(); num_arms],
            horizon,
        }
    }

    pub fn from_stats(stats: Vec<ArmStats<F>>, horizon: u64) -> Self {
        Self { stats, horizon }
    }

    pub fn stats(&self) -> &[ArmStats<F>] {
        &self.stats
    }

    pub fn index(&self, arm: usize, t: u64) -> F {
        let s = &self.stats[arm];
        if s.accrued == 0 {
            return F::infinity();
        }
        let t = F::from_count(t.max(1));
        s.mean() + (F::lit(2.0) * t.ln() / F::from_count(s.accrued)).sqrt()
    }
}

impl<F: Real> Policy<F> for Ucb1<F> {
    fn name(&self) -> &'static str {
        "ucb1"
    }

    fn select_arm(&mut self, t: u64) -> usize {
        let mut best = 0;
        let mut best_index = self.index(0, t);
        for j in 1..self.stats.len() {
            let idx = self.index(j, t);
            if idx > best_index {
                best = j;
                best_index = idx;
            }
        }
        best
    }

    fn observe(&mut self, record: &RoundRecord<F>) {
        self.stats[record.arm].record(record);
    }

    fn active_arms(&self) -> Vec<usize> {
        (0..self.stats.len()).collect()
    }

    fn horizon(&self) -> u64 {
        self.horizon
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: u64, arm: usize, reward: f64, accrued: bool) -> RoundRecord<f64> {
        RoundRecord {
            t,
            arm,
            generated: reward,
            accrued,
            reward: if accrued { reward } else { 0.0 },
            sampled_d: 0,
        }
    }

    #[test]
    fn initial_sweep_in_index_order() {
        let mut p = Ucb1::<f64>::new(2, 10);
        assert_eq!(p.select_arm(1), 0);
        p.observe(&rec(1, 0, 0.0, true));
        assert_eq!(p.select_arm(2), 1);
    }

    #[test]
    fn non_accrued_play_keeps_infinite_index() {
        let mut p = Ucb1::<f64>::new(2, 10);
        p.observe(&rec(1, 0, 1.0, false));
        assert_eq!(p.select_arm(2), 0);
        assert_eq!(p.stats()[0].plays, 1);
    }

    #[test]
    fn index_example() {
        let stats = vec![
            ArmStats {
                plays: 50,
                accrued: 50,
                reward_sum: 45.0,
            },
            ArmStats {
                plays: 50,
                accrued: 50,
                reward_sum: 5.0,
            },
        ];
        let mut p: Ucb1<f64> = Ucb1::from_stats(stats, 200);
        assert!((p.index(0, 101) - 1.329).abs() < 1e-3);
        assert!((p.index(1, 101) - 0.529).abs() < 1e-3);
        assert_eq!(p.select_arm(101), 0);
    }

    #[test]
    fn ties_break_low() {
        let stats = vec![
            ArmStats {
                plays: 5,
                accrued: 5,
                reward_sum: 2.0
            };
            3
        ];
        let mut p = Ucb1::from_stats(stats, 20);
        assert_eq!(p.select_arm(16), 0);
    }
}
