//! One round of play under the impairment accrual rule.

use rand_chacha::ChaCha8Rng;

use crate::rng::{derive_seed, lane_rng, StreamTag};
use crate::scalar::Real;

use super::{BanditInstance, EnvError, RoundRecord, SlidingWindowCounter};

/// Seeds of the reward and impairment sub-streams of one environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnvSeeds {
    pub reward: u64,
    pub impairment: u64,
}

impl EnvSeeds {
    /// Streams of run `run_index` under `master_seed`.
    pub fn for_run(master_seed: u64, run_index: u64) -> Self {
        Self {
            reward: derive_seed(master_seed, StreamTag::Reward, run_index),
            impairment: derive_seed(master_seed, StreamTag::Impairment, run_index),
        }
    }

    /// Streams of the always-play-`j*` comparator for the same run. Rewards
    /// are shared with the algorithm's environment; impairment draws are not.
    pub fn oracle_for_run(master_seed: u64, run_index: u64) -> Self {
        Self {
            reward: derive_seed(master_seed, StreamTag::Reward, run_index),
            impairment: derive_seed(master_seed, StreamTag::OracleImpairment, run_index),
        }
    }
}

/// Stateful environment. Each arm has its own reward lane and impairment
/// lane, so the k-th pull of an arm draws the same `R` and `d` no matter how
/// plays are interleaved.
#[derive(Clone, Debug)]
pub struct ImpairedEnv<'a, F> {
    instance: &'a BanditInstance<F>,
    window: SlidingWindowCounter,
    reward_rngs: Vec<ChaCha8Rng>,
    impairment_rngs: Vec<ChaCha8Rng>,
    t: u64,
}

impl<'a, F: Real> ImpairedEnv<'a, F> {
    pub fn new(instance: &'a BanditInstance<F>, seeds: EnvSeeds) -> Self {
        let k = instance.num_arms();
        Self {
            instance,
            window: SlidingWindowCounter::new(k, instance.window()),
            reward_rngs: (0..k as u64).map(|j| lane_rng(seeds.reward, j)).collect(),
            impairment_rngs: (0..k as u64)
                .map(|j| lane_rng(seeds.impairment, j))
                .collect(),
            t: 0,
        }
    }

    pub fn instance(&self) -> &'a BanditInstance<F> {
        self.instance
    }

    /// Rounds played so far.
    pub fn rounds(&self) -> u64 {
        self.t
    }

    pub fn window_counter(&self) -> &SlidingWindowCounter {
        &self.window
    }

    /// Plays `arm` in the next round. The window is updated with this play
    /// before the accrual indicator is evaluated.
    pub fn step(&mut self, arm: usize) -> Result<RoundRecord<F>, EnvError> {
        let k = self.instance.num_arms();
        if arm >= k {
            return Err(EnvError::InvalidArm { arm, num_arms: k });
        }
        self.t += 1;
        let count = self.window.push(arm);
        let generated = self.instance.arms()[arm].sample(&mut self.reward_rngs[arm]);
        let sampled_d = self
            .instance
            .impairment(arm)
            .sample(&mut self.impairment_rngs[arm]);
        let accrued = count >= sampled_d;
        Ok(RoundRecord {
            t: self.t,
            arm,
            generated,
            accrued,
            reward: if accrued { generated } else { F::zero() },
            sampled_d,
        })
    }
}
