//! Round records, traces and regret accounting.

use crate::scalar::Real;

use super::{BanditInstance, EnvError, EnvSeeds, ImpairedEnv};

/// Outcome of one round.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundRecord<F> {
    /// 1-based round index.
    pub t: u64,
    pub arm: usize,
    /// `R_{t,J_t}`, drawn whether or not it accrues.
    pub generated: F,
    pub accrued: bool,
    /// `X_{t,J_t}`: `generated` when accrued, zero otherwise.
    pub reward: F,
    pub sampled_d: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trace<F> {
    pub records: Vec<RoundRecord<F>>,
    pub seed: u64,
    pub run: u64,
}

impl<F: Real> Trace<F> {
    pub fn new(seed: u64, run: u64) -> Self {
        Self {
            records: Vec::new(),
            seed,
            run,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn arms(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.arm).collect()
    }

    pub fn total_reward(&self) -> F {
        self.records.iter().map(|r| r.reward).sum()
    }
}

/// Benchmark used for the first term of the pseudo-regret.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RegretMode {
    /// `t · μ*`.
    #[default]
    MeanOptimal,
    /// Accrued reward of an always-play-`j*` comparator run through the same
    /// impairment process.
    OracleImpaired,
}

#[derive(Clone, Copy, Debug)]
pub enum Benchmark<'a, F> {
    MeanOptimal,
    Oracle(&'a Trace<F>),
}

/// Plays the optimal arm every round for `rounds` rounds.
pub fn oracle_trace<F: Real>(
    instance: &BanditInstance<F>,
    seeds: EnvSeeds,
    rounds: usize,
) -> Trace<F> {
    let best = instance.gaps().best_arm;
    let mut env = ImpairedEnv::new(instance, seeds);
    let mut trace = Trace::new(seeds.reward, 0);
    trace.records = (0..rounds)
        .map(|_| env.step(best).expect("best arm is valid"))
        .collect();
    trace
}

/// Cumulative regret after each round of `trace`.
pub fn cumulative_regret<F: Real>(
    trace: &Trace<F>,
    instance: &BanditInstance<F>,
    benchmark: Benchmark<'_, F>,
) -> Result<Vec<F>, EnvError> {
    let k = instance.num_arms();
    if trace.len() as u64 > instance.horizon() {
        return Err(EnvError::TraceMismatch(format!(
            "{} rounds exceed horizon {}",
            trace.len(),
            instance.horizon()
        )));
    }
    for (i, r) in trace.records.iter().enumerate() {
        if r.arm >= k {
            return Err(EnvError::TraceMismatch(format!(
                "round {} plays arm {} of {k}",
                r.t, r.arm
            )));
        }
        if r.t != i as u64 + 1 {
            return Err(EnvError::TraceMismatch(format!(
                "record {i} has round index {}",
                r.t
            )));
        }
    }
    let mu_star = instance.gaps().mu_star;
    let mut out = Vec::with_capacity(trace.len());
    let mut regret = F::zero();
    match benchmark {
        Benchmark::MeanOptimal => {
            for r in &trace.records {
                regret += mu_star - r.reward;
                out.push(regret);
            }
        }
        Benchmark::Oracle(oracle) => {
            if oracle.len() < trace.len() {
                return Err(EnvError::TraceMismatch(format!(
                    "oracle trace has {} rounds, need {}",
                    oracle.len(),
                    trace.len()
                )));
            }
            for (r, o) in trace.records.iter().zip(&oracle.records) {
                regret += o.reward - r.reward;
                out.push(regret);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::ImpairmentSpec;

    #[test]
    fn alternating_on_deterministic_arms() {
        let inst = BanditInstance::from_means(&[1.0, 0.0], ImpairmentSpec::none(), 3, 20).unwrap();
        let mut env = ImpairedEnv::new(&inst, EnvSeeds::for_run(4, 0));
        let mut trace = Trace::new(4, 0);
        for t in 0..20 {
            trace.records.push(env.step(t % 2).unwrap());
        }
        let curve = cumulative_regret(&trace, &inst, Benchmark::MeanOptimal).unwrap();
        for (i, v) in curve.iter().enumerate() {
            let t = i as f64 + 1.0;
            assert_eq!(*v, (t / 2.0).floor());
        }
    }

    #[test]
    fn rejects_mismatched_trace() {
        let inst =
            BanditInstance::from_means(&[0.5, 0.2], ImpairmentSpec::<f64>::none(), 3, 2).unwrap();
        let rec = RoundRecord {
            t: 1,
            arm: 0,
            generated: 1.0,
            accrued: true,
            reward: 1.0,
            sampled_d: 0,
        };
        let mut trace = Trace::new(0, 0);
        trace.records = vec![
            rec,
            RoundRecord { t: 2, ..rec },
            RoundRecord { t: 3, ..rec },
        ];
        assert!(cumulative_regret(&trace, &inst, Benchmark::MeanOptimal).is_err());
        trace.records = vec![RoundRecord { arm: 5, ..rec }];
        assert!(cumulative_regret(&trace, &inst, Benchmark::MeanOptimal).is_err());
    }

    #[test]
    fn oracle_regret_against_itself_is_zero() {
        let inst =
            BanditInstance::from_means(&[0.7, 0.2], ImpairmentSpec::constant(2), 3, 50).unwrap();
        let seeds = EnvSeeds::for_run(11, 3);
        let a = oracle_trace(&inst, seeds, 50);
        let b = oracle_trace(&inst, seeds, 50);
        let curve = cumulative_regret(&a, &inst, Benchmark::Oracle(&b)).unwrap();
        assert!(curve.iter().all(|v| *v == 0.0));
        // the comparator forfeits its first play
        assert!(!a.records[0].accrued);
    }
}
