//! Independent reference computations shared by the integration suites.

#![allow(dead_code)]

use impaired_bandits::env::{BanditInstance, EnvSeeds, ImpairedEnv, RoundRecord, Trace};
use impaired_bandits::policies::Policy;

/// Accrual flags recomputed from the raw play list: round `i` accrues when
/// its arm appears at least `d_i` times among rounds `max(i − N, 0)..=i`.
pub fn brute_force_accrual(arms: &[usize], ds: &[u32], window: usize) -> Vec<bool> {
    (0..arms.len())
        .map(|i| {
            let lo = i.saturating_sub(window);
            let count = arms[lo..=i].iter().filter(|&&a| a == arms[i]).count();
            count >= ds[i] as usize
        })
        .collect()
}

/// `t·μ* − Σ X` recomputed from a trace's generated rewards and the
/// brute-force accrual flags.
pub fn replay_mean_optimal_regret(trace: &Trace<f64>, mu_star: f64, window: usize) -> Vec<f64> {
    let arms: Vec<usize> = trace.records.iter().map(|r| r.arm).collect();
    let ds: Vec<u32> = trace.records.iter().map(|r| r.sampled_d).collect();
    let flags = brute_force_accrual(&arms, &ds, window);
    let mut total = 0.0;
    trace
        .records
        .iter()
        .zip(flags)
        .enumerate()
        .map(|(i, (r, ok))| {
            if ok {
                total += r.generated;
            }
            (i + 1) as f64 * mu_star - total
        })
        .collect()
}

/// Plays `policy` on a fresh environment for `rounds` rounds.
pub fn play(
    instance: &BanditInstance<f64>,
    seeds: EnvSeeds,
    policy: &mut dyn Policy<f64>,
    rounds: u64,
) -> Vec<RoundRecord<f64>> {
    let mut env = ImpairedEnv::new(instance, seeds);
    (1..=rounds)
        .map(|t| {
            let arm = policy.select_arm(t);
            let rec = env.step(arm).unwrap();
            policy.observe(&rec);
            rec
        })
        .collect()
}

pub fn arm_sequence(records: &[RoundRecord<f64>]) -> Vec<usize> {
    records.iter().map(|r| r.arm).collect()
}

/// Smallest `n` with `(Δ̃/2)·n − √(n ln T) − (2/3) ln T − z ≥ 0`.
pub fn quadratic_slack(n: f64, delta_tilde: f64, ln_t: f64, z: f64) -> f64 {
    delta_tilde / 2.0 * n - (n * ln_t).sqrt() - 2.0 * ln_t / 3.0 - z
}

pub fn slack_z(m: u32, ln_t: f64, expected_d: f64) -> f64 {
    (4.0 * ln_t * ln_t / 9.0 + 4.0 * f64::from(m) * expected_d * ln_t).sqrt()
}

/// Term-by-term regret bounds written out independently of the library.
pub mod bound_oracle {
    fn tail(deltas: &[f64], t: f64, lambda: f64) -> f64 {
        deltas
            .iter()
            .filter(|&&d| d > 0.0 && d < lambda)
            .map(|&d| d * t)
            .fold(0.0, f64::max)
    }

    fn eps(deltas: &[f64]) -> f64 {
        let best = deltas.iter().position(|&d| d == 0.0).unwrap();
        let mut e = 0.0_f64;
        for (j, &dj) in deltas.iter().enumerate() {
            for (k, &dk) in deltas.iter().enumerate() {
                if j != k && j != best && k != best && dj <= dk && dk > 0.0 {
                    e = e.max(dj / dk);
                }
            }
        }
        e
    }

    pub fn theorem1(deltas: &[f64], horizon: u64, lambda: f64, d_max: u32) -> f64 {
        let t = horizon as f64;
        let ln_t = t.ln();
        let coef = (1.0 / (1.0 - eps(deltas)).powi(2)).min(4.0);
        let coef = if coef.is_finite() { coef } else { 4.0 };
        let mut sum = 0.0;
        let mut k2 = 0.0;
        for &d in deltas {
            if d > 0.0 {
                k2 += 16.0 / t;
            }
            if d > lambda && d > 0.0 {
                sum += 4.0 * d / t;
                sum += d;
                sum += 16.0 * ln_t / d * coef;
                sum += 2.0 * d * (4.0 / d).ln() * f64::from(d_max);
            }
        }
        sum + k2 + tail(deltas, t, lambda)
    }

    pub fn lemma2(deltas: &[f64], horizon: u64, lambda: f64, d_max: u32) -> f64 {
        let t = horizon as f64;
        let ln_t = t.ln();
        let mut sum = 0.0;
        for &d in deltas.iter().filter(|&&d| d > 0.0) {
            sum += 16.0 / t;
            if d > lambda {
                sum +=
                    2.0 * d / t + d + 64.0 * ln_t / d + 2.0 * d * (4.0 / d).ln() * f64::from(d_max);
            }
        }
        sum + tail(deltas, t, lambda)
    }

    pub fn theorem2(deltas: &[f64], horizon: u64, lambda: f64, expected_d: f64) -> f64 {
        let t = horizon as f64;
        let ln_t = t.ln();
        let mut sum = 0.0;
        for &d in deltas.iter().filter(|&&d| d > 0.0) {
            sum += 32.0 / t;
            if d > lambda {
                sum += 2.0 * d / t
                    + d
                    + 64.0 * ln_t / d
                    + 64.0 * ln_t / 3.0
                    + 32.0 * ((4.0 / d).ln() * expected_d * ln_t).sqrt();
            }
        }
        sum + tail(deltas, t, lambda)
    }
}

pub mod reductions {
    use impaired_bandits::env::{BanditInstance, EnvSeeds, ImpairedEnv};
    use impaired_bandits::policies::{
        ArmStats, PhasedSe, Policy, SuccessiveElimination, UcbRevisitedPlus,
    };
    use impaired_bandits::schedule::Schedule;

    use super::{arm_sequence, play};

    /// Capacity-1 Phased-SE against UCB-Revisited: first differing round.
    pub fn capacity_one_vs_ucb_revisited(
        instance: &BanditInstance<f64>,
        seeds: EnvSeeds,
    ) -> Option<u64> {
        let horizon = instance.horizon();
        let d_max = instance.d_max();
        let schedule = Schedule::KnownSupport { horizon, d_max };
        let mut pse = PhasedSe::new(
            instance.num_arms(),
            instance.window(),
            d_max,
            schedule.clone(),
            horizon,
        )
        .with_capacity(Some(1));
        let mut ucbr = UcbRevisitedPlus::new(instance.num_arms(), schedule, horizon);
        let a = play(instance, seeds, &mut pse, horizon);
        let b = play(instance, seeds, &mut ucbr, horizon);
        a.iter()
            .zip(&b)
            .position(|(x, y)| x != y)
            .map(|i| i as u64 + 1)
    }

    /// Full-capacity Phased-SE against SE restarted at every phase from the
    /// same statistics and environment state. Returns the number of phases
    /// compared, or the first differing round.
    pub fn full_capacity_vs_se(
        instance: &BanditInstance<f64>,
        seeds: EnvSeeds,
    ) -> Result<usize, u64> {
        let horizon = instance.horizon();
        let k = instance.num_arms();
        let schedule = Schedule::KnownSupport { horizon, d_max: 0 };
        let mut pse =
            PhasedSe::new(k, instance.window(), 0, schedule, horizon).with_capacity(Some(k));
        let records = play(instance, seeds, &mut pse, horizon);
        let arms = arm_sequence(&records);

        let first = &pse.phase_log()[0];
        let mut se = SuccessiveElimination::new(k, horizon);
        let prefix = play(instance, seeds, &mut se, first.bucket_budget.min(horizon));
        if let Some(i) = arm_sequence(&prefix)
            .iter()
            .zip(&arms)
            .position(|(x, y)| x != y)
        {
            return Err(i as u64 + 1);
        }

        for phase in pse.phase_log() {
            let start = phase.start_round as usize - 1;
            let len = (phase.bucket_budget as usize).min(arms.len() - start);
            let mut stats = vec![ArmStats::default(); k];
            let mut env = ImpairedEnv::new(instance, seeds);
            for rec in &records[..start] {
                stats[rec.arm].record(rec);
                env.step(rec.arm).unwrap();
            }
            let mut se = SuccessiveElimination::with_state(
                &phase.active,
                phase.bucket_budget,
                horizon,
                stats,
            );
            for (i, want) in arms[start..start + len].iter().enumerate() {
                let t = (start + i + 1) as u64;
                let arm = se.select_arm(t);
                if arm != *want {
                    return Err(t);
                }
                let rec = env.step(arm).unwrap();
                se.observe(&rec);
            }
        }
        Ok(pse.phase_log().len())
    }
}
