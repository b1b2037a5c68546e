//! Pieces shared by the phase-based policies.

use crate::scalar::Real;

use super::ArmStats;

/// Normalisation of the end-of-phase estimate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PhaseMeanMode {
    /// Divide the accrued reward sum by the accrued count.
    #[default]
    Empirical,
    /// Divide by the schedule target `n_m`.
    TargetCount,
}

/// End-of-phase estimate `X̄_{m,j}`; zero when nothing accrued.
pub fn phase_mean<F: Real>(reward_sum: F, accrued: u64, n_m: u64, mode: PhaseMeanMode) -> F {
    if accrued == 0 {
        return F::zero();
    }
    match mode {
        PhaseMeanMode::Empirical => reward_sum / F::from_count(accrued),
        PhaseMeanMode::TargetCount => reward_sum / F::from_count(n_m.max(1)),
    }
}

/// Arms per bucket: `⌊N / d_max⌋`, or every active arm when `d_max = 0`.
pub fn bucket_capacity(active: usize, window: u32, d_max: u32) -> usize {
    match window.checked_div(d_max) {
        Some(cap) => (cap as usize).max(1),
        None => active.max(1),
    }
}

/// Sorts `active` and chunks it greedily into buckets of at most `capacity`.
pub fn partition_buckets(active: &[usize], capacity: usize) -> Vec<Vec<usize>> {
    let mut arms = active.to_vec();
    arms.sort_unstable();
    arms.chunks(capacity.max(1))
        .map(<[usize]>::to_vec)
        .collect()
}

/// Applies `X̄_j + Δ̃/2 < max_{j'} X̄_{j'} − Δ̃/2` over `candidates`. Arms with
/// no accrued sample take no part on either side.
pub fn end_of_phase_eliminate<F: Real>(
    candidates: &[usize],
    stats: &[ArmStats<F>],
    n_m: u64,
    delta_tilde: F,
    mode: PhaseMeanMode,
) -> Vec<usize> {
    let half = delta_tilde / F::lit(2.0);
    let estimate = |j: usize| phase_mean(stats[j].reward_sum, stats[j].accrued, n_m, mode);
    let best = candidates
        .iter()
        .filter(|&&j| stats[j].accrued > 0)
        .map(|&j| estimate(j))
        .fold(None, |acc: Option<F>, x| Some(acc.map_or(x, |a| a.max(x))));
    let Some(best) = best else {
        return candidates.to_vec();
    };
    candidates
        .iter()
        .copied()
        .filter(|&j| stats[j].accrued == 0 || estimate(j) + half >= best - half)
        .collect()
}

/// What happened in one phase of a phase-based policy.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSummary<F> {
    pub phase: u32,
    pub delta_tilde: F,
    /// First round of the phase.
    pub start_round: u64,
    /// `n_m`.
    pub target: u64,
    pub active: Vec<usize>,
    pub buckets: Vec<Vec<usize>>,
    /// Rounds granted to each bucket.
    pub bucket_budget: u64,
    /// Survivors of within-phase elimination (phase completed only).
    pub within_survivors: Option<Vec<usize>>,
    /// Survivors of end-of-phase elimination (phase completed only).
    pub survivors: Option<Vec<usize>>,
}
