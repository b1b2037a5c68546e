//! The three preset experiment families: arm-switching histograms, bucket
//! size interpolation and impairment sweeps.

use rayon::prelude::*;

use crate::env::Trace;
use crate::scalar::Real;

use super::{
    AggregateCurve, Experiment, ExperimentConfig, HarnessError, ImpairmentModel, MeansSource,
    PolicyConfig, PolicyKind,
};

/// Bin `c` counts rounds `t > window` whose arm appeared exactly `c` times
/// among the `window` preceding rounds.
pub fn same_arm_counts<F>(trace: &Trace<F>, window: usize, bins: &mut [u64]) {
    let arms: Vec<usize> = trace.records.iter().map(|r| r.arm).collect();
    for t in window..arms.len() {
        let c = arms[t - window..t]
            .iter()
            .filter(|&&a| a == arms[t])
            .count();
        bins[c] += 1;
    }
}

/// Same-arm histogram summed over all runs of `experiment`.
pub fn switching_histogram<F: Real>(
    experiment: &Experiment<F>,
    window: usize,
) -> Result<Vec<u64>, HarnessError> {
    if window == 0 {
        return Err(HarnessError::Config(
            "switching window must be at least 1".into(),
        ));
    }
    let per_run = (0..u64::from(experiment.config().runs))
        .into_par_iter()
        .map(|run| {
            let mut bins = vec![0u64; window + 1];
            same_arm_counts(&experiment.run_single(run)?, window, &mut bins);
            Ok(bins)
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let mut bins = vec![0u64; window + 1];
    for run_bins in per_run {
        for (total, c) in bins.iter_mut().zip(run_bins) {
            *total += c;
        }
    }
    Ok(bins)
}

/// Count-weighted mean bin index.
pub fn mean_bin(bins: &[u64]) -> f64 {
    let total: u64 = bins.iter().sum();
    if total == 0 {
        return 0.0;
    }
    bins.iter()
        .enumerate()
        .map(|(i, &c)| i as f64 * c as f64)
        .sum::<f64>()
        / total as f64
}

/// Histograms for each number of tied optimal arms.
pub fn switching_experiment<F: Real>(
    base: &ExperimentConfig<F>,
    optimal_arms: &[usize],
    window: usize,
) -> Result<Vec<(usize, Vec<u64>)>, HarnessError> {
    optimal_arms
        .iter()
        .map(|&n| {
            let mut cfg = base.clone();
            cfg.instance.means = match &base.instance.means {
                MeansSource::Random { arms, seed, .. } => MeansSource::Random {
                    arms: *arms,
                    seed: *seed,
                    optimal_arms: n,
                },
                MeansSource::Explicit(m) => {
                    let mut m = m.clone();
                    super::raise_top_arms(&mut m, n);
                    MeansSource::Explicit(m)
                }
            };
            let exp = Experiment::new(cfg)?;
            Ok((n, switching_histogram(&exp, window)?))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BucketSweep<F> {
    pub by_capacity: Vec<(usize, AggregateCurve<F>)>,
    pub se: AggregateCurve<F>,
    pub ucb_revisited: AggregateCurve<F>,
}

/// Phased-SE at each forced bucket capacity, plus SE and UCB-Revisited, all
/// under the same master seed.
pub fn bucket_size_sweep<F: Real>(
    base: &ExperimentConfig<F>,
    capacities: &[usize],
) -> Result<BucketSweep<F>, HarnessError> {
    if capacities.is_empty() {
        return Err(HarnessError::Config(
            "bucket sweep needs at least one capacity".into(),
        ));
    }
    let instance = base.instance.build()?;
    let curve = |policy: PolicyConfig| -> Result<AggregateCurve<F>, HarnessError> {
        Experiment::with_instance(base.with_policy(policy), instance.clone())?.run_monte_carlo()
    };
    let by_capacity = capacities
        .iter()
        .map(|&c| {
            let policy = PolicyConfig {
                bucket_capacity: Some(c),
                kind: PolicyKind::PhasedSe,
                ..base.policy.clone()
            };
            Ok((c, curve(policy)?))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(BucketSweep {
        by_capacity,
        se: curve(PolicyConfig::new(PolicyKind::Se))?,
        ucb_revisited: curve(PolicyConfig {
            kind: PolicyKind::UcbRevisited,
            bucket_capacity: None,
            ..base.policy.clone()
        })?,
    })
}

/// UCB-Revisited+ at each mean impairment level. Arm `j`'s requirement is
/// `|Normal(mean, scale·(j+1))|` with the base config's scale and `d_max`
/// (0.5 and `N` when the base has no absolute-normal impairment); a level
/// of zero means no impairment. Reward streams are shared across levels.
pub fn impairment_sweep<F: Real>(
    base: &ExperimentConfig<F>,
    means: &[F],
) -> Result<Vec<(F, AggregateCurve<F>)>, HarnessError> {
    let (scale, d_max) = match base.instance.impairment {
        ImpairmentModel::AbsNormal {
            stddev_scale,
            d_max,
            ..
        } => (stddev_scale, d_max),
        _ => (F::lit(0.5), base.instance.window),
    };
    means
        .iter()
        .map(|&mean| {
            if mean < F::zero() || mean > F::from_u32(d_max).unwrap() {
                return Err(HarnessError::Config(format!(
                    "impairment mean {mean} outside [0, {d_max}]"
                )));
            }
            let mut cfg = base.with_policy(PolicyConfig {
                kind: PolicyKind::UcbRevisitedPlus,
                bucket_capacity: None,
                ..base.policy.clone()
            });
            cfg.instance.impairment = if mean == F::zero() {
                ImpairmentModel::None
            } else {
                ImpairmentModel::AbsNormal {
                    mean,
                    stddev_scale: scale,
                    d_max,
                }
            };
            Ok((mean, Experiment::new(cfg)?.run_monte_carlo()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::RoundRecord;

    fn trace_of(arms: &[usize]) -> Trace<f64> {
        let mut tr = Trace::new(0, 0);
        tr.records = arms
            .iter()
            .enumerate()
            .map(|(i, &arm)| RoundRecord {
                t: i as u64 + 1,
                arm,
                generated: 0.0,
                accrued: true,
                reward: 0.0,
                sampled_d: 0,
            })
            .collect();
        tr
    }

    #[test]
    fn constant_arm_fills_top_bin() {
        let mut bins = vec![0; 16];
        same_arm_counts(&trace_of(&[4; 100]), 15, &mut bins);
        assert_eq!(bins[15], 85);
        assert_eq!(bins.iter().sum::<u64>(), 85);
    }

    #[test]
    fn round_robin_over_thirty_fills_bin_zero() {
        let arms: Vec<usize> = (0..300).map(|t| t % 30).collect();
        let mut bins = vec![0; 16];
        same_arm_counts(&trace_of(&arms), 15, &mut bins);
        assert_eq!(bins[0], 285);
        assert_eq!(mean_bin(&bins), 0.0);
    }
}
