//! Seeded single runs and Monte Carlo aggregation.

use rayon::prelude::*;

use crate::env::{
    cumulative_regret, oracle_trace, BanditInstance, Benchmark, EnvSeeds, ImpairedEnv, RegretMode,
    Trace,
};
use crate::policies::{PhasedSe, Policy, SuccessiveElimination, Ucb1, UcbRevisitedPlus};
use crate::scalar::Real;
use crate::schedule::Schedule;

use super::{ExperimentConfig, HarnessError, PolicyKind};

/// Per-round mean and sample standard deviation of cumulative regret.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateCurve<F> {
    pub mean: Vec<F>,
    pub std: Vec<F>,
    pub runs: usize,
}

impl<F: Real> AggregateCurve<F> {
    /// Aggregates per-run curves in the order given. Curves are truncated to
    /// the shortest one.
    pub fn from_runs(curves: &[Vec<F>]) -> Self {
        let runs = curves.len();
        let len = curves.iter().map(Vec::len).min().unwrap_or(0);
        let mut mean = vec![F::zero(); len];
        let mut std = vec![F::zero(); len];
        if runs == 0 {
            return Self { mean, std, runs };
        }
        let n = F::from_count(runs as u64);
        for curve in curves {
            for (acc, &v) in mean.iter_mut().zip(curve) {
                *acc += v;
            }
        }
        for m in &mut mean {
            *m /= n;
        }
        if runs > 1 {
            for curve in curves {
                for ((acc, &v), &m) in std.iter_mut().zip(curve).zip(&mean) {
                    *acc += (v - m) * (v - m);
                }
            }
            let denom = F::from_count(runs as u64 - 1);
            for s in &mut std {
                *s = (*s / denom).sqrt();
            }
        }
        Self { mean, std, runs }
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    pub fn final_mean(&self) -> F {
        self.mean.last().copied().unwrap_or_else(F::zero)
    }

    pub fn final_std(&self) -> F {
        self.std.last().copied().unwrap_or_else(F::zero)
    }

    /// Half-width of the normal-approximation 95% band of the final mean.
    pub fn final_ci95(&self) -> F {
        if self.runs == 0 {
            return F::zero();
        }
        F::lit(1.96) * self.final_std() / F::from_count(self.runs as u64).sqrt()
    }
}

/// Trace of one run together with its regret curve.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult<F> {
    pub trace: Trace<F>,
    pub regret: Vec<F>,
}

/// A validated configuration bound to its instance.
#[derive(Clone, Debug)]
pub struct Experiment<F> {
    config: ExperimentConfig<F>,
    instance: BanditInstance<F>,
}

impl<F: Real> Experiment<F> {
    pub fn new(config: ExperimentConfig<F>) -> Result<Self, HarnessError> {
        config.validate()?;
        let instance = config.instance.build()?;
        Ok(Self { config, instance })
    }

    /// Reuses an already built instance (avoids re-estimating `E[d]`).
    pub fn with_instance(
        config: ExperimentConfig<F>,
        instance: BanditInstance<F>,
    ) -> Result<Self, HarnessError> {
        config.validate()?;
        Ok(Self { config, instance })
    }

    pub fn config(&self) -> &ExperimentConfig<F> {
        &self.config
    }

    pub fn instance(&self) -> &BanditInstance<F> {
        &self.instance
    }

    pub fn build_policy(&self) -> Box<dyn Policy<F> + Send> {
        let inst = &self.instance;
        let k = inst.num_arms();
        let horizon = inst.horizon();
        let pc = &self.config.policy;
        match pc.kind {
            PolicyKind::Ucb1 => Box::new(Ucb1::new(k, horizon)),
            PolicyKind::Se => Box::new(SuccessiveElimination::new(k, horizon)),
            PolicyKind::PhasedSe => Box::new(
                PhasedSe::new(
                    k,
                    inst.window(),
                    inst.d_max(),
                    Schedule::KnownSupport {
                        horizon,
                        d_max: inst.d_max(),
                    },
                    horizon,
                )
                .with_capacity(pc.bucket_capacity)
                .with_mean_mode(pc.phase_mean),
            ),
            PolicyKind::UcbRevisited => Box::new(
                UcbRevisitedPlus::new(
                    k,
                    Schedule::KnownSupport {
                        horizon,
                        d_max: inst.d_max(),
                    },
                    horizon,
                )
                .with_mean_mode(pc.phase_mean),
            ),
            PolicyKind::UcbRevisitedPlus => Box::new(
                UcbRevisitedPlus::new(
                    k,
                    Schedule::KnownExpectation {
                        horizon,
                        expected_d: inst.expected_d(),
                    },
                    horizon,
                )
                .with_mean_mode(pc.phase_mean),
            ),
        }
    }

    /// Runs the configured policy for `T` rounds. Deterministic in
    /// `(master_seed, run_index)`.
    pub fn run_single(&self, run_index: u64) -> Result<Trace<F>, HarnessError> {
        let seeds = EnvSeeds::for_run(self.config.master_seed, run_index);
        let mut env = ImpairedEnv::new(&self.instance, seeds);
        let mut policy = self.build_policy();
        let mut trace = Trace::new(self.config.master_seed, run_index);
        trace.records.reserve(self.instance.horizon() as usize);
        for t in 1..=self.instance.horizon() {
            let arm = policy.select_arm(t);
            let record = env.step(arm)?;
            policy.observe(&record);
            trace.records.push(record);
        }
        Ok(trace)
    }

    pub fn regret_curve(&self, trace: &Trace<F>) -> Result<Vec<F>, HarnessError> {
        let curve = match self.config.regret {
            RegretMode::MeanOptimal => {
                cumulative_regret(trace, &self.instance, Benchmark::MeanOptimal)?
            }
            RegretMode::OracleImpaired => {
                let seeds = EnvSeeds::oracle_for_run(self.config.master_seed, trace.run);
                let oracle = oracle_trace(&self.instance, seeds, trace.len());
                cumulative_regret(trace, &self.instance, Benchmark::Oracle(&oracle))?
            }
        };
        Ok(curve)
    }

    /// All runs, in ascending run index. Runs execute in parallel.
    pub fn run_all(&self) -> Result<Vec<RunResult<F>>, HarnessError> {
        (0..u64::from(self.config.runs))
            .into_par_iter()
            .map(|run| {
                let trace = self.run_single(run)?;
                let regret = self.regret_curve(&trace)?;
                Ok(RunResult { trace, regret })
            })
            .collect()
    }

    /// Regret curves only, in ascending run index.
    pub fn regret_curves(&self) -> Result<Vec<Vec<F>>, HarnessError> {
        (0..u64::from(self.config.runs))
            .into_par_iter()
            .map(|run| self.regret_curve(&self.run_single(run)?))
            .collect()
    }

    pub fn run_monte_carlo(&self) -> Result<AggregateCurve<F>, HarnessError> {
        Ok(AggregateCurve::from_runs(&self.regret_curves()?))
    }
}

pub fn run_single<F: Real>(
    config: &ExperimentConfig<F>,
    run_index: u64,
) -> Result<Trace<F>, HarnessError> {
    Experiment::new(config.clone())?.run_single(run_index)
}

pub fn run_monte_carlo<F: Real>(
    config: &ExperimentConfig<F>,
) -> Result<AggregateCurve<F>, HarnessError> {
    Experiment::new(config.clone())?.run_monte_carlo()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_run_has_zero_std() {
        let c = AggregateCurve::from_runs(&[vec![1.0, 2.0, 4.0]]);
        assert_eq!(c.mean, vec![1.0, 2.0, 4.0]);
        assert_eq!(c.std, vec![0.0; 3]);
        assert_eq!(c.runs, 1);
    }

    #[test]
    fn sample_std() {
        let c = AggregateCurve::from_runs(&[vec![1.0], vec![3.0]]);
        assert_eq!(c.mean, vec![2.0]);
        assert!((c.std[0] - 2f64.sqrt()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn mean_within_run_range(curves in prop::collection::vec(prop::collection::vec(-50.0f64..50.0, 8), 1..10)) {
            let agg = AggregateCurve::from_runs(&curves);
            for t in 0..8 {
                let lo = curves.iter().map(|c| c[t]).fold(f64::INFINITY, f64::min);
                let hi = curves.iter().map(|c| c[t]).fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(agg.mean[t] >= lo - 1e-9 && agg.mean[t] <= hi + 1e-9);
                prop_assert!(agg.std[t] >= 0.0);
            }
        }
    }
}
