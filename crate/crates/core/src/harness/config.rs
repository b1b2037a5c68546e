//! Experiment descriptions.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::env::{ArmSpec, BanditInstance, ImpairmentSpec, RegretMode};
use crate::policies::PhaseMeanMode;
use crate::rng::{stream_rng, StreamTag};
use crate::scalar::Real;

use super::HarnessError;

/// Where arm means come from.
#[derive(Clone, Debug, PartialEq)]
pub enum MeansSource<F> {
    Explicit(Vec<F>),
    /// Means drawn uniformly from `[0, 1]` with a dedicated instance seed.
    /// The `optimal_arms` highest draws are then raised to the maximum.
    Random {
        arms: usize,
        seed: u64,
        optimal_arms: usize,
    },
}

/// Impairment applied to every arm of an instance.
#[derive(Clone, Debug, PartialEq)]
pub enum ImpairmentModel<F> {
    None,
    Constant(u32),
    Uniform {
        lo: u32,
        hi: u32,
    },
    /// Arm `j` gets `|Normal(mean, stddev_scale · (j + 1))|`.
    AbsNormal {
        mean: F,
        stddev_scale: F,
        d_max: u32,
    },
}

impl<F: Real> ImpairmentModel<F> {
    pub fn d_max(&self) -> u32 {
        match *self {
            ImpairmentModel::None => 0,
            ImpairmentModel::Constant(v) => v,
            ImpairmentModel::Uniform { hi, .. } => hi,
            ImpairmentModel::AbsNormal { d_max, .. } => d_max,
        }
    }

    pub fn spec_for_arm(&self, arm: usize) -> Result<ImpairmentSpec<F>, HarnessError> {
        Ok(match *self {
            ImpairmentModel::None => ImpairmentSpec::none(),
            ImpairmentModel::Constant(v) => ImpairmentSpec::constant(v),
            ImpairmentModel::Uniform { lo, hi } => ImpairmentSpec::uniform(lo, hi)?,
            ImpairmentModel::AbsNormal {
                mean,
                stddev_scale,
                d_max,
            } => {
                let scale = F::from_count(arm as u64 + 1);
                ImpairmentSpec::abs_normal(mean, stddev_scale * scale, d_max)?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceConfig<F> {
    pub means: MeansSource<F>,
    pub impairment: ImpairmentModel<F>,
    pub window: u32,
    pub horizon: u64,
}

impl<F: Real> InstanceConfig<F> {
    pub fn num_arms(&self) -> usize {
        match &self.means {
            MeansSource::Explicit(m) => m.len(),
            MeansSource::Random { arms, .. } => *arms,
        }
    }

    pub fn resolve_means(&self) -> Vec<F> {
        match &self.means {
            MeansSource::Explicit(m) => m.clone(),
            MeansSource::Random {
                arms,
                seed,
                optimal_arms,
            } => {
                let mut rng = stream_rng(*seed, StreamTag::Instance, 0);
                let mut means: Vec<F> = (0..*arms).map(|_| F::lit(rng.random::<f64>())).collect();
                raise_top_arms(&mut means, *optimal_arms);
                means
            }
        }
    }

    pub fn build(&self) -> Result<BanditInstance<F>, HarnessError> {
        let means = self.resolve_means();
        let arms = means
            .iter()
            .map(|&m| ArmSpec::new(m))
            .collect::<Result<Vec<_>, _>>()?;
        let impairments = (0..arms.len())
            .map(|j| self.impairment.spec_for_arm(j))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BanditInstance::new(
            arms,
            impairments,
            self.window,
            self.horizon,
        )?)
    }
}

/// Sets the `count` largest means (ties by lower index) to the maximum.
pub fn raise_top_arms<F: Real>(means: &mut [F], count: usize) {
    let mut order: Vec<usize> = (0..means.len()).collect();
    order.sort_by(|&a, &b| means[b].partial_cmp(&means[a]).unwrap().then(a.cmp(&b)));
    if let Some(&top) = order.first() {
        let best = means[top];
        for &j in order.iter().take(count) {
            means[j] = best;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    Ucb1,
    Se,
    PhasedSe,
    UcbRevisited,
    UcbRevisitedPlus,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::Ucb1,
        PolicyKind::Se,
        PolicyKind::PhasedSe,
        PolicyKind::UcbRevisited,
        PolicyKind::UcbRevisitedPlus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Ucb1 => "ucb1",
            PolicyKind::Se => "se",
            PolicyKind::PhasedSe => "phased-se",
            PolicyKind::UcbRevisited => "ucb-revisited",
            PolicyKind::UcbRevisitedPlus => "ucb-revisited-plus",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| HarnessError::UnknownPolicy(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    /// Phased-SE only: overrides `⌊N / d_max⌋`.
    pub bucket_capacity: Option<usize>,
    pub phase_mean: PhaseMeanMode,
}

impl PolicyConfig {
    pub fn new(kind: PolicyKind) -> Self {
        Self {
            kind,
            bucket_capacity: None,
            phase_mean: PhaseMeanMode::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutputKind {
    Curve,
    Traces,
    Summary,
}

/// Parameters of the preset sweeps.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig<F> {
    pub optimal_arms: Vec<usize>,
    pub switch_window: usize,
    pub capacities: Vec<usize>,
    pub impairment_means: Vec<F>,
}

impl<F> Default for SweepConfig<F> {
    fn default() -> Self {
        Self {
            optimal_arms: vec![1, 3, 7],
            switch_window: 15,
            capacities: vec![3, 20],
            impairment_means: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig<F> {
    pub instance: InstanceConfig<F>,
    pub policy: PolicyConfig,
    pub runs: u32,
    pub master_seed: u64,
    pub regret: RegretMode,
    pub outputs: Vec<OutputKind>,
    pub sweep: SweepConfig<F>,
}

impl<F: Real> ExperimentConfig<F> {
    pub const DEFAULT_RUNS: u32 = 30;

    pub fn new(instance: InstanceConfig<F>, policy: PolicyConfig) -> Self {
        Self {
            instance,
            policy,
            runs: Self::DEFAULT_RUNS,
            master_seed: 0,
            regret: RegretMode::default(),
            outputs: vec![OutputKind::Curve, OutputKind::Summary],
            sweep: SweepConfig::default(),
        }
    }

    pub fn with_policy(&self, policy: PolicyConfig) -> Self {
        Self {
            policy,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs == 0 {
            return Err(HarnessError::Config("runs must be at least 1".into()));
        }
        if self.instance.num_arms() < 2 {
            return Err(HarnessError::Config(
                "an instance needs at least 2 arms".into(),
            ));
        }
        if self.instance.impairment.d_max() > self.instance.window {
            return Err(HarnessError::Config(format!(
                "d_max = {} exceeds window = {}",
                self.instance.impairment.d_max(),
                self.instance.window
            )));
        }
        if let MeansSource::Random {
            arms, optimal_arms, ..
        } = self.instance.means
        {
            if optimal_arms == 0 || optimal_arms > arms {
                return Err(HarnessError::Config(format!(
                    "optimal_arms = {optimal_arms} must lie in 1..={arms}"
                )));
            }
        }
        if self.policy.bucket_capacity == Some(0) {
            return Err(HarnessError::Config(
                "bucket_capacity must be positive".into(),
            ));
        }
        Ok(())
    }
}
