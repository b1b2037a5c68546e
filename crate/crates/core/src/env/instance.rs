//! Bandit instances: Bernoulli arms plus a per-arm impairment process.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::rng::{stream_rng, StreamTag};
use crate::scalar::Real;

use super::EnvError;

/// Number of draws used to estimate `E[d]` for the clipped absolute normal.
pub const MOMENT_SAMPLES: u64 = 1_000_000;
const MOMENT_SEED: u64 = 0x00e5_7d00;

/// Bernoulli arm with success probability `mean`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArmSpec<F> {
    mean: F,
}

impl<F: Real> ArmSpec<F> {
    pub fn new(mean: F) -> Result<Self, EnvError> {
        if !(mean >= F::zero() && mean <= F::one()) {
            return Err(EnvError::MeanOutOfRange(mean.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { mean })
    }

    pub fn mean(&self) -> F {
        self.mean
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> F {
        let u: f64 = rng.random();
        if u < self.mean.to_f64().unwrap_or(0.0) {
            F::one()
        } else {
            F::zero()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ImpairmentKind<F> {
    Constant(u32),
    UniformInt {
        lo: u32,
        hi: u32,
    },
    /// `|Normal(mean, stddev)|`, rounded to the nearest integer and clipped
    /// into `{0, ..., d_max}`.
    AbsNormal {
        mean: F,
        stddev: F,
    },
}

/// Distribution of the per-round requirement `d_{t,j}` for one arm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImpairmentSpec<F> {
    kind: ImpairmentKind<F>,
    d_max: u32,
}

impl<F: Real> ImpairmentSpec<F> {
    pub fn none() -> Self {
        Self::constant(0)
    }

    pub fn constant(value: u32) -> Self {
        Self {
            kind: ImpairmentKind::Constant(value),
            d_max: value,
        }
    }

    pub fn uniform(lo: u32, hi: u32) -> Result<Self, EnvError> {
        if lo > hi {
            return Err(EnvError::InvalidImpairment(format!(
                "uniform range is empty: lo = {lo} > hi = {hi}"
            )));
        }
        Ok(Self {
            kind: ImpairmentKind::UniformInt { lo, hi },
            d_max: hi,
        })
    }

    pub fn abs_normal(mean: F, stddev: F, d_max: u32) -> Result<Self, EnvError> {
        if !(mean >= F::zero() && stddev >= F::zero()) || !mean.is_finite() || !stddev.is_finite() {
            return Err(EnvError::InvalidImpairment(format!(
                "absolute normal needs finite mean >= 0 and stddev >= 0, got ({mean}, {stddev})"
            )));
        }
        Ok(Self {
            kind: ImpairmentKind::AbsNormal { mean, stddev },
            d_max,
        })
    }

    pub fn kind(&self) -> ImpairmentKind<F> {
        self.kind
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    /// Same distribution with the support upper bound lowered to `cap`.
    pub fn clipped(mut self, cap: u32) -> Self {
        self.d_max = self.d_max.min(cap);
        self
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let raw = match self.kind {
            ImpairmentKind::Constant(v) => v,
            ImpairmentKind::UniformInt { lo, hi } => rng.random_range(lo..=hi),
            ImpairmentKind::AbsNormal { mean, stddev } => {
                let mean = mean.to_f64().unwrap_or(0.0);
                let stddev = stddev.to_f64().unwrap_or(0.0);
                let x = if stddev > 0.0 {
                    Normal::new(mean, stddev)
                        .expect("validated parameters")
                        .sample(rng)
                } else {
                    mean
                };
                let r = x.abs().round();
                if r >= f64::from(self.d_max) {
                    self.d_max
                } else {
                    r as u32
                }
            }
        };
        raw.min(self.d_max)
    }

    /// `E[d]`: exact for the discrete kinds, Monte Carlo for the clipped
    /// absolute normal (fixed internal seed, [`MOMENT_SAMPLES`] draws).
    pub fn expected(&self) -> F {
        match self.kind {
            ImpairmentKind::Constant(v) => F::from_u32(v.min(self.d_max)).unwrap(),
            ImpairmentKind::UniformInt { lo, hi } => {
                let total: u64 = (lo..=hi).map(|v| u64::from(v.min(self.d_max))).sum();
                F::lit(total as f64 / f64::from(hi - lo + 1))
            }
            ImpairmentKind::AbsNormal { .. } => {
                let mut rng = stream_rng(MOMENT_SEED, StreamTag::ImpairmentMoments, 0);
                let total: u64 = (0..MOMENT_SAMPLES)
                    .map(|_| u64::from(self.sample(&mut rng)))
                    .sum();
                F::lit(total as f64 / MOMENT_SAMPLES as f64)
            }
        }
    }
}

/// Mean-reward gaps of an instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Gaps<F> {
    pub mu_star: F,
    pub best_arm: usize,
    pub deltas: Vec<F>,
}

/// Computes `μ*`, `j*` (lowest index among ties) and `Δ_j = μ* − μ_j`.
pub fn gaps_of<F: Real>(means: &[F]) -> Gaps<F> {
    let mut best_arm = 0;
    for (j, &m) in means.iter().enumerate() {
        if m > means[best_arm] {
            best_arm = j;
        }
    }
    let mu_star = means[best_arm];
    Gaps {
        mu_star,
        best_arm,
        deltas: means.iter().map(|&m| mu_star - m).collect(),
    }
}

/// Dissimilarity parameter: the largest `Δ_j / Δ_k` over distinct
/// suboptimal arms with `Δ_j ≤ Δ_k` and `Δ_k > 0`; zero when no such pair
/// exists.
pub fn epsilon_of<F: Real>(deltas: &[F], best_arm: usize) -> F {
    let mut eps = F::zero();
    for (j, &dj) in deltas.iter().enumerate() {
        if j == best_arm {
            continue;
        }
        for (k, &dk) in deltas.iter().enumerate() {
            if k == best_arm || k == j || dj > dk || dk <= F::zero() {
                continue;
            }
            eps = eps.max(dj / dk);
        }
    }
    eps
}

/// A `K`-armed Bernoulli instance with impairment window `N` and horizon `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct BanditInstance<F> {
    arms: Vec<ArmSpec<F>>,
    impairments: Vec<ImpairmentSpec<F>>,
    expected_d: Vec<F>,
    window: u32,
    horizon: u64,
}

impl<F: Real> BanditInstance<F> {
    pub fn new(
        arms: Vec<ArmSpec<F>>,
        impairments: Vec<ImpairmentSpec<F>>,
        window: u32,
        horizon: u64,
    ) -> Result<Self, EnvError> {
        if arms.len() < 2 {
            return Err(EnvError::TooFewArms(arms.len()));
        }
        if impairments.len() != arms.len() {
            return Err(EnvError::ImpairmentCount {
                arms: arms.len(),
                impairments: impairments.len(),
            });
        }
        if window == 0 {
            return Err(EnvError::ZeroWindow);
        }
        if horizon == 0 {
            return Err(EnvError::ZeroHorizon);
        }
        if let Some((arm, spec)) = impairments
            .iter()
            .enumerate()
            .find(|(_, s)| s.d_max() > window)
        {
            return Err(EnvError::DMaxExceedsWindow {
                arm,
                d_max: spec.d_max(),
                window,
            });
        }
        let expected_d = impairments.iter().map(ImpairmentSpec::expected).collect();
        Ok(Self {
            arms,
            impairments,
            expected_d,
            window,
            horizon,
        })
    }

    /// Instance from plain means with the same impairment on every arm.
    pub fn from_means(
        means: &[F],
        impairment: ImpairmentSpec<F>,
        window: u32,
        horizon: u64,
    ) -> Result<Self, EnvError> {
        let arms = means
            .iter()
            .map(|&m| ArmSpec::new(m))
            .collect::<Result<Vec<_>, _>>()?;
        let impairments = vec![impairment; arms.len()];
        Self::new(arms, impairments, window, horizon)
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn arms(&self) -> &[ArmSpec<F>] {
        &self.arms
    }

    pub fn means(&self) -> Vec<F> {
        self.arms.iter().map(ArmSpec::mean).collect()
    }

    pub fn impairment(&self, arm: usize) -> &ImpairmentSpec<F> {
        &self.impairments[arm]
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Same instance with a different horizon.
    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon.max(1);
        self
    }

    /// Largest support bound over arms.
    pub fn d_max(&self) -> u32 {
        self.impairments
            .iter()
            .map(ImpairmentSpec::d_max)
            .max()
            .unwrap_or(0)
    }

    /// Per-arm `E[d]`.
    pub fn expected_d_per_arm(&self) -> &[F] {
        &self.expected_d
    }

    /// Scalar `E[d]` for schedule construction: the largest per-arm value.
    pub fn expected_d(&self) -> F {
        self.expected_d.iter().copied().fold(F::zero(), F::max)
    }

    pub fn gaps(&self) -> Gaps<F> {
        gaps_of(&self.means())
    }

    pub fn epsilon(&self) -> F {
        let g = self.gaps();
        epsilon_of(&g.deltas, g.best_arm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaps_ties_pick_lowest_index() {
        let g = gaps_of(&[0.5, 0.5]);
        assert_eq!(g.best_arm, 0);
        assert_eq!(g.deltas, vec![0.0, 0.0]);
    }

    #[test]
    fn gaps_subtract_from_max() {
        let g = gaps_of(&[0.9_f64, 0.8, 0.5]);
        assert_eq!(g.mu_star, 0.9);
        assert_eq!(g.best_arm, 0);
        assert!((g.deltas[1] - 0.1).abs() < 1e-12);
        assert!((g.deltas[2] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_of(&[0.0, 0.2, 0.2], 0), 1.0);
        assert_eq!(epsilon_of(&[0.0, 0.1, 0.2, 0.4], 0), 0.5);
        assert_eq!(epsilon_of(&[0.0, 0.3], 0), 0.0);
        assert_eq!(epsilon_of(&[0.0, 0.0, 0.0], 0), 0.0);
        // a tied optimal arm counts as suboptimal with zero gap
        assert_eq!(epsilon_of(&[0.0, 0.0, 0.2], 0), 0.0);
    }

    #[test]
    fn instance_validation() {
        let none = ImpairmentSpec::<f64>::none();
        assert!(matches!(
            BanditInstance::from_means(&[0.5], none, 5, 10),
            Err(EnvError::TooFewArms(1))
        ));
        assert!(matches!(
            BanditInstance::from_means(&[0.5, 1.2], none, 5, 10),
            Err(EnvError::MeanOutOfRange(_))
        ));
        assert!(matches!(
            BanditInstance::from_means(&[0.5, 0.2], ImpairmentSpec::constant(6), 5, 10),
            Err(EnvError::DMaxExceedsWindow {
                d_max: 6,
                window: 5,
                ..
            })
        ));
        assert!(
            BanditInstance::from_means(&[0.5, 0.2], ImpairmentSpec::constant(5), 5, 10).is_ok()
        );
    }

    #[test]
    fn impairment_samples_stay_in_support() {
        let mut rng = stream_rng(3, StreamTag::Impairment, 0);
        let specs = [
            ImpairmentSpec::<f64>::constant(4),
            ImpairmentSpec::uniform(1, 6).unwrap(),
            ImpairmentSpec::abs_normal(14.0, 5.0, 20).unwrap(),
            ImpairmentSpec::abs_normal(14.0, 5.0, 20)
                .unwrap()
                .clipped(9),
        ];
        for spec in specs {
            for _ in 0..2000 {
                assert!(spec.sample(&mut rng) <= spec.d_max());
            }
        }
    }

    #[test]
    fn exact_expectations() {
        assert_eq!(ImpairmentSpec::<f64>::constant(3).expected(), 3.0);
        assert_eq!(
            ImpairmentSpec::<f64>::uniform(2, 5).unwrap().expected(),
            3.5
        );
        assert_eq!(ImpairmentSpec::<f64>::none().expected(), 0.0);
    }

    #[test]
    fn abs_normal_expectation_matches_quadrature() {
        // P(round(|X|) = k) integrated numerically for X ~ N(6, 1.5), d_max = 20.
        let (mu, sd) = (6.0_f64, 1.5_f64);
        let pdf = |x: f64| {
            (-(x - mu).powi(2) / (2.0 * sd * sd)).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
        };
        let steps = 400_000;
        let (lo, hi) = (-40.0_f64, 40.0_f64);
        let h = (hi - lo) / steps as f64;
        let mut expect = 0.0;
        for i in 0..steps {
            let x = lo + (i as f64 + 0.5) * h;
            let k = x.abs().round().min(20.0);
            expect += k * pdf(x) * h;
        }
        let est: f64 = ImpairmentSpec::abs_normal(mu, sd, 20).unwrap().expected();
        assert!((est - expect).abs() < 0.01, "{est} vs {expect}");
    }

    #[test]
    fn works_with_f32() {
        let inst =
            BanditInstance::<f32>::from_means(&[0.9, 0.8, 0.5], ImpairmentSpec::constant(2), 4, 10)
                .unwrap();
        assert_eq!(inst.gaps().best_arm, 0);
        assert!((inst.epsilon() - 0.25).abs() < 1e-6);
    }
}
