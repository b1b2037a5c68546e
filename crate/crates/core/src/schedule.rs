//! Phase schedules `n_m`: the cumulative per-arm sample target after phase
//! `m`, with `n_0 = 0`.

use crate::scalar::{ln_horizon, Real};

/// Elimination threshold of phase `m ≥ 1`: `2^{1−m}`.
pub fn delta_tilde<F: Real>(m: u32) -> F {
    F::lit(2.0).powi(1 - m as i32)
}

fn ceil_to_u64<F: Real>(x: F) -> u64 {
    x.ceil().to_u64().unwrap_or(u64::MAX)
}

/// Known-support schedule: `⌈4 ln T / Δ̃²⌉ + m·d_max`.
pub fn nm_known_support<F: Real>(m: u32, delta_tilde: F, horizon: u64, d_max: u32) -> u64 {
    let ln_t: F = ln_horizon(horizon);
    let base = ceil_to_u64(F::lit(4.0) * ln_t / (delta_tilde * delta_tilde));
    base.saturating_add(u64::from(m) * u64::from(d_max))
}

/// `z = sqrt(4 ln²T / 9 + 4 m E[d] ln T)`.
pub fn impairment_slack<F: Real>(m: u32, horizon: u64, expected_d: F) -> F {
    let ln_t: F = ln_horizon(horizon);
    let m = F::from_u32(m).unwrap();
    (F::lit(4.0) * ln_t * ln_t / F::lit(9.0) + F::lit(4.0) * m * expected_d * ln_t).sqrt()
}

/// Known-expectation schedule: the smallest `n` with
/// `(Δ̃/2)·n − sqrt(n ln T) − (2/3) ln T − z ≥ 0`, from the positive root of
/// the quadratic in `sqrt(n)`.
pub fn nm_known_expectation<F: Real>(m: u32, delta_tilde: F, horizon: u64, expected_d: F) -> u64 {
    let ln_t: F = ln_horizon(horizon);
    let z = impairment_slack(m, horizon, expected_d);
    let inner =
        ln_t + F::lit(4.0) * delta_tilde * ln_t / F::lit(3.0) + F::lit(2.0) * delta_tilde * z;
    let root = ln_t.sqrt() + inner.sqrt();
    ceil_to_u64(root * root / (delta_tilde * delta_tilde))
}

/// Closed-form upper bound on [`nm_known_expectation`]:
/// `1 + 4 ln T/Δ̃² + 16 ln T/(3Δ̃) + 8 sqrt(m E[d] ln T)/Δ̃`.
pub fn nm_expectation_upper<F: Real>(m: u32, delta_tilde: F, horizon: u64, expected_d: F) -> F {
    let ln_t: F = ln_horizon(horizon);
    let m = F::from_u32(m).unwrap();
    F::one()
        + F::lit(4.0) * ln_t / (delta_tilde * delta_tilde)
        + F::lit(16.0) * ln_t / (F::lit(3.0) * delta_tilde)
        + F::lit(8.0) * (m * expected_d * ln_t).sqrt() / delta_tilde
}

/// Deviation radius `w_m` achieved with `n_m` samples.
pub fn compute_wm<F: Real>(n_m: u64, m: u32, horizon: u64, expected_d: F) -> F {
    let ln_t: F = ln_horizon(horizon);
    let n = F::from_count(n_m);
    (ln_t / n).sqrt()
        + F::lit(2.0) * ln_t / (F::lit(3.0) * n)
        + impairment_slack(m, horizon, expected_d) / n
}

/// Which `n_m` construction a phase-based policy follows.
#[derive(Clone, Debug, PartialEq)]
pub enum Schedule<F> {
    KnownSupport {
        horizon: u64,
        d_max: u32,
    },
    KnownExpectation {
        horizon: u64,
        expected_d: F,
    },
    /// `targets[m − 1] = n_m`; phases past the end repeat the last increment.
    Explicit(Vec<u64>),
}

impl<F: Real> Schedule<F> {
    /// `n_m`; `n_0 = 0`.
    pub fn target(&self, m: u32) -> u64 {
        if m == 0 {
            return 0;
        }
        match self {
            Schedule::KnownSupport { horizon, d_max } => {
                nm_known_support(m, delta_tilde::<F>(m), *horizon, *d_max)
            }
            Schedule::KnownExpectation {
                horizon,
                expected_d,
            } => nm_known_expectation(m, delta_tilde::<F>(m), *horizon, *expected_d),
            Schedule::Explicit(targets) => {
                let idx = m as usize - 1;
                if let Some(&n) = targets.get(idx) {
                    n
                } else {
                    let last = *targets.last().unwrap_or(&1);
                    let prev = if targets.len() >= 2 {
                        targets[targets.len() - 2]
                    } else {
                        0
                    };
                    let step = last.saturating_sub(prev).max(1);
                    last.saturating_add(step.saturating_mul((idx + 1 - targets.len()) as u64))
                }
            }
        }
    }

    /// `n_m − n_{m−1}`, at least one.
    pub fn increment(&self, m: u32) -> u64 {
        self.target(m)
            .saturating_sub(self.target(m.saturating_sub(1)))
            .max(1)
    }
}
