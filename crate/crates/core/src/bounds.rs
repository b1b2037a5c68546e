//! Closed-form regret bounds evaluated on true instance gaps.
//!
//! Arm sets: `K'' = {i : Δ_i > 0}` and `K' = {i : Δ_i > λ}`. The tail term
//! `max_{i ∈ K'', Δ_i < λ} Δ_i T` is zero when no arm qualifies. All logs
//! are natural.

use thiserror::Error;

use crate::env::epsilon_of;
use crate::scalar::{ln_horizon, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("instance-independent bounds need T > K (T = {horizon}, K = {arms})")]
    HorizonTooShort { horizon: u64, arms: usize },
}

fn best_index<F: Real>(deltas: &[F]) -> usize {
    deltas.iter().position(|d| *d == F::zero()).unwrap_or(0)
}

fn small_gap_tail<F: Real>(deltas: &[F], horizon: u64, lambda: F) -> F {
    let t = F::from_count(horizon);
    deltas
        .iter()
        .filter(|&&d| d > F::zero() && d < lambda)
        .fold(F::zero(), |acc, &d| acc.max(d * t))
}

fn positive_count<F: Real>(deltas: &[F]) -> F {
    F::from_count(deltas.iter().filter(|&&d| d > F::zero()).count() as u64)
}

/// `log(4/Δ)`, the phase count up to which an arm with gap `Δ` survives.
fn phase_log<F: Real>(delta: F) -> F {
    (F::lit(4.0) / delta).ln()
}

/// Regret bound for Phased-SE with known impairment support `d_max`.
pub fn theorem1_bound<F: Real>(deltas: &[F], horizon: u64, lambda: F, d_max: u32) -> F {
    let ln_t: F = ln_horizon(horizon);
    let t = F::from_count(horizon);
    let eps = epsilon_of(deltas, best_index(deltas));
    let coef = if eps >= F::one() {
        F::lit(4.0)
    } else {
        (F::one() / ((F::one() - eps) * (F::one() - eps))).min(F::lit(4.0))
    };
    let d_max = F::from_u32(d_max).unwrap();
    let mut total = F::zero();
    for &d in deltas.iter().filter(|&&d| d > lambda && d > F::zero()) {
        total += F::lit(4.0) * d / t;
        total += d + F::lit(16.0) * ln_t / d * coef + F::lit(2.0) * d * phase_log(d) * d_max;
    }
    total + positive_count(deltas) * F::lit(16.0) / t + small_gap_tail(deltas, horizon, lambda)
}

/// Regret bound for the unbucketed variant with known `d_max`.
pub fn lemma2_bound<F: Real>(deltas: &[F], horizon: u64, lambda: F, d_max: u32) -> F {
    let ln_t: F = ln_horizon(horizon);
    let t = F::from_count(horizon);
    let d_max = F::from_u32(d_max).unwrap();
    let mut total = F::zero();
    for &d in deltas.iter().filter(|&&d| d > lambda && d > F::zero()) {
        total += d + F::lit(64.0) * ln_t / d + F::lit(2.0) * d * phase_log(d) * d_max;
        total += F::lit(2.0) * d / t;
    }
    total + positive_count(deltas) * F::lit(16.0) / t + small_gap_tail(deltas, horizon, lambda)
}

/// Regret bound for UCB-Revisited+ with known `E[d]`.
pub fn theorem2_bound<F: Real>(deltas: &[F], horizon: u64, lambda: F, expected_d: F) -> F {
    let ln_t: F = ln_horizon(horizon);
    let t = F::from_count(horizon);
    let mut total = F::zero();
    for &d in deltas.iter().filter(|&&d| d > lambda && d > F::zero()) {
        total += d
            + F::lit(64.0) * ln_t / d
            + F::lit(64.0) * ln_t / F::lit(3.0)
            + F::lit(32.0) * (phase_log(d) * expected_d * ln_t).sqrt();
        total += F::lit(2.0) * d / t;
    }
    total + positive_count(deltas) * F::lit(32.0) / t + small_gap_tail(deltas, horizon, lambda)
}

/// `λ = sqrt(K ln T / T)`.
pub fn default_lambda<F: Real>(arms: usize, horizon: u64) -> F {
    let ln_t: F = ln_horizon(horizon);
    (F::from_count(arms as u64) * ln_t / F::from_count(horizon)).sqrt()
}

/// Instance-independent rates with unit leading constants:
/// `sqrt(KT ln T) + sqrt(K³ ln³T / T)·d_max` and
/// `sqrt(KT ln T) + K sqrt(ln²T · E[d])`.
pub fn corollary_bounds<F: Real>(
    arms: usize,
    horizon: u64,
    d_max: u32,
    expected_d: F,
) -> Result<(F, F), BoundsError> {
    if horizon <= arms as u64 {
        return Err(BoundsError::HorizonTooShort { horizon, arms });
    }
    let ln_t: F = ln_horizon(horizon);
    let k = F::from_count(arms as u64);
    let t = F::from_count(horizon);
    let base = (k * t * ln_t).sqrt();
    let support = (k * k * k * ln_t * ln_t * ln_t / t).sqrt() * F::from_u32(d_max).unwrap();
    let expectation = k * (ln_t * ln_t * expected_d).sqrt();
    Ok((base + support, base + expectation))
}
