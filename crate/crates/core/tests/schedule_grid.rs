mod common;

use impaired_bandits::schedule::{
    compute_wm, delta_tilde, nm_expectation_upper, nm_known_expectation, nm_known_support, Schedule,
};
use proptest::prelude::*;

use common::{quadratic_slack, slack_z};

#[test]
fn known_expectation_is_the_smallest_feasible_count_on_the_grid() {
    for horizon in [1_000u64, 10_000] {
        let ln_t = (horizon as f64).ln();
        for expected_d in [0.0, 2.0, 6.0, 14.0] {
            for m in 1..=20u32 {
                let dt = 0.5f64.powi(m as i32 - 1);
                let n = nm_known_expectation(m, dt, horizon, expected_d);
                let z = slack_z(m, ln_t, expected_d);
                assert!(
                    quadratic_slack(n as f64, dt, ln_t, z) >= 0.0,
                    "T={horizon} E[d]={expected_d} m={m} n={n}"
                );
                assert!(
                    quadratic_slack(n as f64 - 1.0, dt, ln_t, z) < 0.0,
                    "T={horizon} E[d]={expected_d} m={m} n={n}"
                );
                assert!(n as f64 <= nm_expectation_upper(m, dt, horizon, expected_d));
                assert!(compute_wm(n, m, horizon, expected_d) <= dt / 2.0);
            }
        }
    }
}

#[test]
fn threshold_is_an_exact_power_of_two() {
    for m in 1..=60u32 {
        assert_eq!(delta_tilde::<f64>(m), 2f64.powi(1 - m as i32));
    }
}

proptest! {
    #[test]
    fn schedules_increase_with_phase(
        horizon in 3u64..1_000_000,
        d_max in 0u32..50,
        expected_d in 0.0f64..50.0,
    ) {
        let support = Schedule::<f64>::KnownSupport { horizon, d_max };
        let expectation = Schedule::<f64>::KnownExpectation { horizon, expected_d };
        for m in 1..15u32 {
            prop_assert!(support.target(m + 1) > support.target(m));
            prop_assert!(expectation.target(m + 1) > expectation.target(m));
        }
    }

    #[test]
    fn schedules_grow_with_impairment(
        horizon in 3u64..1_000_000,
        m in 1u32..15,
        d_max in 0u32..50,
        expected_d in 0.0f64..50.0,
        extra in 0.0f64..10.0,
    ) {
        let dt = delta_tilde::<f64>(m);
        prop_assert!(nm_known_support(m, dt, horizon, d_max + 1) >= nm_known_support(m, dt, horizon, d_max));
        prop_assert!(
            nm_known_expectation(m, dt, horizon, expected_d + extra) >= nm_known_expectation(m, dt, horizon, expected_d)
        );
    }

    #[test]
    fn known_support_matches_closed_form(horizon in 3u64..1_000_000, m in 1u32..12, d_max in 0u32..40) {
        let dt = delta_tilde::<f64>(m);
        let want = (4.0 * (horizon as f64).ln() / (dt * dt)).ceil() as u64 + u64::from(m) * u64::from(d_max);
        prop_assert_eq!(nm_known_support(m, dt, horizon, d_max), want);
    }
}
