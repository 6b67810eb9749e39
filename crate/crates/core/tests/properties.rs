//! Invariants of buyer behaviour and per-path accounting.

use proptest::prelude::*;
use valuewalk::process::{RandomWalkModel, ValueProcess};
use valuewalk::schemes::PricingScheme;
use valuewalk::sim::{replica_rng, simulate_once};
use valuewalk::strategy::{policy_for, solve_policy_table, BuyerPolicy, RiskProfile};

fn arb_scheme() -> impl Strategy<Value = PricingScheme> {
    prop_oneof![
        (0.0..1.2f64).prop_map(|price| PricingScheme::ConstantPpp { price }),
        (0u64..20, 0.0..1.0f64).prop_map(|(trial_length, post_price)| PricingScheme::FreeTrialPpp { trial_length, post_price }),
        (0.0..0.5f64, 1u64..30).prop_map(|(price, paid_rounds)| PricingScheme::RentToOwn { price, paid_rounds }),
        (proptest::collection::vec(0.0..1.0f64, 0..6), 0.0..1.0f64)
            .prop_map(|(prices, tail)| PricingScheme::PriceSequence { prices, tail }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn accounting_identities(scheme in arb_scheme(), steps in 2u32..8, v0 in 0.0..1.0f64, seed in any::<u64>()) {
        let model = ValueProcess::Walk(RandomWalkModel::with_steps(steps).unwrap());
        let averse = !matches!(scheme, PricingScheme::RentToOwn { .. });
        let profile = if averse { RiskProfile::infinitely_averse() } else { RiskProfile::neutral() };
        let policy = policy_for(&scheme, &profile, &model).unwrap();
        let m = simulate_once(&scheme, &policy, &model, v0, &mut replica_rng(seed, 0), 10_000);
        prop_assert_eq!(m.utility, m.welfare - m.revenue);
        let paid: f64 = (1..=m.stop_time).map(|t| scheme.price_at(t)).sum();
        prop_assert!((m.revenue - paid).abs() < 1e-9);
        if averse {
            prop_assert!(m.min_running_utility >= -1e-12);
        }
        prop_assert!(m.post_trial_duration <= m.stop_time);
    }

    #[test]
    fn averse_table_equals_myopic(scheme in arb_scheme(), steps in 2u32..6) {
        let walk = RandomWalkModel::with_steps(steps).unwrap();
        let t = solve_policy_table(&scheme, &RiskProfile::infinitely_averse(), &walk, 50).unwrap();
        for step in 1..=12u64 {
            for i in 1..=steps as usize {
                let v = i as f64 / steps as f64;
                let p = scheme.price_at(step);
                prop_assert_eq!(t.decide(step, i, 0), v >= p - 1e-9 * p.max(1.0));
            }
        }
    }

    #[test]
    fn budget_never_overdrawn(price in 0.05..1.0f64, alpha in 0.5..20.0f64, seed in any::<u64>()) {
        let model = ValueProcess::Walk(RandomWalkModel::new(0.125).unwrap());
        let scheme = PricingScheme::ConstantPpp { price };
        let policy = policy_for(&scheme, &RiskProfile::new(alpha).unwrap(), &model).unwrap();
        prop_assert!(matches!(policy, BuyerPolicy::Table(_)));
        for k in 0..20 {
            let m = simulate_once(&scheme, &policy, &model, 1.0, &mut replica_rng(seed, k), 100_000);
            prop_assert!(-m.min_running_utility <= 1.0 / alpha + 1e-9);
        }
    }
}
