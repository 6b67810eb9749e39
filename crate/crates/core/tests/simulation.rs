//! Monte Carlo estimates against closed forms, and reproducibility.

use valuewalk::distributions::ValueDistribution;
use valuewalk::process::{RandomWalkModel, ValueProcess};
use valuewalk::schemes::PricingScheme;
use valuewalk::sim::estimate;
use valuewalk::strategy::RiskProfile;

fn walk(delta: f64) -> ValueProcess {
    ValueProcess::Walk(RandomWalkModel::new(delta).unwrap())
}

#[test]
fn uniform_half_price_scaled_revenue() {
    let r = estimate(
        &PricingScheme::ConstantPpp { price: 0.5 },
        &RiskProfile::neutral(),
        &walk(0.1),
        &ValueDistribution::uniform(),
        1_000_000,
        1,
    )
    .unwrap();
    assert!((r.revenue.mean * 0.01 - 1.0 / 3.0).abs() < 0.003, "{}", r.revenue.mean);
    assert!(r.warnings.is_empty());
}

#[test]
fn quadratic_half_price_scaled_revenue() {
    let r = estimate(
        &PricingScheme::ConstantPpp { price: 0.5 },
        &RiskProfile::neutral(),
        &walk(0.1),
        &ValueDistribution::power(2.0).unwrap(),
        1_000_000,
        2,
    )
    .unwrap();
    assert!((r.revenue.mean * 0.01 - 5.0 / 12.0).abs() < 0.005, "{}", r.revenue.mean);
}

#[test]
fn identical_across_thread_counts() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                estimate(
                    &PricingScheme::FreeTrialPpp { trial_length: 10, post_price: 0.3 },
                    &RiskProfile::new(3.0).unwrap(),
                    &walk(0.25),
                    &ValueDistribution::uniform(),
                    20_000,
                    99,
                )
                .unwrap()
            })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn metrics_are_consistent() {
    let r = estimate(
        &PricingScheme::RentToOwn { price: 0.4, paid_rounds: 5 },
        &RiskProfile::new(0.1).unwrap(),
        &walk(0.1),
        &ValueDistribution::uniform(),
        10_000,
        5,
    )
    .unwrap();
    assert!((r.utility.mean - (r.welfare.mean - r.revenue.mean)).abs() < 1e-9);
    assert!(r.revenue.mean <= 0.4 * 5.0);
    assert!(r.revenue.ci_low <= r.revenue.mean && r.revenue.mean <= r.revenue.ci_high);
}
