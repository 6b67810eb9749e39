//! Closed forms against the exact grid oracle, in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use valuewalk::analytics::{
    cumulative_value_to, cumulative_value_to_exact, reflected_hit_time, rn_ppp_utility_exact, WalkParams,
};
use valuewalk::process::RandomWalkModel;
use valuewalk::sim::{dp_oracle, OracleQuery};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn grids() -> impl Iterator<Item = u32> {
    [2u32, 4, 8, 16].into_iter()
}

#[test]
fn exact_cumulative_value_matches_oracle_everywhere() {
    for n in grids() {
        let model = RandomWalkModel::with_steps(n).unwrap();
        let p = WalkParams::<BigRational>::with_steps(n).unwrap();
        for i in 0..=n {
            for j in 0..=i {
                let (v, w) = (r(i as i64, n as i64), r(j as i64, n as i64));
                let oracle = dp_oracle(&model, &OracleQuery::CumulativeValue { v: v.clone(), w: w.clone() }).unwrap();
                assert_eq!(cumulative_value_to_exact(v, w, &p).unwrap(), oracle, "n={n} i={i} j={j}");
            }
        }
    }
}

#[test]
fn published_cumulative_value_agrees_on_one_step_and_coarsest_grid() {
    for n in grids() {
        let model = RandomWalkModel::with_steps(n).unwrap();
        let p = WalkParams::<BigRational>::with_steps(n).unwrap();
        for i in 1..=n {
            let (v, w) = (r(i as i64, n as i64), r(i as i64 - 1, n as i64));
            let oracle = dp_oracle(&model, &OracleQuery::CumulativeValue { v: v.clone(), w: w.clone() }).unwrap();
            assert_eq!(cumulative_value_to(v, w, &p).unwrap(), oracle);
        }
    }
    let model = RandomWalkModel::with_steps(2).unwrap();
    let p = WalkParams::<BigRational>::with_steps(2).unwrap();
    for (i, j) in [(1, 0), (2, 0), (2, 1)] {
        let (v, w) = (r(i, 2), r(j, 2));
        let oracle = dp_oracle(&model, &OracleQuery::CumulativeValue { v: v.clone(), w: w.clone() }).unwrap();
        assert_eq!(cumulative_value_to(v, w, &p).unwrap(), oracle);
    }
}

#[test]
fn published_cumulative_value_differs_on_finer_grids() {
    let model = RandomWalkModel::with_steps(4).unwrap();
    let p = WalkParams::<BigRational>::with_steps(4).unwrap();
    let oracle = dp_oracle(&model, &OracleQuery::CumulativeValue { v: r(1, 2), w: r(0, 1) }).unwrap();
    assert_ne!(cumulative_value_to(r(1, 2), r(0, 1), &p).unwrap(), oracle);
}

#[test]
fn revenue_and_utility_under_threshold() {
    for n in grids() {
        let model = RandomWalkModel::with_steps(n).unwrap();
        let p = WalkParams::<BigRational>::with_steps(n).unwrap();
        for i in 0..=n {
            for j in 0..=i {
                for price in [r(0, 1), r(1, 3), r(1, 2), r(3, 4)] {
                    let (v, w) = (r(i as i64, n as i64), r(j as i64, n as i64));
                    let rev = dp_oracle(
                        &model,
                        &OracleQuery::RevenueUnderThreshold { v: v.clone(), w: w.clone(), p: price.clone() },
                    )
                    .unwrap();
                    assert_eq!(rev, price.clone() * reflected_hit_time(v.clone(), w.clone(), &p).unwrap());
                    let util = dp_oracle(
                        &model,
                        &OracleQuery::UtilityUnderThreshold { v: v.clone(), w: w.clone(), p: price.clone() },
                    )
                    .unwrap();
                    assert_eq!(util, rn_ppp_utility_exact(v, w, price, &p).unwrap());
                }
            }
        }
    }
}

#[test]
fn oracle_rejects_off_grid_arguments() {
    let model = RandomWalkModel::with_steps(4).unwrap();
    assert!(dp_oracle(&model, &OracleQuery::HittingTime { v: r(1, 3), target: r(0, 1) }).is_err());
    assert!(dp_oracle(&model, &OracleQuery::HittingTime { v: 0.3_f64, target: 0.0 }).is_err());
}

#[test]
fn oracle_in_floats_matches_rationals() {
    let model = RandomWalkModel::with_steps(8).unwrap();
    let exact = dp_oracle(&model, &OracleQuery::ConditionalTimeToOne { v: r(3, 8) }).unwrap();
    let float = dp_oracle(&model, &OracleQuery::ConditionalTimeToOne { v: 0.375_f64 }).unwrap();
    let exact_f: f64 = exact.numer().to_string().parse::<f64>().unwrap() / exact.denom().to_string().parse::<f64>().unwrap();
    assert!((float - exact_f).abs() < 1e-9);
}
