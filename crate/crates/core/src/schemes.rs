//! Pricing schemes, their recommended parameterisations and revenue optimisers.

use serde::{Deserialize, Serialize};

use crate::analytics::{cumulative_value, rn_threshold, two_sided_time, absorption_time, WalkParams};
use crate::distributions::ValueDistribution;
use crate::error::{domain, Error, Result};
use crate::process::ValueProcess;
use crate::quad::DEFAULT_PANELS;
use crate::strategy::{bin_reservation, RiskProfile};

/// Smallest grid resolution accepted by the optimisers.
pub const MIN_GRID: usize = 1000;

/// Resolution of the scan that locates acceptance intervals.
const SCAN_POINTS: usize = 4096;

/// A sequence of per-usage prices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PricingScheme {
    /// One payment at the first usage, unlimited use afterwards.
    #[serde(rename = "bin")]
    BuyItNow { price: f64 },
    /// The same price at every usage.
    #[serde(rename = "ppp")]
    ConstantPpp { price: f64 },
    /// `trial_length` free usages, then `post_price` per usage.
    #[serde(rename = "free_ppp")]
    FreeTrialPpp { trial_length: u64, post_price: f64 },
    /// `trial_length` free usages, then a one-off `bin_price`.
    #[serde(rename = "free_bin")]
    FreeTrialBin { trial_length: u64, bin_price: f64 },
    /// `price` for each of the first `paid_rounds` usages, free afterwards.
    #[serde(rename = "rto")]
    RentToOwn { price: f64, paid_rounds: u64 },
    /// Explicit prices for the first usages, then `tail` forever.
    #[serde(rename = "sequence")]
    PriceSequence { prices: Vec<f64>, tail: f64 },
}

impl PricingScheme {
    pub fn validate(&self) -> Result<()> {
        let check = |p: f64| {
            if p >= 0.0 && p.is_finite() {
                Ok(())
            } else {
                Err(domain("price", p, "[0, inf)"))
            }
        };
        match self {
            Self::BuyItNow { price } | Self::ConstantPpp { price } | Self::RentToOwn { price, .. } => check(*price),
            Self::FreeTrialPpp { post_price, .. } => check(*post_price),
            Self::FreeTrialBin { bin_price, .. } => check(*bin_price),
            Self::PriceSequence { prices, tail } => prices.iter().chain([tail]).try_for_each(|p| check(*p)),
        }
    }

    /// Price charged at usage `t >= 1`.
    pub fn price_at(&self, t: u64) -> f64 {
        let t = t.max(1);
        match self {
            Self::BuyItNow { price } => {
                if t == 1 {
                    *price
                } else {
                    0.0
                }
            }
            Self::ConstantPpp { price } => *price,
            Self::FreeTrialPpp { trial_length, post_price } => {
                if t <= *trial_length {
                    0.0
                } else {
                    *post_price
                }
            }
            Self::FreeTrialBin { trial_length, bin_price } => {
                if t == trial_length + 1 {
                    *bin_price
                } else {
                    0.0
                }
            }
            Self::RentToOwn { price, paid_rounds } => {
                if t <= *paid_rounds {
                    *price
                } else {
                    0.0
                }
            }
            Self::PriceSequence { prices, tail } => prices.get(t as usize - 1).copied().unwrap_or(*tail),
        }
    }

    /// First usage from which the price never changes again.
    pub fn constant_from(&self) -> u64 {
        match self {
            Self::BuyItNow { .. } => 2,
            Self::ConstantPpp { .. } => 1,
            Self::FreeTrialPpp { trial_length, .. } => trial_length + 1,
            Self::FreeTrialBin { trial_length, .. } => trial_length + 2,
            Self::RentToOwn { paid_rounds, .. } => paid_rounds + 1,
            Self::PriceSequence { prices, .. } => prices.len() as u64 + 1,
        }
    }

    /// Number of leading free usages.
    pub fn trial_length(&self) -> u64 {
        match self {
            Self::FreeTrialPpp { trial_length, .. } | Self::FreeTrialBin { trial_length, .. } => *trial_length,
            _ => 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::BuyItNow { .. } => "bin",
            Self::ConstantPpp { .. } => "ppp",
            Self::FreeTrialPpp { .. } => "free_ppp",
            Self::FreeTrialBin { .. } => "free_bin",
            Self::RentToOwn { .. } => "rto",
            Self::PriceSequence { .. } => "sequence",
        }
    }
}

/// Free trial of `⌈2/(3δ²)⌉` usages followed by a per-usage price of 0.089.
pub fn recommended_free_trial_ppp(params: &WalkParams<f64>) -> PricingScheme {
    let n2 = (params.steps() as u64).pow(2);
    PricingScheme::FreeTrialPpp {
        trial_length: (2 * n2).div_ceil(3),
        post_price: 0.089,
    }
}

/// Free trial of `⌈3/(8δ²)⌉` usages followed by a one-off price `1/(4δ²)`.
pub fn recommended_free_trial_bin(params: &WalkParams<f64>) -> PricingScheme {
    let n2 = (params.steps() as u64).pow(2);
    PricingScheme::FreeTrialBin {
        trial_length: (3 * n2).div_ceil(8),
        bin_price: n2 as f64 / 4.0,
    }
}

/// Rent-to-own sized to the buyer's loss budget: price
/// `min(1/2, 1/(24 α C(v*)))` for `⌈24 C(v*)⌉` rounds.
pub fn rent_to_own_params(alpha: f64, v_star: f64, params: &WalkParams<f64>) -> Result<PricingScheme> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "rent-to-own needs 0 < alpha < inf, got {alpha}; use a one-off or constant price instead"
        )));
    }
    if !(v_star > 0.0 && v_star <= 1.0) {
        return Err(domain("v_star", v_star, "(0, 1]"));
    }
    let c = cumulative_value(v_star, params)?;
    Ok(PricingScheme::RentToOwn {
        price: (1.0 / (24.0 * alpha * c)).min(0.5),
        paid_rounds: (24.0 * c).ceil() as u64,
    })
}

/// Result of a price optimisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimum {
    pub price: f64,
    /// Lowest initial value that accepts `price`; `None` for per-usage prices.
    pub threshold: Option<f64>,
    pub revenue: f64,
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < MIN_GRID {
        return Err(domain("grid resolution", grid as f64, ">= 1000"));
    }
    Ok(())
}

/// Initial values whose one-off reservation price is at least `price`, as
/// disjoint intervals.
pub fn acceptance_set(price: f64, profile: &RiskProfile, model: &ValueProcess) -> Result<Vec<(f64, f64)>> {
    let g = |v: f64| bin_reservation(profile, v, model);
    let tol = 1e-9 * price.abs().max(1.0);
    let inside = |v: f64| -> Result<bool> { Ok(g(v)? >= price - tol) };
    let refine = |mut lo: f64, mut hi: f64, lo_in: bool| -> Result<f64> {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if inside(mid)? == lo_in {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(if lo_in { lo } else { hi })
    };
    let mut out = Vec::new();
    let mut start = if inside(0.0)? { Some(0.0) } else { None };
    let mut prev = 0.0;
    for i in 1..=SCAN_POINTS {
        let v = i as f64 / SCAN_POINTS as f64;
        let now = inside(v)?;
        match (start, now) {
            (None, true) => start = Some(refine(prev, v, false)?),
            (Some(s), false) => {
                out.push((s, refine(prev, v, true)?));
                start = None;
            }
            _ => {}
        }
        prev = v;
    }
    if let Some(s) = start {
        out.push((s, 1.0));
    }
    Ok(out)
}

fn mass(f: &ValueDistribution<f64>, set: &[(f64, f64)]) -> Result<f64> {
    if let ValueDistribution::PointMass { v } = f {
        return Ok(if set.iter().any(|&(a, b)| a <= *v && *v <= b) { 1.0 } else { 0.0 });
    }
    set.iter().try_fold(0.0, |acc, &(a, b)| Ok(acc + f.cdf(b)? - f.cdf(a)?))
}

fn bin_revenue(price: f64, f: &ValueDistribution<f64>, profile: &RiskProfile, model: &ValueProcess) -> Result<(f64, Option<f64>)> {
    let set = acceptance_set(price, profile, model)?;
    let accepted = mass(f, &set)?;
    let threshold = match f {
        ValueDistribution::PointMass { v } => (accepted > 0.0).then_some(*v),
        _ => set.first().map(|s| s.0),
    };
    Ok((price * accepted, threshold))
}

/// Revenue-maximising one-off price.
///
/// Scans thresholds `t` on a grid; the price for threshold `t` is the
/// reservation price of type `t` and its revenue is that price times the
/// probability mass of all types that accept it. Ties go to the smaller price.
pub fn optimal_bin(f: &ValueDistribution<f64>, model: &ValueProcess, profile: &RiskProfile, grid: usize) -> Result<Optimum> {
    check_grid(grid)?;
    if matches!(model, ValueProcess::Markov(_)) {
        return Err(Error::Unsupported("one-off prices under the general Markov model".into()));
    }
    let candidates: Vec<f64> = match f {
        ValueDistribution::PointMass { v } => vec![bin_reservation(profile, *v, model)?],
        _ => (0..=grid)
            .map(|i| bin_reservation(profile, i as f64 / grid as f64, model))
            .collect::<Result<_>>()?,
    };
    let mut best = Optimum {
        price: 0.0,
        threshold: Some(0.0),
        revenue: 0.0,
    };
    for price in candidates {
        let (revenue, threshold) = bin_revenue(price, f, profile, model)?;
        if revenue > best.revenue || (revenue == best.revenue && price < best.price) {
            best = Optimum { price, threshold, revenue };
        }
    }
    Ok(best)
}

fn ppp_revenue(price: f64, f: &ValueDistribution<f64>, model: &ValueProcess, profile: &RiskProfile) -> Result<f64> {
    if !(price >= 0.0) {
        return Err(domain("price", price, "[0, inf)"));
    }
    let per_type: Box<dyn Fn(f64) -> f64> = match model {
        ValueProcess::Walk(w) => {
            let params: WalkParams<f64> = w.params();
            if profile.is_neutral() {
                let stop = rn_threshold(price);
                Box::new(move |v| {
                    if v <= stop {
                        0.0
                    } else if stop == 0.0 {
                        absorption_time(v, &params).unwrap_or(0.0)
                    } else {
                        two_sided_time(v, stop, 2.0 - stop, &params).unwrap_or(0.0)
                    }
                })
            } else if profile.is_infinitely_averse() {
                Box::new(move |v| {
                    if v < price {
                        0.0
                    } else if price == 0.0 {
                        absorption_time(v, &params).unwrap_or(0.0)
                    } else {
                        two_sided_time(v, price, 2.0 - price, &params).unwrap_or(0.0)
                    }
                })
            } else {
                return Err(Error::NotClosedForm(format!(
                    "per-usage revenue for alpha = {} on the random walk",
                    profile.alpha()
                )));
            }
        }
        ValueProcess::Binary(b) => {
            let b = b.clone();
            Box::new(move |v| if v < price { 0.0 } else { b.expected_stop(v) })
        }
        ValueProcess::Markov(_) => {
            return Err(Error::NotClosedForm("per-usage revenue under the general Markov model".into()))
        }
    };
    if let ValueDistribution::PointMass { v } = f {
        return Ok(price * per_type(*v));
    }
    let lo = match (model, profile.is_neutral()) {
        (ValueProcess::Walk(_), true) => rn_threshold(price),
        _ => price.min(1.0),
    };
    Ok(price * f.expect(per_type, lo, 1.0, DEFAULT_PANELS).value)
}

/// Revenue-maximising constant per-usage price on the grid `i / grid`.
pub fn optimal_constant_ppp(f: &ValueDistribution<f64>, model: &ValueProcess, profile: &RiskProfile, grid: usize) -> Result<Optimum> {
    check_grid(grid)?;
    let mut best = Optimum {
        price: 0.0,
        threshold: None,
        revenue: 0.0,
    };
    for i in 0..=grid {
        let price = i as f64 / grid as f64;
        let revenue = ppp_revenue(price, f, model, profile)?;
        if revenue > best.revenue {
            best = Optimum {
                price,
                threshold: None,
                revenue,
            };
        }
    }
    Ok(best)
}

/// Expected revenue of a one-off or constant per-usage price by quadrature.
pub fn closed_form_revenue(scheme: &PricingScheme, f: &ValueDistribution<f64>, model: &ValueProcess, profile: &RiskProfile) -> Result<f64> {
    scheme.validate()?;
    match scheme {
        PricingScheme::BuyItNow { price } => {
            if matches!(model, ValueProcess::Markov(_)) {
                return Err(Error::NotClosedForm("one-off prices under the general Markov model".into()));
            }
            Ok(bin_revenue(*price, f, profile, model)?.0)
        }
        PricingScheme::ConstantPpp { price } => ppp_revenue(*price, f, model, profile),
        other => Err(Error::NotClosedForm(format!("revenue of the {} scheme", other.name()))),
    }
}

/// Revenue, social welfare and buyer utility of one scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Outcome {
    pub revenue: f64,
    pub welfare: f64,
    pub utility: f64,
}

/// Comparison of the optimal one-off price against a dominating per-usage price.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BcmReport {
    pub bin_price: f64,
    pub bin_threshold: f64,
    pub bin: Outcome,
    pub ppp_price: f64,
    pub ppp: Outcome,
    /// False when no grid price also matched the one-off buyer utility and
    /// the per-usage price fell back to the one-off threshold.
    pub utility_dominates: bool,
}

/// Per-usage price that matches the optimal one-off price in revenue,
/// welfare and buyer utility for infinitely risk-averse buyers.
///
/// Starts at the one-off threshold, where revenue and welfare already
/// dominate, and lowers the price on the grid until buyer utility catches up.
pub fn bcm_dominating_price(
    f: &ValueDistribution<f64>,
    model: &crate::process::BinaryValueModel,
    grid: usize,
) -> Result<(f64, BcmReport)> {
    check_grid(grid)?;
    let process = ValueProcess::Binary(model.clone());
    let neutral = RiskProfile::neutral();
    let bin = optimal_bin(f, &process, &neutral, grid)?;
    let threshold = bin.threshold.unwrap_or(1.0);
    let welfare_from = |lo: f64| -> f64 {
        let g = |v: f64| v * model.expected_stop(v);
        match f {
            ValueDistribution::PointMass { v } => {
                if *v >= lo {
                    g(*v)
                } else {
                    0.0
                }
            }
            _ => f.expect(g, lo, 1.0, DEFAULT_PANELS).value,
        }
    };
    let bin_welfare = welfare_from(threshold);
    let bin_outcome = Outcome {
        revenue: bin.revenue,
        welfare: bin_welfare,
        utility: bin_welfare - bin.revenue,
    };
    let ppp_at = |p: f64| -> Result<Outcome> {
        let revenue = ppp_revenue(p, f, &process, &RiskProfile::infinitely_averse())?;
        let welfare = welfare_from(p);
        Ok(Outcome {
            revenue,
            welfare,
            utility: welfare - revenue,
        })
    };
    let tol = |x: f64| 1e-9 * x.abs().max(1.0);
    let start = (threshold * grid as f64).floor() as usize;
    let mut prices = vec![threshold];
    prices.extend((0..=start).rev().map(|i| i as f64 / grid as f64).filter(|&p| p < threshold));
    for p in prices {
        let ppp = ppp_at(p)?;
        if ppp.revenue >= bin_outcome.revenue - tol(bin_outcome.revenue) && ppp.utility >= bin_outcome.utility - tol(bin_outcome.utility) {
            let report = BcmReport {
                bin_price: bin.price,
                bin_threshold: threshold,
                bin: bin_outcome,
                ppp_price: p,
                ppp,
                utility_dominates: true,
            };
            return Ok((p, report));
        }
    }
    let ppp = ppp_at(threshold)?;
    Ok((
        threshold,
        BcmReport {
            bin_price: bin.price,
            bin_threshold: threshold,
            bin: bin_outcome,
            ppp_price: threshold,
            ppp,
            utility_dominates: false,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{BinaryValueModel, MeanMap, RandomWalkModel};

    fn walk(delta: f64) -> ValueProcess {
        ValueProcess::Walk(RandomWalkModel::new(delta).unwrap())
    }

    #[test]
    fn price_at_examples() {
        let ft = PricingScheme::FreeTrialPpp { trial_length: 5, post_price: 0.1 };
        assert_eq!(ft.price_at(5), 0.0);
        assert_eq!(ft.price_at(6), 0.1);
        let rto = PricingScheme::RentToOwn { price: 0.5, paid_rounds: 3 };
        assert_eq!(rto.price_at(3), 0.5);
        assert_eq!(rto.price_at(4), 0.0);
        let fb = PricingScheme::FreeTrialBin { trial_length: 2, bin_price: 7.0 };
        assert_eq!((1..=4).map(|t| fb.price_at(t)).collect::<Vec<_>>(), vec![0.0, 0.0, 7.0, 0.0]);
        let seq = PricingScheme::PriceSequence { prices: vec![0.2, 0.4], tail: 0.3 };
        assert_eq!(seq.price_at(2), 0.4);
        assert_eq!(seq.price_at(50), 0.3);
        assert!(PricingScheme::ConstantPpp { price: -1.0 }.validate().is_err());
    }

    #[test]
    fn recommended_parameters() {
        let p = |d: f64| WalkParams::<f64>::from_delta(d).unwrap();
        assert_eq!(
            recommended_free_trial_ppp(&p(0.1)),
            PricingScheme::FreeTrialPpp { trial_length: 67, post_price: 0.089 }
        );
        assert_eq!(recommended_free_trial_ppp(&p(0.05)).trial_length(), 267);
        assert_eq!(
            recommended_free_trial_bin(&p(0.1)),
            PricingScheme::FreeTrialBin { trial_length: 38, bin_price: 25.0 }
        );
        assert_eq!(
            recommended_free_trial_bin(&p(0.5)),
            PricingScheme::FreeTrialBin { trial_length: 2, bin_price: 1.0 }
        );
        let deltas = [0.05, 0.1, 0.125, 0.25, 0.5];
        let ts: Vec<u64> = deltas.iter().map(|&d| recommended_free_trial_ppp(&p(d)).trial_length()).collect();
        assert!(ts.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn rent_to_own_sizing() {
        let params = WalkParams::<f64>::from_delta(0.1).unwrap();
        for alpha in [1e-3, 0.01, 1.0, 100.0] {
            let PricingScheme::RentToOwn { price, paid_rounds } = rent_to_own_params(alpha, 0.5, &params).unwrap() else {
                unreachable!()
            };
            assert!(price * paid_rounds as f64 <= 1.0 / alpha + price + 1e-12);
        }
        let c = cumulative_value(0.5, &params).unwrap();
        let huge = rent_to_own_params(100.0, 0.5, &params).unwrap();
        assert_eq!(huge, PricingScheme::RentToOwn { price: 1.0 / (2400.0 * c), paid_rounds: (24.0 * c).ceil() as u64 });
        assert!(matches!(rent_to_own_params(1e-6, 0.5, &params).unwrap(), PricingScheme::RentToOwn { price, .. } if price == 0.5));
        assert!(rent_to_own_params(0.0, 0.5, &params).is_err());
        assert!(rent_to_own_params(f64::INFINITY, 0.5, &params).is_err());
        assert!(rent_to_own_params(1.0, 0.0, &params).is_err());
    }

    #[test]
    fn averse_bin_uniform_threshold_two_thirds() {
        let delta = 0.01;
        let opt = optimal_bin(&ValueDistribution::uniform(), &walk(delta), &RiskProfile::infinitely_averse(), 3000).unwrap();
        assert!((opt.threshold.unwrap() - 2.0 / 3.0).abs() < 0.01);
        assert!((delta * opt.revenue - 2.0 / 27.0).abs() < 2e-3);
    }

    #[test]
    fn ppp_uniform_neutral_half_price() {
        let delta = 0.1;
        let m = walk(delta);
        let r = closed_form_revenue(&PricingScheme::ConstantPpp { price: 0.5 }, &ValueDistribution::uniform(), &m, &RiskProfile::neutral()).unwrap();
        assert!((r * delta * delta - 1.0 / 3.0).abs() < 1e-9);
        let opt = optimal_constant_ppp(&ValueDistribution::uniform(), &m, &RiskProfile::neutral(), 1000).unwrap();
        assert!((opt.price - 0.5).abs() < 1e-12);
        assert!((opt.revenue - r).abs() < 1e-9);
    }

    #[test]
    fn ppp_power_two_half_price() {
        let m = walk(0.1);
        let f = ValueDistribution::power(2.0).unwrap();
        let r = closed_form_revenue(&PricingScheme::ConstantPpp { price: 0.5 }, &f, &m, &RiskProfile::neutral()).unwrap();
        assert!((r * 0.01 - 5.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn point_mass_averse_revenue_bounded() {
        let delta = 0.1;
        let m = walk(delta);
        for v in [0.2, 0.5, 0.9, 1.0] {
            let f = ValueDistribution::point_mass(v).unwrap();
            let opt = optimal_constant_ppp(&f, &m, &RiskProfile::infinitely_averse(), 1000).unwrap();
            assert!(opt.revenue <= v * v / (delta * delta) + 1e-9, "{v}: {}", opt.revenue);
        }
    }

    #[test]
    fn bin_closed_form_matches_threshold_formula() {
        let m = walk(0.1);
        let params = WalkParams::<f64>::from_delta(0.1).unwrap();
        let c = cumulative_value(0.5, &params).unwrap();
        let r = closed_form_revenue(&PricingScheme::BuyItNow { price: c }, &ValueDistribution::uniform(), &m, &RiskProfile::neutral()).unwrap();
        assert!((r - c * 0.5).abs() < 1e-6 * r);
    }

    #[test]
    fn markov_and_rto_are_not_closed_form() {
        let m = walk(0.1);
        let r = closed_form_revenue(&PricingScheme::RentToOwn { price: 0.5, paid_rounds: 3 }, &ValueDistribution::uniform(), &m, &RiskProfile::neutral());
        assert!(matches!(r, Err(Error::NotClosedForm(_))));
        let r = closed_form_revenue(&PricingScheme::ConstantPpp { price: 0.5 }, &ValueDistribution::uniform(), &m, &RiskProfile::new(1.0).unwrap());
        assert!(matches!(r, Err(Error::NotClosedForm(_))));
        assert!(optimal_bin(&ValueDistribution::uniform(), &m, &RiskProfile::neutral(), 10).is_err());
    }

    #[test]
    fn bcm_uniform_linear_geometric() {
        let model = BinaryValueModel::geometric(MeanMap::Linear { intercept: 0.0, slope: 10.0 }).unwrap();
        let f = ValueDistribution::uniform();
        let (p, report) = bcm_dominating_price(&f, &model, 1000).unwrap();
        assert!((report.bin_threshold - 2.0 / 3.0).abs() < 2e-3);
        assert!((report.bin.revenue - 40.0 / 27.0).abs() < 1e-3);
        assert!(report.utility_dominates);
        assert!(report.ppp.revenue >= report.bin.revenue - 1e-9);
        assert!(report.ppp.utility >= report.bin.utility - 1e-9);
        assert!(p <= report.bin_threshold);
        let process = ValueProcess::Binary(model);
        let at = closed_form_revenue(&PricingScheme::ConstantPpp { price: 2.0 / 3.0 }, &f, &process, &RiskProfile::infinitely_averse()).unwrap();
        assert!((at - 50.0 / 27.0).abs() < 1e-6);
    }

    #[test]
    fn bcm_point_mass_full_surplus() {
        let model = BinaryValueModel::deterministic(MeanMap::Constant(5.0)).unwrap();
        let f = ValueDistribution::point_mass(0.4).unwrap();
        let (p, report) = bcm_dominating_price(&f, &model, 1000).unwrap();
        assert!((p - 0.4).abs() < 1e-9, "{p} {report:?}");
        assert!(report.ppp.utility.abs() < 1e-9, "{p} {report:?}");
        assert!(report.bin.utility.abs() < 1e-9, "{p} {report:?}");
    }
}
