//! Buyer decision rules across the risk spectrum `α ∈ [0, ∞]`.
//!
//! An `α`-averse buyer maximises expected future utility subject to his
//! realised future utility never dropping below `-1/α` on any path. For
//! pay-per-play schemes this is tracked as a running loss budget capped at
//! `1/α`; for one-off prices it reduces to a worst-case bound on the total.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::analytics::{cumulative_value, rn_threshold, worst_case_cumulative, WalkParams};
use crate::error::{domain, Error, Result};
use crate::process::{RandomWalkModel, ValueProcess};
use crate::schemes::PricingScheme;

/// Relative tolerance under which a zero continuation utility counts as a buy.
pub const INDIFFERENCE_TOL: f64 = 1e-9;

/// Most budget levels a policy table will carry before coarsening its unit.
pub const MAX_BUDGET_LEVELS: usize = 4096;

/// Loss tolerance `α`: 0 is risk neutral, infinity never risks a loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskProfile {
    alpha: f64,
}

impl RiskProfile {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(domain("alpha", alpha, "[0, inf]"));
        }
        Ok(Self { alpha })
    }

    pub fn neutral() -> Self {
        Self { alpha: 0.0 }
    }

    pub fn infinitely_averse() -> Self {
        Self { alpha: f64::INFINITY }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `1/α`: infinite when `α = 0`, zero when `α = ∞`.
    pub fn loss_budget(&self) -> f64 {
        if self.alpha == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.alpha
        }
    }

    pub fn is_neutral(&self) -> bool {
        self.alpha == 0.0
    }

    pub fn is_infinitely_averse(&self) -> bool {
        self.alpha.is_infinite()
    }
}

fn at_least(lhs: f64, rhs: f64) -> bool {
    lhs >= rhs - INDIFFERENCE_TOL * rhs.abs().max(1.0)
}

/// Highest one-off price a buyer with initial value `v0` accepts.
///
/// Risk neutral: the expected cumulative value. Infinitely averse: the
/// cumulative value on the worst path. In between, the smaller of the
/// expectation and the worst case plus `1/α`.
pub fn bin_reservation(profile: &RiskProfile, v0: f64, model: &ValueProcess) -> Result<f64> {
    let (expected, worst) = match model {
        ValueProcess::Walk(w) => {
            let p: WalkParams<f64> = w.params();
            (cumulative_value(v0, &p)?, worst_case_cumulative(v0, &p)?)
        }
        ValueProcess::Binary(b) => {
            if !(0.0..=1.0).contains(&v0) {
                return Err(domain("v0", v0, "[0, 1]"));
            }
            (v0 * b.expected_stop(v0), v0 * b.min_stop(v0) as f64)
        }
        ValueProcess::Markov(_) => {
            return Err(Error::Unsupported("one-off prices under the general Markov model".into()))
        }
    };
    Ok(if profile.is_neutral() {
        expected
    } else if profile.is_infinitely_averse() {
        worst
    } else {
        expected.min(worst + profile.loss_budget())
    })
}

/// Whether a buyer with initial value `v0` pays the one-off `price`.
/// Indifference buys.
pub fn bin_accept(profile: &RiskProfile, v0: f64, price: f64, model: &ValueProcess) -> Result<bool> {
    if !(price >= 0.0) {
        return Err(domain("price", price, "[0, inf)"));
    }
    Ok(at_least(bin_reservation(profile, v0, model)?, price))
}

/// Per-usage buy/stop rule.
#[derive(Debug, Clone, PartialEq)]
pub enum BuyerPolicy {
    /// Buy while the value is strictly above the level.
    Threshold { stop_at_or_below: f64 },
    /// Buy iff the value covers the current price.
    Myopic,
    /// Backward-induction table over (usage, value, remaining budget).
    Table(Arc<PolicyTable>),
    /// Use freely until usage `charge_at`, then pay the one-off price there
    /// iff [`bin_accept`] holds for the value at that point (the initial
    /// type when `charge_at = 1`), then use freely forever.
    Commit {
        charge_at: u64,
        profile: RiskProfile,
        model: ValueProcess,
    },
}

/// Per-path memory a policy needs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BuyerState {
    pub budget_level: usize,
}

impl BuyerPolicy {
    pub fn start(&self) -> BuyerState {
        match self {
            BuyerPolicy::Table(t) => BuyerState {
                budget_level: t.levels - 1,
            },
            _ => BuyerState::default(),
        }
    }

    /// Decision at usage `t` (1-based) given the current value and price.
    /// Free usages are always taken.
    pub fn decide(&self, state: &mut BuyerState, t: u64, value: f64, v0: f64, price: f64) -> bool {
        match self {
            BuyerPolicy::Threshold { stop_at_or_below } => price <= 0.0 || value > stop_at_or_below + 1e-12,
            BuyerPolicy::Myopic => at_least(value, price),
            BuyerPolicy::Table(table) => {
                let i = ((value * table.steps as f64).round() as usize).min(table.steps as usize);
                let k = state.budget_level;
                if !table.decide(t, i, k) {
                    return false;
                }
                state.budget_level = table.next_level(k, table.value(i), price).unwrap_or(0);
                true
            }
            BuyerPolicy::Commit {
                charge_at,
                profile,
                model,
            } => {
                if t != *charge_at {
                    return true;
                }
                let basis = if t == 1 { v0 } else { value };
                bin_accept(profile, basis, price, model).unwrap_or(false)
            }
        }
    }
}

/// Decision table from [`solve_policy_backward`].
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyTable {
    steps: u32,
    unconstrained: bool,
    unit: f64,
    levels: usize,
    /// Decisions for usages `1..rows.len()`, indexed `[value * levels + budget]`.
    rows: Vec<Vec<bool>>,
    stationary: Vec<bool>,
    first_values: Vec<f64>,
    tail_residual: f64,
    warnings: Vec<String>,
}

impl PolicyTable {
    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn budget_levels(&self) -> usize {
        self.levels
    }

    /// Budget represented by one level step.
    pub fn budget_unit(&self) -> f64 {
        self.unit
    }

    /// Usages with their own decision row; later usages share the stationary row.
    pub fn explicit_rows(&self) -> usize {
        self.rows.len()
    }

    /// `max |J_H - J_{H-1}|` of the stationary value iteration.
    pub fn tail_residual(&self) -> f64 {
        self.tail_residual
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn value(&self, i: usize) -> f64 {
        i as f64 / self.steps as f64
    }

    /// Buy decision at usage `t`, value index `i`, budget level `k`.
    pub fn decide(&self, t: u64, i: usize, k: usize) -> bool {
        if i == 0 {
            return false;
        }
        let k = k.min(self.levels - 1);
        let row = match (t as usize).checked_sub(1).and_then(|r| self.rows.get(r)) {
            Some(row) => row,
            None => &self.stationary,
        };
        row[i * self.levels + k]
    }

    /// Expected future utility at usage 1 from value index `i`, full budget.
    pub fn initial_value(&self, i: usize) -> f64 {
        self.first_values[i * self.levels + self.levels - 1]
    }

    /// Budget level after buying at `value` for `price`, `None` if that
    /// would overdraw the budget. Off-unit amounts round down.
    pub fn next_level(&self, k: usize, value: f64, price: f64) -> Option<usize> {
        let gain = value - price;
        if self.unconstrained {
            return Some(0);
        }
        let tol = 1e-9;
        let budget = k as f64 * self.unit + gain;
        if budget < -tol * self.unit.max(1.0) {
            return None;
        }
        if self.unit == 0.0 {
            return Some(0);
        }
        let level = (budget / self.unit + tol).floor().max(0.0) as usize;
        Some(level.min(self.levels - 1))
    }
}

/// Default truncation horizon `10 / δ²`.
pub fn default_horizon(model: &RandomWalkModel) -> u64 {
    10 * (model.steps() as u64).pow(2)
}

/// Backward induction over (usage, value, remaining loss budget).
///
/// Usages from the point where the scheme's price becomes constant share a
/// stationary row, obtained by iterating the constant-price Bellman operator
/// `horizon` times from a zero terminal value. Earlier usages get their own
/// row. A buy requires the budget to stay nonnegative and the continuation
/// utility to be nonnegative.
pub fn solve_policy_backward(
    scheme: &PricingScheme,
    profile: &RiskProfile,
    model: &RandomWalkModel,
    horizon: u64,
) -> Result<BuyerPolicy> {
    Ok(BuyerPolicy::Table(Arc::new(solve_policy_table(
        scheme, profile, model, horizon,
    )?)))
}

/// [`solve_policy_backward`] without the policy wrapper.
pub fn solve_policy_table(
    scheme: &PricingScheme,
    profile: &RiskProfile,
    model: &RandomWalkModel,
    horizon: u64,
) -> Result<PolicyTable> {
    if horizon == 0 {
        return Err(domain("horizon", 0.0, ">= 1"));
    }
    scheme.validate()?;
    let n = model.steps() as usize;
    let delta = model.delta();
    let mut warnings = Vec::new();

    let cap = profile.loss_budget();
    let unconstrained = cap.is_infinite();
    let (unit, levels) = if unconstrained || cap == 0.0 {
        (0.0, 1)
    } else if cap < delta {
        (cap, 2)
    } else {
        let mut unit = delta;
        let mut k = (cap / unit + 1e-9).floor() as usize;
        if k + 1 > MAX_BUDGET_LEVELS {
            unit = cap / (MAX_BUDGET_LEVELS - 1) as f64;
            k = MAX_BUDGET_LEVELS - 1;
            warnings.push(format!(
                "loss budget {cap} discretised in steps of {unit:.3e}, coarser than the value step {delta}"
            ));
        }
        (unit, k + 1)
    };

    let mut table = PolicyTable {
        steps: n as u32,
        unconstrained,
        unit,
        levels,
        rows: Vec::new(),
        stationary: Vec::new(),
        first_values: Vec::new(),
        tail_residual: 0.0,
        warnings: Vec::new(),
    };
    if unit > 0.0 {
        let off_unit = |x: f64| ((x / unit) - (x / unit).round()).abs() > 1e-9;
        let t0 = scheme.constant_from();
        if (1..=t0).any(|t| off_unit(scheme.price_at(t))) || (1..=n).any(|i| off_unit(i as f64 * delta)) {
            warnings.push("prices not aligned with the budget step; budgets round down".into());
        }
    }

    let width = (n + 1) * levels;
    let bellman = |price: f64, next: &[f64], out: &mut [f64], buy: &mut [bool]| {
        for i in 1..=n {
            let v = i as f64 / n as f64;
            for k in 0..levels {
                let idx = i * levels + k;
                let Some(k2) = table.next_level(k, v, price) else {
                    out[idx] = 0.0;
                    buy[idx] = false;
                    continue;
                };
                let up = if i == n { n - 1 } else { i + 1 };
                let cont = 0.5 * (next[up * levels + k2] + next[(i - 1) * levels + k2]);
                let q = v - price + cont;
                let take = at_least(q, 0.0);
                out[idx] = if take { q.max(0.0) } else { 0.0 };
                buy[idx] = take;
            }
        }
    };

    let tail_price = scheme.price_at(scheme.constant_from());
    let mut j = vec![0.0; width];
    let mut j_next = vec![0.0; width];
    let mut stationary = vec![false; width];
    let mut residual = 0.0_f64;
    for _ in 0..horizon {
        bellman(tail_price, &j, &mut j_next, &mut stationary);
        residual = j_next.iter().zip(&j).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        std::mem::swap(&mut j, &mut j_next);
    }

    let t0 = scheme.constant_from() as usize;
    let mut rows = vec![Vec::new(); t0.saturating_sub(1)];
    for t in (1..t0).rev() {
        let mut buy = vec![false; width];
        bellman(scheme.price_at(t as u64), &j, &mut j_next, &mut buy);
        std::mem::swap(&mut j, &mut j_next);
        rows[t - 1] = buy;
    }
    if residual > 1e-6 * j.iter().fold(1.0_f64, |m, x| m.max(x.abs())) {
        warnings.push(format!("stationary value iteration not converged: residual {residual:.3e}"));
    }
    table.rows = rows;
    table.stationary = stationary;
    table.first_values = j;
    table.tail_residual = residual;
    table.warnings = warnings;
    Ok(table)
}

/// Buyer response to a constant per-usage price.
pub fn ppp_policy_constant(profile: &RiskProfile, price: f64, model: &ValueProcess) -> Result<BuyerPolicy> {
    if !(price >= 0.0) {
        return Err(domain("price", price, "[0, inf)"));
    }
    Ok(match model {
        ValueProcess::Binary(_) => BuyerPolicy::Myopic,
        _ if profile.is_infinitely_averse() => BuyerPolicy::Myopic,
        _ if profile.is_neutral() => BuyerPolicy::Threshold {
            stop_at_or_below: rn_threshold(price),
        },
        ValueProcess::Walk(w) => {
            solve_policy_backward(&PricingScheme::ConstantPpp { price }, profile, w, default_horizon(w))?
        }
        ValueProcess::Markov(_) => {
            return Err(Error::Unsupported(
                "finite risk aversion under the general Markov model".into(),
            ))
        }
    })
}

/// Response to a rent-to-own scheme whose total possible payment fits the
/// buyer's loss budget: buy at every nonzero value.
pub fn rent_to_own_response(profile: &RiskProfile, scheme: &PricingScheme, model: &ValueProcess) -> Result<BuyerPolicy> {
    let PricingScheme::RentToOwn { price, paid_rounds } = *scheme else {
        return Err(Error::InvalidParameter("rent_to_own_response needs a rent-to-own scheme".into()));
    };
    if price > 0.5 {
        return Err(Error::Unsupported(format!(
            "rent-to-own price {price} > 1/2: continuing is no longer utility-safe"
        )));
    }
    if matches!(model, ValueProcess::Binary(_)) {
        return Err(Error::Unsupported("rent-to-own under the binary model".into()));
    }
    let exposure = price * paid_rounds as f64;
    if exposure > profile.loss_budget() + price + 1e-12 {
        return Err(Error::Unsupported(format!(
            "rent-to-own exposure {exposure} exceeds the loss budget {}",
            profile.loss_budget()
        )));
    }
    Ok(BuyerPolicy::Threshold { stop_at_or_below: 0.0 })
}

/// Policy a buyer with `profile` follows under `scheme`.
pub fn policy_for(scheme: &PricingScheme, profile: &RiskProfile, model: &ValueProcess) -> Result<BuyerPolicy> {
    scheme.validate()?;
    let unsupported = |what: &str| Err(Error::Unsupported(what.to_string()));
    match (scheme, model) {
        (PricingScheme::BuyItNow { .. } | PricingScheme::FreeTrialBin { .. }, ValueProcess::Markov(_)) => {
            unsupported("one-off prices under the general Markov model")
        }
        (PricingScheme::BuyItNow { .. }, _) => Ok(BuyerPolicy::Commit {
            charge_at: 1,
            profile: *profile,
            model: model.clone(),
        }),
        (PricingScheme::FreeTrialBin { trial_length, .. }, _) => Ok(BuyerPolicy::Commit {
            charge_at: trial_length + 1,
            profile: *profile,
            model: model.clone(),
        }),
        (PricingScheme::ConstantPpp { price }, _) => ppp_policy_constant(profile, *price, model),
        (PricingScheme::FreeTrialPpp { post_price, .. }, ValueProcess::Walk(w))
            if !profile.is_neutral() && !profile.is_infinitely_averse() =>
        {
            solve_policy_backward(scheme, profile, w, default_horizon(w))
        }
        (PricingScheme::FreeTrialPpp { post_price, .. }, _) => ppp_policy_constant(profile, *post_price, model),
        (PricingScheme::RentToOwn { .. }, _) => rent_to_own_response(profile, scheme, model),
        (PricingScheme::PriceSequence { .. }, _) if profile.is_infinitely_averse() => Ok(BuyerPolicy::Myopic),
        (PricingScheme::PriceSequence { .. }, ValueProcess::Walk(w)) => {
            solve_policy_backward(scheme, profile, w, default_horizon(w))
        }
        (PricingScheme::PriceSequence { .. }, _) => unsupported("price sequences outside the random walk model"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{BinaryValueModel, MeanMap};

    fn walk(delta: f64) -> RandomWalkModel {
        RandomWalkModel::new(delta).unwrap()
    }

    fn table(policy: &BuyerPolicy) -> &PolicyTable {
        match policy {
            BuyerPolicy::Table(t) => t,
            other => panic!("expected a table, got {other:?}"),
        }
    }

    #[test]
    fn profile_budgets() {
        assert_eq!(RiskProfile::neutral().loss_budget(), f64::INFINITY);
        assert_eq!(RiskProfile::infinitely_averse().loss_budget(), 0.0);
        assert_eq!(RiskProfile::new(4.0).unwrap().loss_budget(), 0.25);
        assert!(RiskProfile::new(-1.0).is_err());
        assert!(RiskProfile::new(f64::NAN).is_err());
    }

    #[test]
    fn bin_accept_examples() {
        let m = ValueProcess::Walk(walk(0.1));
        assert!(bin_accept(&RiskProfile::neutral(), 0.5, 58.0, &m).unwrap());
        assert!(!bin_accept(&RiskProfile::neutral(), 0.5, 58.01, &m).unwrap());
        assert!(bin_accept(&RiskProfile::infinitely_averse(), 0.5, 1.4, &m).unwrap());
        assert!(bin_accept(&RiskProfile::infinitely_averse(), 0.5, 1.5, &m).unwrap());
        assert!(!bin_accept(&RiskProfile::infinitely_averse(), 0.5, 1.6, &m).unwrap());
        // budget 1: worst case 1.5 plus 1
        let one = RiskProfile::new(1.0).unwrap();
        assert!(bin_accept(&one, 0.5, 2.5, &m).unwrap());
        assert!(!bin_accept(&one, 0.5, 2.6, &m).unwrap());
    }

    #[test]
    fn tiny_alpha_matches_neutral() {
        let m = ValueProcess::Walk(walk(0.1));
        let tiny = RiskProfile::new(1e-9).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let (v, p) = (i as f64 / 9.0, j as f64 * 8.0);
                assert_eq!(
                    bin_accept(&tiny, v, p, &m).unwrap(),
                    bin_accept(&RiskProfile::neutral(), v, p, &m).unwrap()
                );
            }
        }
    }

    #[test]
    fn binary_worst_case_uses_support_minimum() {
        let geo = ValueProcess::Binary(BinaryValueModel::geometric(MeanMap::Constant(4.0)).unwrap());
        let averse = RiskProfile::infinitely_averse();
        assert!(bin_accept(&averse, 0.5, 0.5, &geo).unwrap());
        assert!(!bin_accept(&averse, 0.5, 0.6, &geo).unwrap());
        assert!(bin_accept(&RiskProfile::neutral(), 0.5, 2.0, &geo).unwrap());
    }

    #[test]
    fn constant_policy_examples() {
        let m = ValueProcess::Walk(walk(0.1));
        assert_eq!(
            ppp_policy_constant(&RiskProfile::neutral(), 0.5, &m).unwrap(),
            BuyerPolicy::Threshold { stop_at_or_below: 0.0 }
        );
        assert_eq!(
            ppp_policy_constant(&RiskProfile::neutral(), 0.75, &m).unwrap(),
            BuyerPolicy::Threshold { stop_at_or_below: 0.5 }
        );
        let myopic = ppp_policy_constant(&RiskProfile::infinitely_averse(), 0.3, &m).unwrap();
        assert_eq!(myopic, BuyerPolicy::Myopic);
        let mut s = myopic.start();
        let path = [0.5, 0.4, 0.2, 0.3];
        let bought = path.iter().take_while(|&&v| myopic.decide(&mut s, 1, v, 0.5, 0.3)).count();
        assert_eq!(bought, 2);
    }

    #[test]
    fn dp_neutral_half_price_buys_everywhere() {
        let w = walk(0.1);
        let p = solve_policy_backward(&PricingScheme::ConstantPpp { price: 0.5 }, &RiskProfile::neutral(), &w, default_horizon(&w)).unwrap();
        let t = table(&p);
        for i in 1..=10 {
            assert!(t.decide(1, i, 0), "value index {i}");
        }
        assert!(t.tail_residual() < 1e-6);
    }

    #[test]
    fn dp_neutral_matches_threshold() {
        let w = walk(0.1);
        let p = solve_policy_backward(&PricingScheme::ConstantPpp { price: 0.75 }, &RiskProfile::neutral(), &w, default_horizon(&w)).unwrap();
        let t = table(&p);
        for i in 1..=10 {
            assert_eq!(t.decide(1, i, 0), i > 5, "value index {i}");
        }
    }

    #[test]
    fn dp_infinitely_averse_is_myopic() {
        let w = walk(0.25);
        let schemes = [
            PricingScheme::ConstantPpp { price: 0.6 },
            PricingScheme::FreeTrialPpp { trial_length: 3, post_price: 0.4 },
            PricingScheme::PriceSequence { prices: vec![0.9, 0.1, 0.55], tail: 0.3 },
            PricingScheme::RentToOwn { price: 0.45, paid_rounds: 4 },
        ];
        for s in &schemes {
            let p = solve_policy_backward(s, &RiskProfile::infinitely_averse(), &w, 200).unwrap();
            let t = table(&p);
            for step in 1..=10u64 {
                for i in 1..=4 {
                    let v = i as f64 / 4.0;
                    assert_eq!(t.decide(step, i, 0), at_least(v, s.price_at(step)), "{s:?} t={step} i={i}");
                }
            }
        }
    }

    #[test]
    fn dp_value_matches_closed_form_utility() {
        use crate::analytics::rn_ppp_utility_exact;
        let w = walk(0.25);
        let t = solve_policy_table(&PricingScheme::ConstantPpp { price: 0.5 }, &RiskProfile::neutral(), &w, 10_000).unwrap();
        let p = WalkParams::<f64>::with_steps(4).unwrap();
        for i in 1..=4 {
            let v = i as f64 / 4.0;
            let closed = rn_ppp_utility_exact(v, 0.0, 0.5, &p).unwrap();
            assert!((t.initial_value(i) - closed).abs() < 1e-9, "{i}: {} vs {closed}", t.initial_value(i));
        }
    }

    #[test]
    fn stop_sets_nest_in_risk() {
        let w = walk(0.1);
        for price in [0.3, 0.5, 0.62, 0.8] {
            let s = PricingScheme::ConstantPpp { price };
            let neutral = solve_policy_table(&s, &RiskProfile::neutral(), &w, 1000).unwrap();
            let mid = solve_policy_table(&s, &RiskProfile::new(2.0).unwrap(), &w, 1000).unwrap();
            let averse = solve_policy_table(&s, &RiskProfile::infinitely_averse(), &w, 1000).unwrap();
            for i in 1..=10 {
                for k in 0..mid.budget_levels() {
                    if averse.decide(1, i, 0) {
                        assert!(mid.decide(1, i, k));
                    }
                    if mid.decide(1, i, k) {
                        assert!(neutral.decide(1, i, 0));
                    }
                }
            }
        }
    }

    #[test]
    fn budget_coarsening_warns() {
        let w = walk(0.1);
        let t = solve_policy_table(&PricingScheme::ConstantPpp { price: 0.5 }, &RiskProfile::new(1e-3).unwrap(), &w, 10).unwrap();
        assert_eq!(t.budget_levels(), MAX_BUDGET_LEVELS);
        assert!(!t.warnings().is_empty());
        assert!(solve_policy_backward(&PricingScheme::ConstantPpp { price: 0.5 }, &RiskProfile::neutral(), &w, 0).is_err());
    }

    #[test]
    fn rent_to_own_response_rules() {
        let m = ValueProcess::Walk(walk(0.1));
        let ok = PricingScheme::RentToOwn { price: 0.5, paid_rounds: 10 };
        assert_eq!(
            rent_to_own_response(&RiskProfile::new(0.2).unwrap(), &ok, &m).unwrap(),
            BuyerPolicy::Threshold { stop_at_or_below: 0.0 }
        );
        let steep = PricingScheme::RentToOwn { price: 0.6, paid_rounds: 10 };
        assert!(matches!(
            rent_to_own_response(&RiskProfile::new(0.01).unwrap(), &steep, &m),
            Err(Error::Unsupported(_))
        ));
        assert!(rent_to_own_response(&RiskProfile::new(10.0).unwrap(), &ok, &m).is_err());
    }

    #[test]
    fn commit_policy_decides_once() {
        let m = ValueProcess::Walk(walk(0.1));
        let p = policy_for(&PricingScheme::FreeTrialBin { trial_length: 3, bin_price: 25.0 }, &RiskProfile::neutral(), &m).unwrap();
        let mut s = p.start();
        assert!(p.decide(&mut s, 1, 0.1, 0.1, 0.0));
        assert!(p.decide(&mut s, 3, 0.1, 0.1, 0.0));
        assert!(!p.decide(&mut s, 4, 0.1, 0.1, 25.0));
        assert!(p.decide(&mut s, 4, 0.5, 0.1, 25.0));
        assert!(p.decide(&mut s, 9, 0.1, 0.1, 0.0));
    }
}
