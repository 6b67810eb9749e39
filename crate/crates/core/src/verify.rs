//! The acceptance suite: twelve numbered criteria, each a list of sub-checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::analytics::{
    absorption_time, path_bound_check, conditional_time_to_one, cumulative_value, cumulative_value_to,
    cumulative_value_to_exact, hit_prob, reflected_hit_time, two_sided_time, WalkParams,
};
use crate::distributions::ValueDistribution;
use crate::error::Result;
use crate::process::{BinaryValueModel, GeneralMarkovModel, MeanMap, RandomWalkModel, ValueProcess};
use crate::schemes::{
    bcm_dominating_price, closed_form_revenue, optimal_bin, optimal_constant_ppp, rent_to_own_params, PricingScheme,
};
use crate::sim::{
    path_bound_stats, dp_oracle, estimate, free_trial_bounds_check, replica_rng, tail_probability_check,
    EstimateResult, FreeTrialVariant, OracleQuery,
};
use crate::strategy::{default_horizon, solve_policy_table, RiskProfile};

/// Outcome of one sub-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Knobs for the suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Multiplies every Monte Carlo sample size; 1 runs the full sizes.
    pub mc_scale: f64,
    /// Slack for the asymmetric general-model bounds.
    pub slack_constant: f64,
    /// Slack for the symmetric general-model bounds.
    pub symmetric_slack: f64,
    pub grid: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            mc_scale: 1.0,
            slack_constant: 10.0,
            symmetric_slack: 1.0,
            grid: 1000,
        }
    }
}

impl VerifyOptions {
    fn n(&self, full: u64) -> u64 {
        ((full as f64 * self.mc_scale).round() as u64).max(10_000.min(full))
    }
}

struct Suite {
    criterion: u8,
    checks: Vec<Check>,
}

impl Suite {
    fn new(criterion: u8) -> Self {
        Self {
            criterion,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            criterion: self.criterion,
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn attempt<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, format!("error: {e}"));
                None
            }
        }
    }

    fn near(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        self.check(
            name,
            (got - want).abs() <= tol,
            format!("got {got:.9}, want {want:.9} ± {tol:e} (off by {:.3e})", (got - want).abs()),
        );
    }

    fn at_least(&mut self, name: &str, lhs: f64, rhs: f64) {
        self.check(name, lhs >= rhs, format!("{lhs:.6} >= {rhs:.6}"));
    }

    fn done(self) -> Vec<Check> {
        self.checks
    }
}

fn walk(delta: f64) -> ValueProcess {
    ValueProcess::Walk(RandomWalkModel::new(delta).expect("valid step"))
}

fn power2() -> ValueDistribution<f64> {
    ValueDistribution::power(2.0).expect("valid exponent")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn mc_relative(s: &mut Suite, name: &str, mc: &EstimateResult, closed: f64, tol: f64) {
    let r = rel(mc.revenue.mean, closed);
    s.check(
        name,
        r <= tol,
        format!(
            "MC {:.5} ± {:.5} vs closed form {closed:.5}: relative gap {r:.4} (limit {tol})",
            mc.revenue.mean, mc.revenue.std_err
        ),
    );
}

/// Uniform values, δ = 0.1: per-usage price 1/2 beats the best one-off price.
pub fn criterion_1(o: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(1);
    let (delta, m, f, neutral) = (0.1, walk(0.1), ValueDistribution::uniform(), RiskProfile::neutral());
    let d2 = delta * delta;
    let ppp = PricingScheme::ConstantPpp { price: 0.5 };
    let Some(ppp_cf) = s.attempt("ppp closed form", closed_form_revenue(&ppp, &f, &m, &neutral)) else {
        return s.done();
    };
    s.near("ppp closed form scaled = 1/3", d2 * ppp_cf, 1.0 / 3.0, 1e-8);
    let Some(bin) = s.attempt("optimal bin", optimal_bin(&f, &m, &neutral, o.grid)) else {
        return s.done();
    };
    s.near("optimal bin scaled = 5/16", d2 * bin.revenue, 5.0 / 16.0, 0.02);
    s.at_least("ppp beats bin", ppp_cf, bin.revenue);
    let n = o.n(1_000_000);
    if let Some(mc) = s.attempt("ppp mc", estimate(&ppp, &neutral, &m, &f, n, o.seed)) {
        mc_relative(&mut s, "ppp mc within 1%", &mc, ppp_cf, 0.01);
    }
    let bin_scheme = PricingScheme::BuyItNow { price: bin.price };
    if let Some(mc) = s.attempt("bin mc", estimate(&bin_scheme, &neutral, &m, &f, n, o.seed)) {
        mc_relative(&mut s, "bin mc within 1%", &mc, bin.revenue, 0.01);
    }
    s.done()
}

/// Quadratic values, δ = 0.1: the one-off price wins.
pub fn criterion_2(o: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(2);
    let (m, f, neutral) = (walk(0.1), power2(), RiskProfile::neutral());
    let d2 = 0.01;
    let ppp = PricingScheme::ConstantPpp { price: 0.5 };
    let Some(ppp_cf) = s.attempt("ppp closed form", closed_form_revenue(&ppp, &f, &m, &neutral)) else {
        return s.done();
    };
    s.near("ppp closed form scaled = 5/12", d2 * ppp_cf, 5.0 / 12.0, 1e-6);
    let Some(bin) = s.attempt("optimal bin", optimal_bin(&f, &m, &neutral, o.grid)) else {
        return s.done();
    };
    s.near("optimal bin scaled = 0.479", d2 * bin.revenue, 0.479, 0.02);
    s.at_least("bin beats ppp", bin.revenue, ppp_cf);
    s.done()
}

fn big(x: &BigRational) -> f64 {
    use crate::scalar::Scalar;
    x.as_f64()
}

struct Tally {
    name: &'static str,
    compared: usize,
    mismatched: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            compared: 0,
            mismatched: 0,
            worst: 0.0,
        }
    }

    fn add(&mut self, formula: Result<BigRational>, oracle: Result<BigRational>) {
        self.compared += 1;
        match (formula, oracle) {
            (Ok(a), Ok(b)) => {
                let err = big(&(a - b)).abs();
                self.worst = self.worst.max(err);
                if err > 1e-9 {
                    self.mismatched += 1;
                }
            }
            _ => {
                self.mismatched += 1;
                self.worst = f64::INFINITY;
            }
        }
    }
}

/// Every closed form against the exact grid oracle for δ ∈ {1/2, 1/4, 1/8}.
pub fn criterion_3(_: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(3);
    let mut tallies = [
        Tally::new("T(v)"),
        Tally::new("h_vu"),
        Tally::new("C(v)"),
        Tally::new("C(v,w)"),
        Tally::new("E[tau | hit 1]"),
        Tally::new("two-sided time"),
        Tally::new("hit probability"),
    ];
    let mut exact_worst = 0.0_f64;
    for n in [2u32, 4, 8] {
        let model = RandomWalkModel::with_steps(n).expect("valid grid");
        let p = WalkParams::<BigRational>::with_steps(n).expect("valid grid");
        let at = |i: u32| BigRational::new(BigInt::from(i), BigInt::from(n));
        let oracle = |q: OracleQuery<BigRational>| dp_oracle(&model, &q);
        for i in 0..=n {
            let v = at(i);
            tallies[0].add(absorption_time(v.clone(), &p), oracle(OracleQuery::HittingTime { v: v.clone(), target: at(0) }));
            tallies[2].add(cumulative_value(v.clone(), &p), oracle(OracleQuery::CumulativeValue { v: v.clone(), w: at(0) }));
            if 0 < i && i < n {
                tallies[4].add(conditional_time_to_one(v.clone(), &p), oracle(OracleQuery::ConditionalTimeToOne { v: v.clone() }));
            }
            for j in 0..i {
                let w = at(j);
                tallies[1].add(reflected_hit_time(v.clone(), w.clone(), &p), oracle(OracleQuery::HittingTime { v: v.clone(), target: w.clone() }));
                tallies[3].add(cumulative_value_to(v.clone(), w.clone(), &p), oracle(OracleQuery::CumulativeValue { v: v.clone(), w: w.clone() }));
                if let (Ok(a), Ok(b)) = (
                    cumulative_value_to_exact(v.clone(), w.clone(), &p),
                    oracle(OracleQuery::CumulativeValue { v: v.clone(), w: w.clone() }),
                ) {
                    exact_worst = exact_worst.max(big(&(a - b)).abs());
                }
            }
            for lo in 0..=i {
                for hi in i..=n {
                    if lo == hi {
                        continue;
                    }
                    let (l, h) = (at(lo), at(hi));
                    tallies[5].add(
                        two_sided_time(v.clone(), l.clone(), h.clone(), &p),
                        oracle(OracleQuery::TwoSidedTime { v: v.clone(), lo: l.clone(), hi: h.clone() }),
                    );
                    tallies[6].add(
                        hit_prob(v.clone(), l.clone(), h.clone()),
                        oracle(OracleQuery::AbsorptionProb { v: v.clone(), lo: l, hi: h }),
                    );
                }
            }
        }
    }
    for t in &tallies {
        let mut detail = format!("{} points, {} mismatched, worst error {:.3e}", t.compared, t.mismatched, t.worst);
        if t.name.starts_with("C(") {
            detail.push_str(&format!("; exact-recurrence form worst error {exact_worst:.3e}"));
        }
        s.check(format!("{} matches oracle", t.name), t.mismatched == 0, detail);
    }
    s.done()
}

/// A risk-neutral buyer facing price 1/2 never stops early, and collects at
/// least as much as he pays.
pub fn criterion_4(_: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(4);
    let model = RandomWalkModel::new(0.1).expect("valid step");
    let scheme = PricingScheme::ConstantPpp { price: 0.5 };
    if let Some(t) = s.attempt(
        "backward induction",
        solve_policy_table(&scheme, &RiskProfile::neutral(), &model, default_horizon(&model)),
    ) {
        let n = model.steps() as usize;
        let refused: Vec<usize> = (1..=n)
            .filter(|&i| !(0..t.budget_levels()).all(|k| t.decide(1, i, k) && t.decide(1000, i, k)))
            .collect();
        s.check(
            "buys at every nonzero value",
            refused.is_empty(),
            format!("refusing value indices: {refused:?}; tail residual {:.2e}", t.tail_residual()),
        );
    }
    let p = WalkParams::<BigRational>::with_steps(10).expect("valid grid");
    let half = BigRational::new(1.into(), 2.into());
    let bad: Vec<u32> = (0..=10)
        .filter(|&i| {
            let v = p.value_at(i);
            let t = absorption_time(v.clone(), &p).expect("on grid");
            let c = cumulative_value(v, &p).expect("on grid");
            half.clone() * t < half.clone() * c
        })
        .collect();
    s.check("half T(v) >= half C(v) on the grid", bad.is_empty(), format!("violations at indices {bad:?}"));
    s.done()
}

/// Binary model, geometric lifetimes with mean 10v: a per-usage price
/// dominates the optimal one-off price.
pub fn criterion_5(o: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(5);
    let binary = BinaryValueModel::geometric(MeanMap::Linear { intercept: 0.0, slope: 10.0 }).expect("valid model");
    let m = ValueProcess::Binary(binary.clone());
    let f = ValueDistribution::uniform();
    let (neutral, averse) = (RiskProfile::neutral(), RiskProfile::infinitely_averse());
    if let Some(r) = s.attempt("ppp at 2/3", closed_form_revenue(&PricingScheme::ConstantPpp { price: 2.0 / 3.0 }, &f, &m, &averse)) {
        s.near("ppp revenue at 2/3 = 50/27", r, 50.0 / 27.0, 1e-6);
    }
    if let Some(r) = s.attempt("bin at threshold 2/3", closed_form_revenue(&PricingScheme::BuyItNow { price: 40.0 / 9.0 }, &f, &m, &neutral)) {
        s.near("bin revenue = 40/27", r, 40.0 / 27.0, 1e-6);
    }
    let Some((price, report)) = s.attempt("dominating price", bcm_dominating_price(&f, &binary, o.grid)) else {
        return s.done();
    };
    s.check(
        "dominating price found",
        report.utility_dominates,
        format!("price {price:.4}, one-off threshold {:.4}", report.bin_threshold),
    );
    s.at_least("ppp revenue >= bin revenue", report.ppp.revenue, report.bin.revenue);
    s.at_least("ppp utility >= bin utility", report.ppp.utility, report.bin.utility);
    let n = o.n(100_000);
    let bin_mc = s.attempt("bin mc", estimate(&PricingScheme::BuyItNow { price: report.bin_price }, &neutral, &m, &f, n, o.seed));
    let ppp_mc = s.attempt("ppp mc", estimate(&PricingScheme::ConstantPpp { price }, &averse, &m, &f, n, o.seed ^ 0x5eed));
    if let (Some(b), Some(p)) = (bin_mc, ppp_mc) {
        for (name, x, y) in [
            ("revenue", p.revenue, b.revenue),
            ("welfare", p.welfare, b.welfare),
            ("utility", p.utility, b.utility),
        ] {
            let se = (x.std_err.powi(2) + y.std_err.powi(2)).sqrt();
            s.check(
                format!("mc ppp {name} >= bin {name}"),
                x.mean - y.mean >= -3.0 * se,
                format!("{:.5} vs {:.5} (3 SE = {:.5})", x.mean, y.mean, 3.0 * se),
            );
        }
    }
    s.done()
}

/// Against infinitely risk-averse buyers per-usage pricing earns a factor
/// of order 1/δ more than a one-off price.
pub fn criterion_6(o: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(6);
    let averse = RiskProfile::infinitely_averse();
    for (fname, f) in [("uniform", ValueDistribution::uniform()), ("power 2", power2())] {
        for delta in [0.1, 0.05] {
            let m = walk(delta);
            let ppp = s.attempt("optimal ppp", optimal_constant_ppp(&f, &m, &averse, o.grid));
            let bin = s.attempt("optimal bin", optimal_bin(&f, &m, &averse, o.grid));
            if let (Some(p), Some(b)) = (ppp, bin) {
                s.at_least(&format!("{fname}, delta {delta}: ppp >= bin/(4 delta)"), p.revenue, b.revenue / (4.0 * delta));
            }
        }
    }
    // A point mass at v gives at most v²/δ² per usage against v²/(2δ) up front.
    for delta in [0.1, 0.05] {
        let m = walk(delta);
        let f = ValueDistribution::point_mass(0.5).expect("valid atom");
        let ppp = s.attempt("point mass ppp", optimal_constant_ppp(&f, &m, &averse, o.grid));
        let bin = s.attempt("point mass bin", optimal_bin(&f, &m, &averse, o.grid));
        if let (Some(p), Some(b)) = (ppp, bin) {
            let ratio = p.revenue / b.revenue;
            s.check(
                format!("point mass 0.5, delta {delta}: ratio <= 2/delta"),
                ratio <= 2.0 / delta,
                format!("ratio {ratio:.4}, limit {:.4}", 2.0 / delta),
            );
        }
    }
    s.done()
}

/// Half the monopoly price per usage, sold to infinitely averse buyers,
/// earns at least a μ/10 share of the risk-neutral one-off optimum.
pub fn criterion_7(o: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(7);
    let (m, f) = (walk(0.1), ValueDistribution::uniform());
    let mu = f.monopoly_price();
    let ppp = s.attempt(
        "ppp at mu/2",
        closed_form_revenue(&PricingScheme::ConstantPpp { price: mu / 2.0 }, &f, &m, &RiskProfile::infinitely_averse()),
    );
    let bin = s.attempt("optimal bin", optimal_bin(&f, &m, &RiskProfile::neutral(), o.grid));
    if let (Some(p), Some(b)) = (ppp, bin) {
        s.at_least("ppp(mu/2) >= (mu/10) bin", p, mu / 10.0 * b.revenue);
    }
    s.done()
}

/// The recommended free trials earn their guaranteed floors per buyer value.
pub fn criterion_8(o: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(8);
    let params = WalkParams::<f64>::from_delta(0.1).expect("valid step");
    let n = o.n(100_000);
    for (k, variant) in [FreeTrialVariant::Ppp, FreeTrialVariant::Bin].into_iter().enumerate() {
        for (j, v) in [0.25, 0.5, 0.75, 1.0].into_iter().enumerate() {
            let mut rng = replica_rng(o.seed, (k * 4 + j) as u64);
            if let Some(b) = s.attempt("free trial", free_trial_bounds_check(variant, v, &params, n, &mut rng)) {
                s.check(
                    format!("{variant:?} trial, v = {v}"),
                    b.pass,
                    format!("revenue {:.4} ± {:.4}, floor {:.4}", b.empirical, b.std_err, b.bound),
                );
            }
        }
    }
    s.done()
}

/// Absorption-time tails decay geometrically.
pub fn criterion_9(o: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(9);
    let params = WalkParams::<f64>::from_delta(0.1).expect("valid step");
    let n = o.n(100_000);
    for k in [2u32, 4, 6] {
        let mut rng = replica_rng(o.seed, k as u64);
        if let Some(b) = s.attempt("tail", tail_probability_check(0.5, &params, k, n, &mut rng)) {
            s.check(
                format!("k = {k}"),
                b.pass,
                format!("P = {:.5} ± {:.5}, bound {:.4}", b.empirical, b.std_err, b.bound),
            );
        }
    }
    s.done()
}

/// Rent-to-own recovers a constant share of the optimal one-off revenue and
/// never costs a buyer more than his loss budget.
pub fn criterion_10(o: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(10);
    let delta = 0.1;
    let (m, f) = (walk(delta), ValueDistribution::uniform());
    let params = WalkParams::<f64>::from_delta(delta).expect("valid step");
    let n = o.n(100_000);
    for alpha in [0.01, 1.0, 100.0] {
        let profile = RiskProfile::new(alpha).expect("valid alpha");
        let Some(bin) = s.attempt("optimal bin", optimal_bin(&f, &m, &profile, o.grid)) else { continue };
        let v_star = bin.threshold.unwrap_or(0.0);
        let Some(rto) = s.attempt("rent-to-own parameters", rent_to_own_params(alpha, v_star, &params)) else { continue };
        let Some(mc) = s.attempt("rent-to-own mc", estimate(&rto, &profile, &m, &f, n, o.seed)) else { continue };
        let floor = bin.revenue / (32.0 * (1.0 + delta.sqrt()));
        s.check(
            format!("alpha {alpha}: revenue share"),
            mc.revenue.mean >= floor,
            format!(
                "rent-to-own {:.5} ± {:.5} ({rto:?}) vs bin {:.4} / (32(1+sqrt delta)) = {floor:.5}",
                mc.revenue.mean, mc.revenue.std_err, bin.revenue
            ),
        );
        s.check(
            format!("alpha {alpha}: loss within budget"),
            -mc.min_running_utility <= 1.0 / alpha + 1e-9,
            format!("worst loss {:.5}, budget {:.5}", -mc.min_running_utility, 1.0 / alpha),
        );
    }
    s.done()
}

/// Path statistics of the general martingale model against their bounds.
pub fn criterion_11(o: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(11);
    let n = o.n(1_000_000);
    let (v, x) = (0.5, 0.0);
    let cases = [
        ("skewed", GeneralMarkovModel::skewed(0.05), o.slack_constant),
        ("symmetric", GeneralMarkovModel::symmetric(0.05), o.symmetric_slack),
    ];
    for (k, (name, model, slack)) in cases.into_iter().enumerate() {
        let Some(model) = s.attempt("model", model) else { continue };
        let Some(stats) = s.attempt("path statistics", path_bound_stats(&model, v, x, n, o.seed.wrapping_add(k as u64))) else {
            continue;
        };
        let Some(checks) = s.attempt(
            "bounds",
            path_bound_check(v, model.epsilon(), model.delta_sq(), model.c3(), &stats, slack),
        ) else {
            continue;
        };
        for c in checks {
            s.check(
                format!("{name}: {}", c.quantity_name),
                c.passed(),
                format!("measured {:.5} in [{:.5}, {:.5}] (slack {slack})", c.measured, c.lower, c.upper),
            );
        }
    }
    s.done()
}

/// `δ²` times the risk-neutral revenue of price 1/2 does not depend on δ.
pub fn criterion_12(o: &VerifyOptions) -> Vec<Check> {
    let mut s = Suite::new(12);
    let (f, neutral) = (ValueDistribution::uniform(), RiskProfile::neutral());
    let scheme = PricingScheme::ConstantPpp { price: 0.5 };
    let n = o.n(1_000_000);
    let mut scaled = Vec::new();
    for delta in [0.5, 0.25, 0.1] {
        let m = walk(delta);
        let Some(cf) = s.attempt("closed form", closed_form_revenue(&scheme, &f, &m, &neutral)) else { continue };
        scaled.push(cf * delta * delta);
        let mut outcome = None;
        for attempt in 0..2u64 {
            let Some(mc) = s.attempt("mc", estimate(&scheme, &neutral, &m, &f, n, o.seed.wrapping_add(attempt))) else {
                break;
            };
            let inside = mc.revenue.contains(cf);
            outcome = Some((inside, mc, attempt));
            if inside {
                break;
            }
        }
        if let Some((inside, mc, attempt)) = outcome {
            s.check(
                format!("delta {delta}: closed form inside MC 99% interval"),
                inside,
                format!(
                    "closed form {cf:.5}, MC {:.5} ± {:.5} [{:.5}, {:.5}] after {} run(s)",
                    mc.revenue.mean,
                    mc.revenue.std_err,
                    mc.revenue.ci_low,
                    mc.revenue.ci_high,
                    attempt + 1
                ),
            );
        }
    }
    let spread = scaled.iter().fold(0.0_f64, |m, x| m.max((x - scaled[0]).abs()));
    s.check(
        "scaled closed form identical across delta",
        scaled.len() == 3 && spread <= 1e-9,
        format!("values {scaled:?}, spread {spread:.3e}"),
    );
    s.done()
}

/// Runs criterion `k` (1 to 12).
pub fn criterion(k: u8, o: &VerifyOptions) -> Option<Vec<Check>> {
    let f: fn(&VerifyOptions) -> Vec<Check> = match k {
        1 => criterion_1,
        2 => criterion_2,
        3 => criterion_3,
        4 => criterion_4,
        5 => criterion_5,
        6 => criterion_6,
        7 => criterion_7,
        8 => criterion_8,
        9 => criterion_9,
        10 => criterion_10,
        11 => criterion_11,
        12 => criterion_12,
        _ => return None,
    };
    Some(f(o))
}

/// Every criterion in order.
pub fn run_all(o: &VerifyOptions) -> Vec<Check> {
    (1..=12).flat_map(|k| criterion(k, o).unwrap_or_default()).collect()
}

/// One summary line for a criterion's checks.
pub fn summary_line(k: u8, checks: &[Check]) -> String {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    if failed.is_empty() {
        format!("criterion {k:>2}: PASS ({} checks)", checks.len())
    } else {
        let names: Vec<String> = failed.iter().map(|c| format!("{} [{}]", c.name, c.detail)).collect();
        format!("criterion {k:>2}: FAIL ({}/{} failed: {})", failed.len(), checks.len(), names.join("; "))
    }
}
