//! Seeded Monte Carlo engine, the exact grid oracle and statistical checks.
//!
//! Replica `i` draws from a ChaCha8 generator seeded with the master seed
//! on stream `i`, and replicas are reduced in index order, so results are
//! bit-identical for a given seed regardless of thread count.

mod oracle;

pub use oracle::{dp_oracle, solve_tridiagonal, OracleQuery};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::{PathBoundStats, SampleMean, MIN_BOUND_SAMPLES, WalkParams};
use crate::distributions::ValueDistribution;
use crate::error::{domain, Error, Result};
use crate::process::{GeneralMarkovModel, RandomWalkModel, Step, ValueProcess, BOUNDARY_TOL};
use crate::schemes::{recommended_free_trial_bin, recommended_free_trial_ppp, PricingScheme};
use crate::strategy::{policy_for, BuyerPolicy, RiskProfile};

/// Smallest replica count [`estimate`] accepts.
pub const MIN_SAMPLES: u64 = 1000;

/// Capped fraction above which [`estimate`] warns about truncation.
pub const CAP_WARNING: f64 = 1e-2;

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;

const CHUNK: u64 = 4096;

/// Per-path outcome of one buyer under one scheme.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct OutcomeMetrics {
    pub revenue: f64,
    pub welfare: f64,
    pub utility: f64,
    pub stop_time: u64,
    pub post_trial_duration: u64,
    /// Lowest running `welfare - revenue` along the path, never above 0.
    pub min_running_utility: f64,
    pub capped: bool,
}

/// Follows one buyer: at each usage the policy sees the current value and
/// price; the first decline ends the relationship.
pub fn simulate_once<R: Rng + ?Sized>(
    scheme: &PricingScheme,
    policy: &BuyerPolicy,
    model: &ValueProcess,
    v0: f64,
    rng: &mut R,
    cap: u64,
) -> OutcomeMetrics {
    let mut path = model.start(v0, rng);
    let mut state = policy.start();
    let trial = scheme.trial_length();
    let mut m = OutcomeMetrics::default();
    let mut running = 0.0_f64;
    let mut t = 0;
    loop {
        if t == cap {
            m.capped = true;
            break;
        }
        t += 1;
        let Some(value) = path.next_value(rng) else { break };
        let price = scheme.price_at(t);
        if !policy.decide(&mut state, t, value, v0, price) {
            break;
        }
        let worth = value.min(1.0);
        m.revenue += price;
        m.welfare += worth;
        running += worth - price;
        m.min_running_utility = m.min_running_utility.min(running);
        m.stop_time += 1;
        if t > trial {
            m.post_trial_duration += 1;
        }
    }
    m.utility = m.welfare - m.revenue;
    m
}

/// Sample mean, standard error and 99% normal interval.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub std_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Stat {
    fn from_sums(sum: f64, sum_sq: f64, n: u64) -> Self {
        let s = SampleMean::from_sums(sum, sum_sq, n);
        Self {
            mean: s.mean,
            std_err: s.std_err,
            ci_low: s.mean - Z99 * s.std_err,
            ci_high: s.mean + Z99 * s.std_err,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }
}

/// Averages of [`OutcomeMetrics`] over replicas.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult {
    pub revenue: Stat,
    pub welfare: Stat,
    pub utility: Stat,
    pub stop_time: Stat,
    pub post_trial_duration: Stat,
    pub n_samples: u64,
    pub capped_fraction: f64,
    pub min_running_utility: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    sums: [f64; 5],
    squares: [f64; 5],
    capped: u64,
    min_running: f64,
}

impl Acc {
    fn add(&mut self, m: &OutcomeMetrics) {
        let xs = [
            m.revenue,
            m.welfare,
            m.utility,
            m.stop_time as f64,
            m.post_trial_duration as f64,
        ];
        for (i, x) in xs.into_iter().enumerate() {
            self.sums[i] += x;
            self.squares[i] += x * x;
        }
        self.capped += m.capped as u64;
        self.min_running = self.min_running.min(m.min_running_utility);
    }

    fn merge(mut self, other: &Acc) -> Acc {
        for i in 0..5 {
            self.sums[i] += other.sums[i];
            self.squares[i] += other.squares[i];
        }
        self.capped += other.capped;
        self.min_running = self.min_running.min(other.min_running);
        self
    }
}

/// Generator for replica `index` under `master_seed`.
pub fn replica_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Monte Carlo estimate of the outcome of `scheme` for buyers with
/// `profile` and initial values drawn from `f`.
pub fn estimate(
    scheme: &PricingScheme,
    profile: &RiskProfile,
    model: &ValueProcess,
    f: &ValueDistribution<f64>,
    n_samples: u64,
    master_seed: u64,
) -> Result<EstimateResult> {
    let policy = policy_for(scheme, profile, model)?;
    let mut result = estimate_with_policy(scheme, &policy, model, f, n_samples, master_seed)?;
    if let BuyerPolicy::Table(t) = &policy {
        result.warnings.extend(t.warnings().iter().cloned());
    }
    Ok(result)
}

/// [`estimate`] with an explicit policy.
pub fn estimate_with_policy(
    scheme: &PricingScheme,
    policy: &BuyerPolicy,
    model: &ValueProcess,
    f: &ValueDistribution<f64>,
    n_samples: u64,
    master_seed: u64,
) -> Result<EstimateResult> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::Precision {
            got: n_samples,
            need: MIN_SAMPLES,
        });
    }
    scheme.validate()?;
    let floor = match model {
        ValueProcess::Walk(w) => w.delta(),
        _ => 0.0,
    };
    let chunks = n_samples.div_ceil(CHUNK);
    let partials: Vec<Acc> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Acc::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n_samples) {
                let mut rng = replica_rng(master_seed, i);
                let v0 = f.sample(&mut rng);
                let cap = model.default_cap(v0.max(floor));
                acc.add(&simulate_once(scheme, policy, model, v0, &mut rng, cap));
            }
            acc
        })
        .collect();
    let total = partials.iter().fold(Acc::default(), |a, b| a.merge(b));
    let n = n_samples;
    let stat = |i: usize| Stat::from_sums(total.sums[i], total.squares[i], n);
    let capped_fraction = total.capped as f64 / n as f64;
    let mut warnings = Vec::new();
    if capped_fraction > CAP_WARNING {
        warnings.push(format!(
            "{:.2}% of paths hit the usage cap; means are truncated",
            100.0 * capped_fraction
        ));
    }
    Ok(EstimateResult {
        revenue: stat(0),
        welfare: stat(1),
        utility: stat(2),
        stop_time: stat(3),
        post_trial_duration: stat(4),
        n_samples: n,
        capped_fraction,
        min_running_utility: total.min_running,
        warnings,
    })
}

/// Empirical versus guaranteed value of one statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalBound {
    pub empirical: f64,
    pub std_err: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Tail of the absorption time: `P[h >= k E[h]] <= 2^-floor(k/2)`.
pub fn tail_probability_check<R: Rng + ?Sized>(
    v: f64,
    params: &WalkParams<f64>,
    k: u32,
    n_samples: u64,
    rng: &mut R,
) -> Result<EmpiricalBound> {
    if k < 2 {
        return Err(domain("k", k as f64, ">= 2"));
    }
    if n_samples == 0 {
        return Err(Error::Precision { got: 0, need: 1 });
    }
    let model = RandomWalkModel::with_steps(params.steps())?;
    let start = model.index_of(v)?;
    let mean = model.expected_lifetime(v);
    let limit = (k as f64 * mean).ceil() as u64;
    let mut hits = 0u64;
    for _ in 0..n_samples {
        let mut index = start;
        let mut steps = 0u64;
        while index > 0 && steps < limit {
            index = model.step_index(index, rng).unwrap_or(0);
            steps += 1;
        }
        if steps >= limit {
            hits += 1;
        }
    }
    let bound = 0.5_f64.powi((k / 2) as i32);
    let p = hits as f64 / n_samples as f64;
    let std_err = (p * (1.0 - p) / n_samples as f64).sqrt();
    Ok(EmpiricalBound {
        empirical: p,
        std_err,
        bound,
        pass: p <= bound + 3.0 * std_err,
    })
}

/// Which recommended free-trial scheme to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FreeTrialVariant {
    Ppp,
    Bin,
}

/// Revenue from a buyer of value `v` under the recommended free trial,
/// against its guaranteed floor. Off-grid values start the walk at a
/// neighbouring grid point with mean `v`. The per-usage variant faces an infinitely
/// risk-averse buyer, the one-off variant a risk-neutral one.
pub fn free_trial_bounds_check<R: Rng + ?Sized>(
    variant: FreeTrialVariant,
    v: f64,
    params: &WalkParams<f64>,
    n_samples: u64,
    rng: &mut R,
) -> Result<EmpiricalBound> {
    if n_samples < 2 {
        return Err(Error::Precision { got: n_samples, need: 2 });
    }
    if !(0.0..=1.0).contains(&v) {
        return Err(domain("v", v, "[0, 1]"));
    }
    let walk = RandomWalkModel::with_steps(params.steps())?;
    let model = ValueProcess::Walk(walk);
    let d2 = params.delta_sq();
    let (scheme, profile, bound) = match variant {
        FreeTrialVariant::Ppp => {
            let scheme = recommended_free_trial_ppp(params);
            let c = scheme.price_at(u64::MAX);
            let bound = c * ((1.0 - c).powi(2) - 2.0 / 3.0) * v / (2.0 * d2);
            (scheme, RiskProfile::infinitely_averse(), bound)
        }
        FreeTrialVariant::Bin => (
            recommended_free_trial_bin(params),
            RiskProfile::neutral(),
            (0.055 * v / 9.0) / (4.0 * d2),
        ),
    };
    let policy = policy_for(&scheme, &profile, &model)?;
    let cap = model.default_cap(v.max(walk_delta(&model)));
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..n_samples {
        let r = simulate_once(&scheme, &policy, &model, v, rng, cap).revenue;
        sum += r;
        sq += r * r;
    }
    let s = SampleMean::from_sums(sum, sq, n_samples);
    Ok(EmpiricalBound {
        empirical: s.mean,
        std_err: s.std_err,
        bound,
        pass: s.mean >= bound - 3.0 * s.std_err,
    })
}

fn walk_delta(model: &ValueProcess) -> f64 {
    model.as_walk().map_or(0.0, |w| w.delta())
}

#[derive(Debug, Clone, Copy, Default)]
struct BAcc {
    sums: [f64; 5],
    squares: [f64; 5],
    counts: [u64; 5],
}

impl BAcc {
    fn add(&mut self, i: usize, x: f64) {
        self.sums[i] += x;
        self.squares[i] += x * x;
        self.counts[i] += 1;
    }

    fn merge(mut self, o: &BAcc) -> BAcc {
        for i in 0..5 {
            self.sums[i] += o.sums[i];
            self.squares[i] += o.squares[i];
            self.counts[i] += o.counts[i];
        }
        self
    }

    fn stat(&self, i: usize) -> SampleMean {
        SampleMean::from_sums(self.sums[i], self.squares[i], self.counts[i])
    }
}

/// Path statistics of the general model from `v`, for the bound checks in
/// [`crate::analytics::path_bound_check`].
///
/// The exit time `τ` is the first step whose proposal leaves `(0, 1)`.
/// On paths leaving at the top, the post-reflection time counts steps from
/// the state after `τ` until the value is at most `x`.
pub fn path_bound_stats(model: &GeneralMarkovModel, v: f64, x: f64, n_samples: u64, master_seed: u64) -> Result<PathBoundStats> {
    if !(v > 0.0 && v < 1.0) {
        return Err(domain("v", v, "(0, 1)"));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1)"));
    }
    if n_samples < MIN_BOUND_SAMPLES {
        return Err(Error::Precision {
            got: n_samples,
            need: MIN_BOUND_SAMPLES,
        });
    }
    let cap = (1000.0 * model.expected_lifetime(v).max(1.0)).ceil() as u64;
    let chunks = n_samples.div_ceil(CHUNK);
    let partials: Vec<BAcc> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = BAcc::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n_samples) {
                let mut rng = replica_rng(master_seed, i);
                one_excursion(model, v, x, cap, &mut rng, &mut acc);
            }
            acc
        })
        .collect();
    let acc = partials.iter().fold(BAcc::default(), |a, b| a.merge(b));
    Ok(PathBoundStats {
        hit_one: acc.stat(0),
        exit_time: acc.stat(1),
        post_reflection_time: acc.stat(2),
        x,
        cumulative: acc.stat(3),
        exit_time_top: acc.stat(4),
    })
}

fn one_excursion<R: Rng + ?Sized>(model: &GeneralMarkovModel, v: f64, x: f64, cap: u64, rng: &mut R, acc: &mut BAcc) {
    let (mut prev, mut cur) = (v, v);
    let mut tau: Option<(u64, bool)> = None;
    let mut reflected_at: Option<u64> = None;
    let mut post_time: Option<u64> = None;
    let mut cumulative = 0.0;
    let mut t = 0u64;
    while t < cap {
        cumulative += cur.min(1.0);
        let inc = model.draw_increment(rng);
        let proposal = cur + inc;
        t += 1;
        let first_exit = tau.is_none() && (proposal >= 1.0 - BOUNDARY_TOL || proposal <= BOUNDARY_TOL);
        if first_exit {
            tau = Some((t, proposal >= 1.0 - BOUNDARY_TOL));
        }
        match model.apply(prev, cur, inc) {
            Step::Absorbed => {
                if reflected_at.is_some() && post_time.is_none() {
                    post_time = reflected_at.map(|s| t - s);
                }
                break;
            }
            Step::Value(next) => {
                prev = cur;
                cur = next;
            }
        }
        if first_exit && tau.is_some_and(|(_, top)| top) {
            reflected_at = Some(t);
        }
        if let Some(s) = reflected_at {
            if post_time.is_none() && cur <= x + BOUNDARY_TOL {
                post_time = Some(t - s);
            }
        }
    }
    let Some((tau, top)) = tau else { return };
    acc.add(0, top as u8 as f64);
    acc.add(1, tau as f64);
    acc.add(3, cumulative);
    if top {
        acc.add(4, tau as f64);
        if let Some(p) = post_time {
            acc.add(2, p as f64);
        }
    }
}
