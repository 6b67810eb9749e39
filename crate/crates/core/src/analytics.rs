//! Closed forms for the reflected random walk and bound predicates for the
//! general martingale model.
//!
//! All walk formulas are polynomial in `v`, so they are generic over
//! [`Scalar`] and evaluate exactly on rationals. Off-grid arguments are
//! accepted; only the oracle comparisons require grid points.

use crate::error::{domain, Error, Result};
use crate::process::{BinaryValueModel, RandomWalkModel};
use crate::scalar::Scalar;

/// Step size of the walk, kept as `1 / steps` so rationals stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkParams<S> {
    steps: u32,
    delta: S,
    delta_sq: S,
}

impl<S: Scalar> WalkParams<S> {
    pub fn with_steps(steps: u32) -> Result<Self> {
        RandomWalkModel::with_steps(steps)?;
        let delta = S::from_ratio(1, steps as i64);
        Ok(Self {
            steps,
            delta_sq: delta.clone() * delta.clone(),
            delta,
        })
    }

    pub fn from_delta(delta: f64) -> Result<Self> {
        Self::with_steps(RandomWalkModel::new(delta)?.steps())
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn delta(&self) -> S {
        self.delta.clone()
    }

    pub fn delta_sq(&self) -> S {
        self.delta_sq.clone()
    }

    pub fn value_at(&self, index: u32) -> S {
        S::from_ratio(index as i64, self.steps as i64)
    }

    /// `0, δ, ..., 1`.
    pub fn grid(&self) -> impl Iterator<Item = S> + '_ {
        (0..=self.steps).map(|i| self.value_at(i))
    }
}

fn ordered<S: Scalar>(what: &'static str, lo: &S, hi: &S) -> Result<()> {
    if lo <= hi {
        Ok(())
    } else {
        Err(domain(what, lo.as_f64() - hi.as_f64(), "<= 0"))
    }
}

fn unit<S: Scalar>(what: &'static str, v: &S) -> Result<()> {
    if *v >= S::zero() && *v <= S::one() {
        Ok(())
    } else {
        Err(domain(what, v.as_f64(), "[0, 1]"))
    }
}

/// Probability that the unreflected walk from `v` reaches `u` before `w`.
pub fn hit_prob<S: Scalar>(v: S, w: S, u: S) -> Result<S> {
    ordered("w - v", &w, &v)?;
    ordered("v - u", &v, &u)?;
    if w == u {
        return Err(domain("u - w", 0.0, "> 0"));
    }
    Ok((v - w.clone()) / (u - w))
}

/// Expected time for the walk from `v` to exit `(w, u)`.
pub fn two_sided_time<S: Scalar>(v: S, w: S, u: S, params: &WalkParams<S>) -> Result<S> {
    ordered("w - v", &w, &v)?;
    ordered("v - u", &v, &u)?;
    Ok((v.clone() - w) * (u - v) / params.delta_sq())
}

/// `h_vu = (v - u)(2 - v - u) / δ²`: expected time for the reflected walk
/// from `v` to first reach `u <= v`.
pub fn reflected_hit_time<S: Scalar>(v: S, u: S, params: &WalkParams<S>) -> Result<S> {
    unit("v", &v)?;
    unit("u", &u)?;
    ordered("u - v", &u, &v)?;
    let two = S::from_int(2);
    Ok((v.clone() - u.clone()) * (two - v - u) / params.delta_sq())
}

/// `T(v) = v (2 - v) / δ²`, the expected number of usages before absorption.
pub fn absorption_time<S: Scalar>(v: S, params: &WalkParams<S>) -> Result<S> {
    reflected_hit_time(v, S::zero(), params)
}

/// `E[τ | V_τ = 1] = (1 - v²) / (3δ²)` where `τ` is the exit time of `(0, 1)`.
pub fn conditional_time_to_one<S: Scalar>(v: S, params: &WalkParams<S>) -> Result<S> {
    if !(v > S::zero() && v < S::one()) {
        return Err(domain("v", v.as_f64(), "(0, 1)"));
    }
    Ok((S::one() - v.clone() * v) / (S::from_int(3) * params.delta_sq()))
}

/// Published expected value collected from `v` until the value first
/// reaches `w`: `(v - w)/δ² · (v(1-v) + (1-w)(1-δ) + δ²)`.
///
/// Agrees with the walk's true expectation only when `v - w <= δ` or
/// `δ = 1/2`; see [`cumulative_value_to_exact`].
pub fn cumulative_value_to<S: Scalar>(v: S, w: S, params: &WalkParams<S>) -> Result<S> {
    unit("v", &v)?;
    unit("w", &w)?;
    ordered("w - v", &w, &v)?;
    let one = S::one();
    let d = params.delta();
    let inner = v.clone() * (one.clone() - v.clone())
        + (one.clone() - w.clone()) * (one - d.clone())
        + params.delta_sq();
    Ok((v - w) / params.delta_sq() * inner)
}

/// `C(v) = v²(1-v)/δ² + v(1-δ+δ²)/δ²`, the published cumulative value.
pub fn cumulative_value<S: Scalar>(v: S, params: &WalkParams<S>) -> Result<S> {
    cumulative_value_to(v, S::zero(), params)
}

/// True expected value collected by the reflected walk from `v` until it
/// first reaches `w`: `(v - w)(3 + δ² - v² - vw - w²) / (3δ²)`.
pub fn cumulative_value_to_exact<S: Scalar>(v: S, w: S, params: &WalkParams<S>) -> Result<S> {
    unit("v", &v)?;
    unit("w", &w)?;
    ordered("w - v", &w, &v)?;
    let inner = S::from_int(3) + params.delta_sq()
        - v.clone() * v.clone()
        - v.clone() * w.clone()
        - w.clone() * w.clone();
    Ok((v - w) * inner / (S::from_int(3) * params.delta_sq()))
}

/// `v (3 + δ² - v²) / (3δ²)`.
pub fn cumulative_value_exact<S: Scalar>(v: S, params: &WalkParams<S>) -> Result<S> {
    cumulative_value_to_exact(v, S::zero(), params)
}

/// Risk-neutral expected future utility of buying at constant price `p`
/// until the value first reaches `w`:
/// `((v-w)/δ²)(1 - δ - w(1-δ-p) + v(1-v) - p(2-v) + δ²)`.
pub fn rn_ppp_utility<S: Scalar>(v: S, w: S, p: S, params: &WalkParams<S>) -> Result<S> {
    if p < S::zero() {
        return Err(domain("p", p.as_f64(), "[0, inf)"));
    }
    let c = cumulative_value_to(v.clone(), w.clone(), params)?;
    Ok(c - p * reflected_hit_time(v, w, params)?)
}

/// Same quantity built on [`cumulative_value_to_exact`].
pub fn rn_ppp_utility_exact<S: Scalar>(v: S, w: S, p: S, params: &WalkParams<S>) -> Result<S> {
    if p < S::zero() {
        return Err(domain("p", p.as_f64(), "[0, inf)"));
    }
    let c = cumulative_value_to_exact(v.clone(), w.clone(), params)?;
    Ok(c - p * reflected_hit_time(v, w, params)?)
}

/// Stopping value `max(0, 2p - 1)` of a risk-neutral buyer facing constant
/// price `p`: he buys while his value is above it.
pub fn rn_threshold<S: Scalar>(p: S) -> S {
    (S::from_int(2) * p - S::one()).max_of(S::zero())
}

/// Value collected when the walk only ever steps down from `v`:
/// `v + (v-δ) + ...` over the positive terms. On the grid this is
/// `v(v+δ)/(2δ)`.
pub fn worst_case_cumulative<S: Scalar>(v: S, params: &WalkParams<S>) -> Result<S> {
    unit("v", &v)?;
    let d = params.delta();
    // smallest k with k δ >= v
    let mut k = (v.as_f64() * params.steps as f64).ceil().max(0.0) as i64;
    while k > 0 && S::from_int(k - 1) * d.clone() >= v {
        k -= 1;
    }
    while S::from_int(k) * d.clone() < v {
        k += 1;
    }
    let k_s = S::from_int(k);
    Ok(k_s.clone() * v - d * k_s * S::from_int(k - 1) / S::from_int(2))
}

/// `v² / (2δ)`, the triangle-area approximation of
/// [`worst_case_cumulative`]; it undershoots by `v/2` on the grid.
pub fn worst_case_cumulative_approx<S: Scalar>(v: S, params: &WalkParams<S>) -> S {
    v.clone() * v / (S::from_int(2) * params.delta())
}

/// `v · E[T | V0 = v]`.
pub fn binary_cumulative(v: f64, model: &BinaryValueModel) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) {
        return Err(domain("v", v, "[0, 1]"));
    }
    Ok(v * model.expected_stop(v))
}

/// Minimum sample count for an empirical statistic fed to [`path_bound_check`].
pub const MIN_BOUND_SAMPLES: u64 = 10_000;

/// One bound predicate: passes iff `lower <= measured <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub quantity_name: String,
    pub measured: f64,
    pub lower: f64,
    pub upper: f64,
    pub slack_constant: f64,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.measured >= self.lower && self.measured <= self.upper
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SampleMean {
    pub mean: f64,
    pub std_err: f64,
    pub n: u64,
}

impl SampleMean {
    pub fn from_sums(sum: f64, sum_sq: f64, n: u64) -> Self {
        if n == 0 {
            return Self::default();
        }
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 {
            ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
        } else {
            0.0
        };
        Self {
            mean,
            std_err: (var / nf).sqrt(),
            n,
        }
    }
}

/// Empirical statistics of the general model started at a fixed `v`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PathBoundStats {
    /// Indicator that the path reaches `>= 1` before `<= 0`.
    pub hit_one: SampleMean,
    /// Exit time `τ` of `(0, 1)`.
    pub exit_time: SampleMean,
    /// Time from the state after `τ` down to `<= x`, on paths exiting at the top.
    pub post_reflection_time: SampleMean,
    /// Level `x` used for [`post_reflection_time`](Self::post_reflection_time).
    pub x: f64,
    /// Sum of per-usage values until absorption.
    pub cumulative: SampleMean,
    /// `τ` on paths exiting at the top.
    pub exit_time_top: SampleMean,
}

/// Bound predicates for the general model at initial value `v`, each
/// widened by `slack_constant · ε` and three standard errors.
pub fn path_bound_check(
    v: f64,
    epsilon: f64,
    delta_sq: f64,
    c3: f64,
    stats: &PathBoundStats,
    slack_constant: f64,
) -> Result<Vec<BoundCheck>> {
    if !(v > 0.0 && v < 1.0) {
        return Err(domain("v", v, "(0, 1)"));
    }
    for s in [
        &stats.hit_one,
        &stats.exit_time,
        &stats.post_reflection_time,
        &stats.cumulative,
        &stats.exit_time_top,
    ] {
        if s.n < MIN_BOUND_SAMPLES {
            return Err(Error::Precision {
                got: s.n,
                need: MIN_BOUND_SAMPLES,
            });
        }
    }
    let slack = slack_constant * epsilon;
    let check = |name: &str, m: &SampleMean, lo: f64, hi: f64| BoundCheck {
        quantity_name: name.to_string(),
        measured: m.mean,
        lower: lo - 3.0 * m.std_err,
        upper: hi + 3.0 * m.std_err,
        slack_constant,
    };
    let x = stats.x;
    let fifth = (1.0 - v * v - c3 * (1.0 - v)) / (3.0 * delta_sq);
    Ok(vec![
        check("hit_one_before_zero", &stats.hit_one, v - slack, v + slack),
        check(
            "exit_time",
            &stats.exit_time,
            (v * (1.0 - v) - slack) / delta_sq,
            (v * (1.0 - v) + slack) / delta_sq,
        ),
        check(
            "post_reflection_hit_time",
            &stats.post_reflection_time,
            ((1.0 - x).powi(2) - slack) / delta_sq,
            ((1.0 - x).powi(2) + slack) / delta_sq,
        ),
        check(
            "cumulative_value",
            &stats.cumulative,
            (v - slack) / delta_sq,
            1.25 * (v + slack) / delta_sq,
        ),
        check(
            "exit_time_given_top",
            &stats.exit_time_top,
            fifth * (1.0 - slack),
            fifth * (1.0 + slack),
        ),
    ])
}
