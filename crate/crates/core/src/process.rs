//! Value-evolution processes and trajectory sampling.
//!
//! A path emits the per-usage values `V0, V1, ...` until the value is
//! absorbed at zero. A value of exactly zero is never emitted: it gives no
//! purchase opportunity.

use rand::Rng;

use crate::analytics::WalkParams;
use crate::error::{domain, Error, Result};
use crate::scalar::{grid_index, Scalar};

/// Multiplier on the expected lifetime used as the default trajectory cap.
pub const DEFAULT_CAP_FACTOR: f64 = 50.0;

/// Distance from 0 or 1 treated as touching the boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Outcome of one transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Value(f64),
    Absorbed,
}

/// Symmetric `±δ` walk on `{0, δ, ..., 1}`, absorbed at 0, reflected at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomWalkModel {
    steps: u32,
}

impl RandomWalkModel {
    /// `delta` must lie in `(0, 0.5]` and divide 1.
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 0.5) {
            return Err(domain("delta", delta, "(0, 0.5]"));
        }
        let n = (1.0 / delta).round();
        if ((1.0 / delta) - n).abs() > 1e-9 * n {
            return Err(Error::InvalidParameter(format!("delta = {delta} does not divide 1")));
        }
        Self::with_steps(n as u32)
    }

    /// Walk with `delta = 1 / steps`.
    pub fn with_steps(steps: u32) -> Result<Self> {
        if steps < 2 {
            return Err(domain("1/delta", steps as f64, "integers >= 2"));
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.steps as f64
    }

    pub fn params<S: Scalar>(&self) -> WalkParams<S> {
        WalkParams::with_steps(self.steps).expect("validated at construction")
    }

    pub fn value_at(&self, index: u32) -> f64 {
        index as f64 / self.steps as f64
    }

    pub fn index_of(&self, value: f64) -> Result<u32> {
        grid_index(&value, self.steps).ok_or(Error::OffGrid {
            value,
            delta: self.delta(),
        })
    }

    /// One step from an on-grid value.
    pub fn step_walk<R: Rng + ?Sized>(&self, value: f64, rng: &mut R) -> Result<Step> {
        let i = self.index_of(value)?;
        Ok(match self.step_index(i, rng) {
            Some(j) => Step::Value(self.value_at(j)),
            None => Step::Absorbed,
        })
    }

    /// Index form of [`step_walk`](Self::step_walk); `None` once absorbed.
    #[inline]
    pub fn step_index<R: Rng + ?Sized>(&self, index: u32, rng: &mut R) -> Option<u32> {
        match index {
            0 => None,
            i if i == self.steps => Some(i - 1),
            i => Some(if rng.gen::<bool>() { i + 1 } else { i - 1 }),
        }
    }

    /// Places an initial value on the grid. On-grid values are kept; others
    /// round to a neighbour with probabilities preserving the mean.
    pub fn snap<R: Rng + ?Sized>(&self, v0: f64, rng: &mut R) -> u32 {
        if let Ok(i) = self.index_of(v0) {
            return i;
        }
        let scaled = v0.clamp(0.0, 1.0) * self.steps as f64;
        let lo = scaled.floor();
        let up = rng.gen::<f64>() < scaled - lo;
        (lo as u32 + up as u32).min(self.steps)
    }

    /// `E[time to absorption | V0 = v]`.
    pub fn expected_lifetime(&self, v: f64) -> f64 {
        v * (2.0 - v) * (self.steps as f64).powi(2)
    }
}

/// Nondecreasing map `v -> E[T | V0 = v]` for the binary model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanMap {
    Constant(f64),
    /// `intercept + slope * v`.
    Linear { intercept: f64, slope: f64 },
}

impl MeanMap {
    pub fn at(&self, v: f64) -> f64 {
        match *self {
            MeanMap::Constant(m) => m,
            MeanMap::Linear { intercept, slope } => intercept + slope * v,
        }
    }
}

/// Conditional law of the stopping time `T` given `V0`.
#[derive(Debug, Clone, PartialEq)]
pub enum StopLaw {
    /// `T = m(v)`; a fractional part is realised as a Bernoulli extra usage.
    Deterministic,
    /// Memoryless with mean `m(v)`: the first usage happens with probability
    /// `min(1, m)`, each later one with probability `1 - 1/m` (zero if `m < 1`).
    Geometric,
    /// `T` drawn from a fixed table, independent of `V0`.
    Table { support: Vec<u64>, weights: Vec<f64> },
}

/// Value stays at `V0` for `T` usages, then drops to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryValueModel {
    stop: StopLaw,
    mean: MeanMap,
}

impl BinaryValueModel {
    pub fn new(stop: StopLaw, mean: MeanMap) -> Result<Self> {
        if let StopLaw::Table { support, weights } = &stop {
            if support.is_empty() || support.len() != weights.len() {
                return Err(Error::InvalidParameter("stop table needs matching support and weights".into()));
            }
            if weights.iter().any(|&w| !(w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter("stop table weights must be a probability vector".into()));
            }
        }
        let model = Self { stop, mean };
        let mut prev = -1.0;
        for i in 0..=100 {
            let m = model.expected_stop(i as f64 / 100.0);
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidParameter(format!("E[T|v] = {m} must be finite and >= 0")));
            }
            if m < prev - 1e-12 {
                return Err(Error::InvalidParameter("E[T|v] must be nondecreasing in v".into()));
            }
            prev = m;
        }
        Ok(model)
    }

    pub fn deterministic(mean: MeanMap) -> Result<Self> {
        Self::new(StopLaw::Deterministic, mean)
    }

    pub fn geometric(mean: MeanMap) -> Result<Self> {
        Self::new(StopLaw::Geometric, mean)
    }

    pub fn stop_law(&self) -> &StopLaw {
        &self.stop
    }

    pub fn mean_map(&self) -> MeanMap {
        self.mean
    }

    pub fn expected_stop(&self, v: f64) -> f64 {
        match &self.stop {
            StopLaw::Table { support, weights } => {
                support.iter().zip(weights).map(|(&s, &w)| s as f64 * w).sum()
            }
            _ => self.mean.at(v).max(0.0),
        }
    }

    /// Smallest `T` with positive probability given `V0 = v`.
    pub fn min_stop(&self, v: f64) -> u64 {
        let m = self.expected_stop(v);
        match &self.stop {
            StopLaw::Deterministic => m.floor() as u64,
            StopLaw::Geometric => u64::from(m >= 1.0),
            StopLaw::Table { support, weights } => support
                .iter()
                .zip(weights)
                .filter(|(_, &w)| w > 0.0)
                .map(|(&s, _)| s)
                .min()
                .unwrap_or(0),
        }
    }

    pub fn start<R: Rng + ?Sized>(&self, v0: f64, rng: &mut R) -> BinaryState {
        let m = self.expected_stop(v0);
        let remaining = if v0 <= 0.0 {
            Remaining::Fixed(0)
        } else {
            match &self.stop {
                StopLaw::Deterministic => {
                    let extra = rng.gen::<f64>() < m - m.floor();
                    Remaining::Fixed(m.floor() as u64 + extra as u64)
                }
                StopLaw::Geometric => Remaining::Geometric { mean: m },
                StopLaw::Table { support, weights } => {
                    let u: f64 = rng.gen();
                    let mut acc = 0.0;
                    let mut t = *support.last().expect("non-empty");
                    for (&s, &w) in support.iter().zip(weights) {
                        acc += w;
                        if u < acc {
                            t = s;
                            break;
                        }
                    }
                    Remaining::Fixed(t)
                }
            }
        };
        BinaryState {
            v0,
            used: 0,
            remaining,
        }
    }

    /// One transition of `state`: the value for the next usage, or absorption.
    pub fn step_binary<R: Rng + ?Sized>(&self, state: &mut BinaryState, rng: &mut R) -> Step {
        let alive = match state.remaining {
            Remaining::Fixed(t) => state.used < t,
            Remaining::Dead => false,
            Remaining::Geometric { mean } => {
                let p = if state.used == 0 {
                    mean.min(1.0)
                } else if mean >= 1.0 {
                    1.0 - 1.0 / mean
                } else {
                    0.0
                };
                rng.gen::<f64>() < p
            }
        };
        if alive {
            state.used += 1;
            Step::Value(state.v0)
        } else {
            state.remaining = Remaining::Dead;
            Step::Absorbed
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Remaining {
    Fixed(u64),
    Geometric { mean: f64 },
    Dead,
}

/// Per-path state of the binary model.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryState {
    pub v0: f64,
    /// Usages with value `V0` emitted so far.
    pub used: u64,
    remaining: Remaining,
}

/// Martingale walk with bounded increments and crossing reflection:
/// a step that would take the value above 1 returns it to the previous value.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralMarkovModel {
    increments: Vec<f64>,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
    epsilon: f64,
    delta_sq: f64,
    c3: f64,
}

impl GeneralMarkovModel {
    /// Discrete increment law, identical in every state. Must have mean zero.
    pub fn new(increments: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if increments.is_empty() || increments.len() != probs.len() {
            return Err(Error::InvalidParameter("increment law needs matching steps and probabilities".into()));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter("increment probabilities must sum to 1".into()));
        }
        let moment = |k: i32| increments.iter().zip(&probs).map(|(d, p)| p * d.powi(k)).sum::<f64>();
        let epsilon = increments.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(domain("epsilon", epsilon, "(0, 1)"));
        }
        let mean = moment(1);
        if mean.abs() > 1e-12 * epsilon.max(1.0) {
            return Err(Error::InvalidParameter(format!("increments must have mean 0, got {mean}")));
        }
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Self {
            delta_sq: moment(2),
            c3: moment(3),
            increments,
            probs,
            cumulative,
            epsilon,
        })
    }

    /// `±delta` with probability 1/2 each.
    pub fn symmetric(delta: f64) -> Result<Self> {
        Self::new(vec![delta, -delta], vec![0.5, 0.5])
    }

    /// `+delta` w.p. 2/3, `-2 delta` w.p. 1/3: `ε = 2δ`, `E[Δ²] = 2δ²`, `E[Δ³] = -2δ³`.
    pub fn skewed(delta: f64) -> Result<Self> {
        Self::new(vec![delta, -2.0 * delta], vec![2.0 / 3.0, 1.0 / 3.0])
    }

    pub fn increments(&self) -> (&[f64], &[f64]) {
        (&self.increments, &self.probs)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta_sq(&self) -> f64 {
        self.delta_sq
    }

    pub fn c3(&self) -> f64 {
        self.c3
    }

    pub fn draw_increment<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.increments[i.min(self.increments.len() - 1)]
    }

    /// Transition given the window `(V_{t-1}, V_t)`.
    pub fn step_general<R: Rng + ?Sized>(&self, prev: f64, current: f64, rng: &mut R) -> Step {
        self.apply(prev, current, self.draw_increment(rng))
    }

    /// Deterministic part of [`step_general`](Self::step_general).
    pub fn apply(&self, prev: f64, current: f64, increment: f64) -> Step {
        let proposal = current + increment;
        if proposal <= BOUNDARY_TOL {
            Step::Absorbed
        } else if proposal > 1.0 + BOUNDARY_TOL {
            Step::Value(prev)
        } else {
            Step::Value(proposal)
        }
    }

    pub fn expected_lifetime(&self, v: f64) -> f64 {
        v * (2.0 - v) / self.delta_sq
    }

    /// Empirical mean of `n` increments against three standard errors of 0.
    pub fn martingale_check<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> (f64, f64, bool) {
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..n {
            let d = self.draw_increment(rng);
            assert!(d.abs() <= self.epsilon);
            sum += d;
            sq += d * d;
        }
        let mean = sum / n as f64;
        let var = (sq / n as f64 - mean * mean).max(0.0);
        let se = (var / n as f64).sqrt();
        (mean, se, mean.abs() <= 3.0 * se)
    }
}

/// Any of the supported value processes.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueProcess {
    Walk(RandomWalkModel),
    Binary(BinaryValueModel),
    Markov(GeneralMarkovModel),
}

impl ValueProcess {
    pub fn as_walk(&self) -> Option<&RandomWalkModel> {
        match self {
            ValueProcess::Walk(w) => Some(w),
            _ => None,
        }
    }

    /// `E[T(v)]`: exact for the walk and binary models, the leading-order
    /// value `v(2-v)/δ²` for the general model.
    pub fn expected_lifetime(&self, v: f64) -> f64 {
        match self {
            ValueProcess::Walk(w) => w.expected_lifetime(v),
            ValueProcess::Binary(b) => b.expected_stop(v),
            ValueProcess::Markov(m) => m.expected_lifetime(v),
        }
    }

    pub fn default_cap(&self, v: f64) -> u64 {
        (DEFAULT_CAP_FACTOR * self.expected_lifetime(v)).ceil().max(1.0) as u64
    }

    pub fn start<R: Rng + ?Sized>(&self, v0: f64, rng: &mut R) -> Path<'_> {
        match self {
            ValueProcess::Walk(model) => Path::Walk {
                model,
                index: Some(model.snap(v0, rng)),
                started: false,
            },
            ValueProcess::Binary(model) => Path::Binary {
                model,
                state: model.start(v0, rng),
            },
            ValueProcess::Markov(model) => Path::Markov {
                model,
                prev: v0,
                current: (v0 > BOUNDARY_TOL).then_some(v0.min(1.0)),
                started: false,
            },
        }
    }
}

/// A value path in progress.
#[derive(Debug, Clone)]
pub enum Path<'a> {
    Walk {
        model: &'a RandomWalkModel,
        index: Option<u32>,
        started: bool,
    },
    Binary {
        model: &'a BinaryValueModel,
        state: BinaryState,
    },
    Markov {
        model: &'a GeneralMarkovModel,
        prev: f64,
        current: Option<f64>,
        started: bool,
    },
}

impl Path<'_> {
    /// Value for the next usage: `V0` on the first call, then one
    /// transition per call. `None` once absorbed.
    pub fn next_value<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<f64> {
        match self {
            Path::Walk { model, index, started } => {
                if *started {
                    *index = index.and_then(|i| model.step_index(i, rng));
                }
                *started = true;
                match *index {
                    Some(0) | None => {
                        *index = None;
                        None
                    }
                    Some(i) => Some(model.value_at(i)),
                }
            }
            Path::Binary { model, state } => match model.step_binary(state, rng) {
                Step::Value(v) => Some(v),
                Step::Absorbed => None,
            },
            Path::Markov {
                model,
                prev,
                current,
                started,
            } => {
                let cur = (*current)?;
                if !*started {
                    *started = true;
                    return Some(cur);
                }
                match model.step_general(*prev, cur, rng) {
                    Step::Value(next) => {
                        *prev = cur;
                        *current = Some(next);
                        Some(next)
                    }
                    Step::Absorbed => {
                        *current = None;
                        None
                    }
                }
            }
        }
    }
}

/// A realised value path.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub v0: f64,
    /// `V0 .. V_{stop-1}`, all positive.
    pub values: Vec<f64>,
    pub stop_time: u64,
    pub absorbed: bool,
    pub capped: bool,
}

pub fn sample_trajectory<R: Rng + ?Sized>(
    model: &ValueProcess,
    v0: f64,
    cap: u64,
    rng: &mut R,
) -> Result<Trajectory> {
    if cap == 0 {
        return Err(domain("cap", 0.0, "cap >= 1"));
    }
    let mut path = model.start(v0, rng);
    let mut values = Vec::new();
    let mut absorbed = false;
    while (values.len() as u64) < cap {
        match path.next_value(rng) {
            Some(v) => values.push(v),
            None => {
                absorbed = true;
                break;
            }
        }
    }
    Ok(Trajectory {
        v0,
        stop_time: values.len() as u64,
        capped: !absorbed,
        absorbed,
        values,
    })
}
