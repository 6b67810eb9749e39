//! Exact expectations of the grid walk from its linear recurrences.
//!
//! Every query reduces to a birth-death system
//! `x_i - (x_{i-1} + x_{i+1}) / 2 = r_i`, optionally with the reflecting
//! row `x_n - x_{n-1} = r_n` at the top, solved by tridiagonal elimination.

use crate::error::{domain, Error, Result};
use crate::process::RandomWalkModel;
use crate::scalar::{grid_index, Scalar};

/// A quantity the oracle can compute. All values must lie on the grid.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleQuery<S> {
    /// Probability that the unreflected walk from `v` reaches `hi` before `lo`.
    AbsorptionProb { v: S, lo: S, hi: S },
    /// Expected time for the reflected walk from `v` to reach `target <= v`.
    HittingTime { v: S, target: S },
    /// Expected time for the walk from `v` to exit `(lo, hi)`.
    TwoSidedTime { v: S, lo: S, hi: S },
    /// Expected value collected by the reflected walk from `v` before it reaches `w`.
    CumulativeValue { v: S, w: S },
    /// `E[τ | walk from v reaches 1 before 0]`.
    ConditionalTimeToOne { v: S },
    /// Expected payments of a buyer paying `p` per usage while the value is above `w`.
    RevenueUnderThreshold { v: S, w: S, p: S },
    /// Expected value minus payments for the same buyer.
    UtilityUnderThreshold { v: S, w: S, p: S },
}

/// Solves `a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i` by forward
/// elimination and back substitution. `a[0]` and `c[n-1]` are ignored.
pub fn solve_tridiagonal<S: Scalar>(a: &[S], b: &[S], c: &[S], d: &[S]) -> Result<Vec<S>> {
    let n = b.len();
    if a.len() != n || c.len() != n || d.len() != n {
        return Err(Error::InvalidParameter("tridiagonal bands differ in length".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut cp: Vec<S> = Vec::with_capacity(n);
    let mut dp: Vec<S> = Vec::with_capacity(n);
    for i in 0..n {
        let (ci, di) = if i == 0 {
            (S::zero(), S::zero())
        } else {
            (cp[i - 1].clone(), dp[i - 1].clone())
        };
        let denom = b[i].clone() - a_at(a, i) * ci;
        if denom == S::zero() {
            return Err(Error::InvalidParameter("singular tridiagonal system".into()));
        }
        cp.push(c[i].clone() / denom.clone());
        dp.push((d[i].clone() - a_at(a, i) * di) / denom);
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        let next = x[i + 1].clone();
        x[i] = x[i].clone() - cp[i].clone() * next;
    }
    Ok(x)
}

fn a_at<S: Scalar>(a: &[S], i: usize) -> S {
    if i == 0 {
        S::zero()
    } else {
        a[i].clone()
    }
}

/// Solves the birth-death chain with unknowns `x_0..x_{m-1}`, neighbours
/// `left` below `x_0` and `right` above `x_{m-1}` (reflecting row if `None`).
fn birth_death<S: Scalar>(rhs: &[S], left: S, right: Option<S>) -> Result<Vec<S>> {
    let m = rhs.len();
    let half = S::from_ratio(1, 2);
    let mut a = vec![-half.clone(); m];
    let mut b = vec![S::one(); m];
    let mut c = vec![-half.clone(); m];
    let mut d = rhs.to_vec();
    if m == 0 {
        return Ok(Vec::new());
    }
    d[0] = d[0].clone() + half.clone() * left.clone();
    match right {
        Some(r) => d[m - 1] = d[m - 1].clone() + half * r,
        None => {
            // x_{m-1} - x_{m-2} = r
            a[m - 1] = -S::one();
            b[m - 1] = S::one();
            c[m - 1] = S::zero();
            if m == 1 {
                d[0] = rhs[0].clone() + left;
            }
        }
    }
    solve_tridiagonal(&a, &b, &c, &d)
}

fn index<S: Scalar>(model: &RandomWalkModel, v: &S) -> Result<usize> {
    grid_index(v, model.steps())
        .map(|i| i as usize)
        .ok_or(Error::OffGrid {
            value: v.as_f64(),
            delta: model.delta(),
        })
}

/// Reflected chain on `w..=n` with `x_w = 0`; returns `x_v`.
fn reflected<S: Scalar>(model: &RandomWalkModel, v: usize, w: usize, reward: impl Fn(usize) -> S) -> Result<S> {
    if w > v {
        return Err(domain("target - v", (w - v) as f64, "<= 0"));
    }
    if v == w {
        return Ok(S::zero());
    }
    let n = model.steps() as usize;
    let rhs: Vec<S> = (w + 1..=n).map(reward).collect();
    let x = birth_death(&rhs, S::zero(), None)?;
    Ok(x[v - w - 1].clone())
}

/// Unreflected chain on `lo..=hi` with fixed boundary values; returns all
/// of `x_lo..=x_hi`.
fn two_sided<S: Scalar>(lo: usize, hi: usize, at_lo: S, at_hi: S, reward: impl Fn(usize) -> S) -> Result<Vec<S>> {
    if lo >= hi {
        return Err(domain("hi - lo", hi as f64 - lo as f64, "> 0"));
    }
    let rhs: Vec<S> = (lo + 1..hi).map(reward).collect();
    let inner = birth_death(&rhs, at_lo.clone(), Some(at_hi.clone()))?;
    let mut out = vec![at_lo];
    out.extend(inner);
    out.push(at_hi);
    Ok(out)
}

/// Exact value of `query` for the walk `model`.
pub fn dp_oracle<S: Scalar>(model: &RandomWalkModel, query: &OracleQuery<S>) -> Result<S> {
    let n = model.steps() as i64;
    let value = |i: usize| S::from_ratio(i as i64, n);
    match query {
        OracleQuery::AbsorptionProb { v, lo, hi } => {
            let (v, lo, hi) = (index(model, v)?, index(model, lo)?, index(model, hi)?);
            check_between(v, lo, hi)?;
            Ok(two_sided(lo, hi, S::zero(), S::one(), |_| S::zero())?[v - lo].clone())
        }
        OracleQuery::TwoSidedTime { v, lo, hi } => {
            let (v, lo, hi) = (index(model, v)?, index(model, lo)?, index(model, hi)?);
            check_between(v, lo, hi)?;
            if lo == hi {
                return Ok(S::zero());
            }
            Ok(two_sided(lo, hi, S::zero(), S::zero(), |_| S::one())?[v - lo].clone())
        }
        OracleQuery::HittingTime { v, target } => {
            reflected(model, index(model, v)?, index(model, target)?, |_| S::one())
        }
        OracleQuery::CumulativeValue { v, w } => reflected(model, index(model, v)?, index(model, w)?, value),
        OracleQuery::RevenueUnderThreshold { v, w, p } => {
            reflected(model, index(model, v)?, index(model, w)?, |_| p.clone())
        }
        OracleQuery::UtilityUnderThreshold { v, w, p } => {
            reflected(model, index(model, v)?, index(model, w)?, |i| value(i) - p.clone())
        }
        OracleQuery::ConditionalTimeToOne { v } => {
            let i = index(model, v)?;
            let top = n as usize;
            if i == 0 || i == top {
                return Err(domain("v", v.as_f64(), "(0, 1)"));
            }
            let reach = two_sided(0, top, S::zero(), S::one(), |_| S::zero())?;
            // g_i = E[τ; hit 1 first] solves g_i - (g_{i-1}+g_{i+1})/2 = P_i(hit 1)
            let g = two_sided(0, top, S::zero(), S::zero(), |j| reach[j].clone())?;
            Ok(g[i].clone() / reach[i].clone())
        }
    }
}

fn check_between(v: usize, lo: usize, hi: usize) -> Result<()> {
    if lo <= v && v <= hi {
        Ok(())
    } else {
        Err(domain("v", v as f64, "[lo, hi]"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn walk(n: u32) -> RandomWalkModel {
        RandomWalkModel::with_steps(n).unwrap()
    }

    #[test]
    fn hitting_time_by_hand() {
        // t = 1.5 + t/2
        let t = dp_oracle(&walk(2), &OracleQuery::HittingTime { v: q(1, 2), target: q(0, 1) }).unwrap();
        assert_eq!(t, q(3, 1));
        let t = dp_oracle(&walk(2), &OracleQuery::HittingTime { v: 0.5, target: 0.0 }).unwrap();
        assert!((t - 3.0_f64).abs() < 1e-12);
    }

    #[test]
    fn gamblers_ruin() {
        let p = dp_oracle(&walk(4), &OracleQuery::AbsorptionProb { v: q(3, 4), lo: q(0, 1), hi: q(1, 1) }).unwrap();
        assert_eq!(p, q(3, 4));
        let p = dp_oracle(&walk(4), &OracleQuery::AbsorptionProb { v: q(3, 4), lo: q(1, 4), hi: q(1, 1) }).unwrap();
        assert_eq!(p, q(2, 3));
    }

    #[test]
    fn conditional_time() {
        let t = dp_oracle(&walk(4), &OracleQuery::ConditionalTimeToOne { v: q(1, 4) }).unwrap();
        assert_eq!(t, q(5, 1));
        let t = dp_oracle(&walk(2), &OracleQuery::ConditionalTimeToOne { v: q(1, 2) }).unwrap();
        assert_eq!(t, q(1, 1));
    }

    #[test]
    fn cumulative_and_two_sided() {
        let c = dp_oracle(&walk(2), &OracleQuery::CumulativeValue { v: q(1, 1), w: q(1, 2) }).unwrap();
        assert_eq!(c, q(1, 1));
        let c = dp_oracle(&walk(2), &OracleQuery::CumulativeValue { v: q(1, 2), w: q(0, 1) }).unwrap();
        assert_eq!(c, q(2, 1));
        let t = dp_oracle(&walk(4), &OracleQuery::TwoSidedTime { v: q(1, 2), lo: q(1, 4), hi: q(3, 4) }).unwrap();
        assert_eq!(t, q(1, 1));
        let t = dp_oracle(&walk(2), &OracleQuery::HittingTime { v: q(1, 1), target: q(1, 2) }).unwrap();
        assert_eq!(t, q(1, 1));
    }

    #[test]
    fn utility_under_threshold() {
        let u = dp_oracle(&walk(4), &OracleQuery::UtilityUnderThreshold { v: q(3, 4), w: q(1, 2), p: q(3, 5) }).unwrap();
        assert_eq!(u, q(7, 10));
        let r = dp_oracle(&walk(2), &OracleQuery::RevenueUnderThreshold { v: q(1, 2), w: q(0, 1), p: q(1, 2) }).unwrap();
        assert_eq!(r, q(3, 2));
    }

    #[test]
    fn rejects_off_grid() {
        assert!(matches!(
            dp_oracle(&walk(4), &OracleQuery::HittingTime { v: 0.3, target: 0.0 }),
            Err(Error::OffGrid { .. })
        ));
        assert!(dp_oracle(&walk(4), &OracleQuery::HittingTime { v: 0.25, target: 0.5 }).is_err());
        assert!(dp_oracle(&walk(4), &OracleQuery::ConditionalTimeToOne { v: 1.0 }).is_err());
    }

    #[test]
    fn tridiagonal_small() {
        // [2 1; 1 3] x = [3; 5] -> x = [0.8, 1.4]
        let x = solve_tridiagonal(&[0.0, 1.0], &[2.0, 3.0], &[1.0, 0.0], &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8_f64).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }
}
