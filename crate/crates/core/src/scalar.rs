//! Scalar abstractions.
//!
//! The closed-form walk formulas and the grid oracle only need field
//! arithmetic, so they are written against [`Scalar`] and run unchanged on
//! `f32`, `f64` and exact rationals. Anything that needs `sqrt`, `powf` or
//! sampling is written against [`Real`].

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, Num, ToPrimitive};
use rand::Rng;

/// Field-like number usable by the closed forms and the exact oracle.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn as_f64(&self) -> f64;

    /// Equality up to representation error: exact for rationals, relative
    /// `1e-9` for floating point.
    fn approx_eq(&self, other: &Self) -> bool;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn as_f64(&self) -> f64 {
                *self as f64
            }

            fn approx_eq(&self, other: &Self) -> bool {
                let scale = 1.0 as $t;
                let scale = scale.max(self.abs()).max(other.abs());
                (self - other).abs() <= $tol * scale
            }
        }
    };
}

impl_float_scalar!(f64, 1e-9);
impl_float_scalar!(f32, 1e-5);

impl Scalar for Ratio<i64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

/// Floating-point scalar for distributions, quadrature and sampling.
pub trait Real: Scalar + Float {
    /// Uniform draw from `[0, 1)`.
    fn unit_sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn lit(x: f64) -> Self;
}

impl Real for f64 {
    fn unit_sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f64>()
    }

    fn lit(x: f64) -> Self {
        x
    }
}

impl Real for f32 {
    fn unit_sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f32>()
    }

    fn lit(x: f64) -> Self {
        x as f32
    }
}

/// Index `k` such that `value == k / steps`, if there is one.
pub fn grid_index<S: Scalar>(value: &S, steps: u32) -> Option<u32> {
    let k = (value.as_f64() * steps as f64).round();
    if !(0.0..=steps as f64).contains(&k) {
        return None;
    }
    let k = k as i64;
    value
        .approx_eq(&S::from_ratio(k, steps as i64))
        .then_some(k as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_index_exact_and_float() {
        assert_eq!(grid_index(&0.3_f64, 10), Some(3));
        assert_eq!(grid_index(&0.35_f64, 10), None);
        assert_eq!(grid_index(&Ratio::new(3_i64, 8), 8), Some(3));
        assert_eq!(grid_index(&Ratio::new(1_i64, 3), 8), None);
        assert_eq!(grid_index(&1.5_f64, 4), None);
    }

    #[test]
    fn rational_roundtrip() {
        let r = <BigRational as Scalar>::from_ratio(5, 16);
        assert_eq!(r.as_f64(), 0.3125);
    }
}
