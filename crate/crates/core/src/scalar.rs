//! Scalar abstraction shared by the geometric and closed-form code.
//!
//! Everything that only needs field arithmetic and ordering (intervals, the
//! overlap predicate, the coloring rule, the closed-form probabilities) is
//! written against [`Scalar`], so it runs on `f32`, `f64` and exact
//! [`BigRational`]. Sampling needs a float, see [`FloatScalar`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};
use rand::distributions::uniform::SampleUniform;

/// Ordered field element with the handful of conversions the crate needs.
pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// Largest integer not greater than `self`.
    fn floor(&self) -> Self;

    /// Smallest integer not less than `self`.
    fn ceil(&self) -> Self;

    /// Lossy conversion from `f64`. Exact types take the exact binary value.
    fn from_f64(value: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_u64(value: u64) -> Self;

    /// Converts a non-negative integral value to `u64`.
    fn to_u64(&self) -> Option<u64>;

    /// Ratio of two integers, exact where the type allows it.
    fn ratio(numer: i64, denom: i64) -> Self;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half(&self) -> Self {
        self.clone() / Self::two()
    }

    /// Nearest integer, ties rounded up.
    fn round_half_up(&self) -> Self {
        (self.clone() + Self::one().half()).floor()
    }

    /// `true` when `self` lies within `tol` of an integer.
    fn is_near_integer(&self, tol: &Self) -> bool {
        (self.clone() - self.round_half_up()).abs() <= *tol
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

/// Binary floating point scalars that can be drawn from a random source.
pub trait FloatScalar: Scalar + num_traits::Float + SampleUniform + Copy {}

macro_rules! float_scalar {
    ($($t:ty),+) => {$(
        impl Scalar for $t {
            fn floor(&self) -> Self {
                num_traits::Float::floor(*self)
            }
            fn ceil(&self) -> Self {
                num_traits::Float::ceil(*self)
            }
            fn from_f64(value: f64) -> Self {
                value as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn from_u64(value: u64) -> Self {
                value as $t
            }
            fn to_u64(&self) -> Option<u64> {
                ToPrimitive::to_u64(self)
            }
            fn ratio(numer: i64, denom: i64) -> Self {
                numer as $t / denom as $t
            }
        }

        impl FloatScalar for $t {}
    )+};
}

float_scalar!(f32, f64);

impl Scalar for BigRational {
    fn floor(&self) -> Self {
        BigRational::floor(self)
    }

    fn ceil(&self) -> Self {
        BigRational::ceil(self)
    }

    fn from_f64(value: f64) -> Self {
        BigRational::from_float(value).expect("finite f64")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_u64(value: u64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn to_u64(&self) -> Option<u64> {
        if self.is_integer() {
            self.numer().to_u64()
        } else {
            None
        }
    }

    fn ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }
}
