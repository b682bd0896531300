//! Scalar abstraction shared by the weighted computations (Floyd lengths,
//! Poincaré sums, cylinder masses, growth estimates).
//!
//! Everything that only needs field operations and an order is written
//! against [`Scalar`], so the same code runs over `f32`, `f64` and exact
//! big rationals. Growth-rate estimators need logarithms and use
//! [`num_traits::Float`] instead.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Integer power, negative exponents through the reciprocal.
    fn powi(&self, exp: i32) -> Self {
        let p = num_traits::pow::pow(self.clone(), exp.unsigned_abs() as usize);
        if exp < 0 {
            Self::one() / p
        } else {
            p
        }
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn powi(&self, exp: i32) -> Self {
        f64::powi(*self, exp)
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn powi(&self, exp: i32) -> Self {
        f32::powi(*self, exp)
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Sum of a finite sequence of scalars.
pub fn sum<T: Scalar>(items: impl IntoIterator<Item = T>) -> T {
    items.into_iter().fold(T::zero(), |acc, x| acc + x)
}
