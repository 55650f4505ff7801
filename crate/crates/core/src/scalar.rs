//! Coefficient number types.
//!
//! Bell tables, jets and compositions are generic over [`Scalar`] so the
//! same code runs in exact rational arithmetic (for identity checks) and in
//! `f64` (for the solver).

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// Tolerance used when two floating-point expansion points must coincide.
pub const POINT_TOLERANCE: f64 = 1e-12;

pub trait Scalar: Clone + PartialEq + Debug + Num + Neg<Output = Self> {
    fn from_int(n: i64) -> Self;

    /// `num / den`, formed before it touches any other operand.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Exact conversion for types that can hold every `f64`.
    fn from_f64(x: f64) -> Self;

    fn is_finite(&self) -> bool;

    fn to_f64(&self) -> f64;

    /// Whether two expansion points are the same point.
    fn same_point(&self, other: &Self) -> bool;
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn same_point(&self, other: &Self) -> bool {
        let scale = 1.0 + self.abs().max(other.abs());
        (self - other).abs() <= POINT_TOLERANCE * scale
    }
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite value")
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn same_point(&self, other: &Self) -> bool {
        self == other
    }
}

/// `n!` in the target number type.
pub fn factorial<T: Scalar>(n: usize) -> T {
    (2..=n as i64).fold(T::one(), |acc, i| acc * T::from_int(i))
}

/// Non-negative integer power by repeated squaring.
pub fn powu<T: Scalar>(base: &T, mut exp: usize) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        exp >>= 1;
        if exp > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_ratio_is_reduced() {
        assert_eq!(BigRational::ratio(6, 4), BigRational::ratio(3, 2));
    }

    #[test]
    fn float_points_match_within_tolerance() {
        assert!(1.0f64.same_point(&(1.0 + 1e-13)));
        assert!(!1.0f64.same_point(&(1.0 + 1e-9)));
    }

    #[test]
    fn small_factorials_and_powers() {
        assert_eq!(factorial::<f64>(0), 1.0);
        assert_eq!(factorial::<f64>(5), 120.0);
        assert_eq!(powu(&3.0f64, 4), 81.0);
        assert_eq!(powu(&BigRational::ratio(1, 2), 3), BigRational::ratio(1, 8));
    }
}
