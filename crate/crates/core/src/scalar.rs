//! Exact scalar types.
//!
//! Every computation in this crate is exact. Integer-lattice code is written
//! against [`Scalar`], which any signed arbitrary- or fixed-width integer type
//! satisfies (`i64`, `i128`, `BigInt`). Rational values use [`Rational`]
//! (`BigRational`) throughout.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Exact signed integer used by the lattice and enumeration routines.
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn lift(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("scalar type cannot hold an i64")
    }
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Exact rational with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Numerator as `i64`, when it fits.
pub fn numer_i64(q: &Rational) -> Option<i64> {
    q.numer().to_i64()
}

pub fn denom_i64(q: &Rational) -> Option<i64> {
    q.denom().to_i64()
}

/// Least common multiple of the denominators of `qs` (1 for an empty list).
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// `q * scale` when it is an integer.
pub fn scaled_integer(q: &Rational, scale: &BigInt) -> Option<BigInt> {
    let v = q * Rational::from_integer(scale.clone());
    v.is_integer().then(|| v.to_integer())
}

/// Serializes a rational as its canonical text `n` or `n/d`.
pub fn serialize_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn is_zero<T: Zero>(v: &T) -> bool {
    v.is_zero()
}

pub fn gcd_all<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values.into_iter().fold(T::zero(), |acc, v| acc.gcd(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let q = rat(6, 4);
        assert_eq!(numer_i64(&q), Some(3));
        assert_eq!(denom_i64(&q), Some(2));
        let neg = rat(3, -6);
        assert_eq!(numer_i64(&neg), Some(-1));
        assert_eq!(denom_i64(&neg), Some(2));
    }

    #[test]
    fn common_denominator_is_lcm() {
        let qs = [rat(1, 4), rat(5, 6), int_rat(3)];
        assert_eq!(common_denominator(&qs), BigInt::from(12));
        assert_eq!(scaled_integer(&rat(5, 6), &BigInt::from(12)), Some(BigInt::from(10)));
        assert_eq!(scaled_integer(&rat(1, 5), &BigInt::from(12)), None);
    }

    #[test]
    fn gcd_over_scalar_types() {
        assert_eq!(gcd_all([4i64, 6, 10]), 2);
        assert_eq!(gcd_all([BigInt::from(9), BigInt::from(-12)]), BigInt::from(3));
        assert_eq!(gcd_all(Vec::<i128>::new()), 0);
    }
}
