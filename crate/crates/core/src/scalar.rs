//! Scalar abstractions shared by the matrix and field code.
//!
//! Matrices are generic over an exact integer ring ([`IntScalar`]); the
//! polynomial, rational-function and radical-tower layers are generic over
//! an exact field ([`Field`]).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// An exact signed integer type usable as a matrix entry.
///
/// Implemented for `i64`, `i128` and [`BigInt`]. Fixed-width types overflow
/// on long braid words; use [`BigInt`] whenever magnitudes are unbounded.
pub trait IntScalar:
    Clone + Debug + Display + Hash + Eq + Ord + Integer + Signed + FromPrimitive + ToPrimitive
{
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("i64 fits every IntScalar")
    }
}

impl IntScalar for i64 {}
impl IntScalar for i128 {}
impl IntScalar for BigInt {}

/// An exact field with a fallible inverse.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn from_int(v: i64) -> Self;

    fn from_rational(q: &BigRational) -> Self;

    /// The value as a rational number, if it is one. Polynomial gcd uses
    /// this to take an integer fast path.
    fn as_rational(&self) -> Option<BigRational> {
        None
    }

    /// Whether the value is a perfect square in the field, when decidable.
    /// `None` means the field cannot answer cheaply.
    fn is_square(&self) -> Option<bool> {
        None
    }
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn is_square(&self) -> Option<bool> {
        if self.is_negative() {
            return Some(false);
        }
        let num = self.numer();
        let den = self.denom();
        Some(is_perfect_square(num) && is_perfect_square(den))
    }
}

pub(crate) fn is_perfect_square(v: &BigInt) -> bool {
    if v.is_negative() {
        return false;
    }
    let r = v.sqrt();
    &(&r * &r) == v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_squares() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(q(9, 4).is_square(), Some(true));
        assert_eq!(q(2, 1).is_square(), Some(false));
        assert_eq!(q(-1, 1).is_square(), Some(false));
        assert_eq!(q(0, 1).is_square(), Some(true));
        assert_eq!(q(8, 18).is_square(), Some(true));
    }
}
