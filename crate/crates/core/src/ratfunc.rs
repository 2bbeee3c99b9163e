//! Rational functions in `a1, a2, …` over an exact field, kept in lowest
//! terms with a monic denominator so that equal functions have equal
//! representations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{gcd, MultiPoly};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalFunctionError {
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction<C> {
    num: MultiPoly<C>,
    den: MultiPoly<C>,
}

impl<C: Field> RationalFunction<C> {
    pub fn new(num: MultiPoly<C>, den: MultiPoly<C>) -> Result<Self, RationalFunctionError> {
        if den.is_zero() {
            return Err(RationalFunctionError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: MultiPoly<C>) -> Self {
        RationalFunction {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn var(index: usize) -> Self {
        Self::from_poly(MultiPoly::var(index))
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    fn normalized(num: MultiPoly<C>, den: MultiPoly<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Self::with_monic_denominator(num, den)
    }

    fn with_monic_denominator(num: MultiPoly<C>, den: MultiPoly<C>) -> Self {
        let lc = den.leading_coefficient();
        if lc.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lc.inverse().expect("nonzero denominator");
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn numerator(&self) -> &MultiPoly<C> {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly<C> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a field constant, if it is one.
    pub fn as_constant(&self) -> Option<C> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.constant_term())
    }

    pub fn checked_inverse(&self) -> Result<Self, RationalFunctionError> {
        if self.num.is_zero() {
            return Err(RationalFunctionError::DivisionByZero);
        }
        Ok(Self::with_monic_denominator(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, RationalFunctionError> {
        Ok(self * &other.checked_inverse()?)
    }

    /// Value at a point, `None` where the denominator vanishes.
    pub fn eval(&self, point: &[C]) -> Option<C> {
        let d = self.den.eval(point);
        let inv = d.inverse()?;
        Some(self.num.eval(point) * inv)
    }
}

impl<C: Field> Zero for RationalFunction<C> {
    fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<C: Field> One for RationalFunction<C> {
    fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
}

impl<'a, C: Field> Add<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;

    fn add(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RationalFunction::from_poly(num);
            }
            return RationalFunction::normalized(num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::normalized(num, &self.den * &rhs.den)
    }
}

impl<'a, C: Field> Sub<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;

    fn sub(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        self + &(-rhs)
    }
}

impl<'a, C: Field> Mul<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;

    fn mul(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel; both inputs are already in lowest terms
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let div = |p: &MultiPoly<C>, g: &MultiPoly<C>| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = &div(&self.num, &g1) * &div(&rhs.num, &g2);
        let den = &div(&self.den, &g2) * &div(&rhs.den, &g1);
        RationalFunction::with_monic_denominator(num, den)
    }
}

impl<C: Field> Neg for &RationalFunction<C> {
    type Output = RationalFunction<C>;

    fn neg(self) -> RationalFunction<C> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Field> $tr for RationalFunction<C> {
            type Output = RationalFunction<C>;
            fn $m(self, rhs: Self) -> RationalFunction<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<C: Field> Neg for RationalFunction<C> {
    type Output = RationalFunction<C>;

    fn neg(self) -> RationalFunction<C> {
        -&self
    }
}

impl<C: Field> Field for RationalFunction<C> {
    fn inverse(&self) -> Option<Self> {
        self.checked_inverse().ok()
    }

    fn from_int(v: i64) -> Self {
        Self::constant(C::from_int(v))
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::constant(C::from_rational(q))
    }
}

impl fmt::Display for RationalFunction<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type R = RationalFunction<BigRational>;

    fn a(i: usize) -> R {
        R::var(i)
    }

    #[test]
    fn field_examples() {
        let s = &(&a(1) - &a(2)) + &(&a(2) - &a(3));
        assert_eq!(s, &a(1) - &a(3));
        let d = &a(1) - &a(2);
        assert!((&d.checked_inverse().unwrap() * &d).is_one());
        assert_eq!(R::zero().checked_inverse(), Err(RationalFunctionError::DivisionByZero));
    }

    #[test]
    fn normalization_cancels_common_factors() {
        let num = (&a(1) * &a(1)) - (&a(2) * &a(2));
        let q = num.checked_div(&(&a(1) - &a(2))).unwrap();
        assert_eq!(q, &a(1) + &a(2));
        assert!(q.is_polynomial());
        // denominator is made monic
        let two = R::constant(BigRational::from_integer(BigInt::from(2)));
        let x = a(1).checked_div(&(&two * &a(2))).unwrap();
        assert!(x.denominator().is_monic());
        assert_eq!(x.to_string(), "(1/2*a1)/(a2)");
        let y = (&two * &a(1)).checked_div(&(&(&two * &two) * &a(2))).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn sums_with_different_denominators() {
        let x = a(1).checked_inverse().unwrap();
        let y = a(2).checked_inverse().unwrap();
        let s = &x + &y;
        let expected = (&a(1) + &a(2)).checked_div(&(&a(1) * &a(2))).unwrap();
        assert_eq!(s, expected);
        assert!((&s - &expected).is_zero());
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        assert_eq!(s.eval(&[q(1), q(2)]), Some(BigRational::new(BigInt::from(3), BigInt::from(2))));
        assert_eq!(x.eval(&[q(0)]), None);
    }
}
