//! Sparse multivariate polynomials over an exact field, with exact
//! division and gcd (heuristic integer gcd, recursive primitive PRS as the
//! fallback).
//!
//! Variables are `a1, a2, …`; a polynomial mentions only the variables it
//! uses, so there is no fixed arity. Terms are ordered graded
//! lexicographically with `a1 > a2 > …`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Field;

/// Exponent vector with trailing zeros trimmed, ordered by total degree
/// then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial {
            degree: exps.iter().sum(),
            exps,
        }
    }

    /// `a_{var+1}^power` (variables are 0-based internally).
    pub fn var_power(var: usize, power: u32) -> Self {
        let mut exps = vec![0; var + 1];
        exps[var] = power;
        Self::new(exps)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps.get(var).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let exps = (0..n).map(|i| self.exponent(i) + other.exponent(i)).collect();
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.exps.len() > self.exps.len() {
            return None;
        }
        let mut exps = Vec::with_capacity(self.exps.len());
        for i in 0..self.exps.len() {
            exps.push(self.exps[i].checked_sub(other.exponent(i))?);
        }
        Some(Monomial::new(exps))
    }

    fn without_var(&self, var: usize) -> Monomial {
        let mut exps = self.exps.clone();
        if var < exps.len() {
            exps[var] = 0;
        }
        Monomial::new(exps)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Field> MultiPoly<C> {
    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { terms }
    }

    /// The variable `a_{index}` (1-based, matching the printed names).
    pub fn var(index: usize) -> Self {
        assert!(index >= 1, "variables are 1-based");
        Self::monomial(Monomial::var_power(index - 1, 1), C::one())
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> C {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.leading_term().map(|(m, _)| m.degree).unwrap_or(0)
    }

    /// Number of variables needed to write the polynomial.
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|m| m.exps.len()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    /// Scaled so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => Self::zero(),
            Some((_, lc)) => {
                let inv = lc.inverse().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient().is_one()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients with respect to `var`: entry `k` multiplies `var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly<C>> {
        let mut out = vec![Self::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exponent(var) as usize].add_term(m.without_var(var), c.clone());
        }
        out
    }

    fn leading_coefficient_in(&self, var: usize) -> (u32, MultiPoly<C>) {
        let d = self.degree_in(var);
        let mut lc = Self::zero();
        for (m, c) in &self.terms {
            if m.exponent(var) == d {
                lc.add_term(m.without_var(var), c.clone());
            }
        }
        (d, lc)
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = lc.inverse()?;
        if divisor.terms.len() == 1 {
            let mut q = Self::zero();
            for (m, c) in &self.terms {
                q.terms.insert(m.div(lm)?, c.clone() * lc_inv.clone());
            }
            return Some(q);
        }
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(lm)?;
            let qc = rc.clone() * lc_inv.clone();
            rem = &rem - &divisor.mul_monomial(&qm).scale(&qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Pseudo-remainder of `self` by `divisor` with respect to `var`.
    fn pseudo_rem(&self, divisor: &Self, var: usize) -> Self {
        let (d, lc) = divisor.leading_coefficient_in(var);
        let mut r = self.clone();
        while !r.is_zero() {
            let (dr, lr) = r.leading_coefficient_in(var);
            if dr < d {
                break;
            }
            let shift = Monomial::var_power(var, dr - d);
            r = &(&r * &lc) - &(&divisor.mul_monomial(&shift) * &lr);
        }
        r
    }

    /// Monic gcd of the coefficients with respect to `var`.
    fn content_in(&self, var: usize) -> Self {
        let mut g = Self::zero();
        for c in self.coefficients_in(var) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn eval(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                for _ in 0..e {
                    t = t * point[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    fn to_rational(&self) -> Option<MultiPoly<BigRational>> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.as_rational()?);
        }
        Some(MultiPoly { terms })
    }

    pub fn map_coefficients<D: Field, F: Fn(&C) -> D>(&self, f: F) -> MultiPoly<D> {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd<C: Field>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> MultiPoly<C> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a.terms.len() == 1 && b.terms.len() == 1 {
        let (ma, _) = a.leading_term().unwrap();
        let (mb, _) = b.leading_term().unwrap();
        let n = ma.exps.len().min(mb.exps.len());
        let exps = (0..n).map(|i| ma.exps[i].min(mb.exps[i])).collect();
        return MultiPoly::monomial(Monomial::new(exps), C::one());
    }
    if let (Some(qa), Some(qb)) = (a.to_rational(), b.to_rational()) {
        if let Some(h) = heuristic::gcd(&qa, &qb) {
            return h.map_coefficients(C::from_rational).monic();
        }
    }
    prs_gcd(a, b)
}

/// Recursive primitive PRS in the highest variable.
fn prs_gcd<C: Field>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> MultiPoly<C> {
    if a.is_zero() || b.is_zero() || a.is_constant() || b.is_constant() {
        return gcd(a, b);
    }
    let var = a.arity().max(b.arity()) - 1;
    let (da, db) = (a.degree_in(var), b.degree_in(var));
    if da == 0 {
        return gcd(a, &b.content_in(var));
    }
    if db == 0 {
        return gcd(&a.content_in(var), b);
    }
    let ca = a.content_in(var);
    let cb = b.content_in(var);
    let content = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let (mut f, mut h) = if da >= db { (pa, pb) } else { (pb, pa) };
    while !h.is_zero() {
        let r = f.pseudo_rem(&h, var);
        f = h;
        h = if r.is_zero() {
            r
        } else {
            let c = r.content_in(var);
            r.div_exact(&c).expect("content divides").monic()
        };
    }
    let f = f.div_exact(&f.content_in(var)).expect("content divides");
    (&f * &content).monic()
}

/// Heuristic gcd over the integers: evaluate the top variable at a large
/// integer `ξ`, recurse, rebuild a candidate from the `ξ`-adic digits of the
/// result and accept it only if it divides both inputs.
mod heuristic {
    use super::*;
    use num_bigint::BigInt;
    use num_integer::Integer;

    type Q = MultiPoly<BigRational>;

    const ATTEMPTS: usize = 6;

    pub(super) fn gcd(a: &Q, b: &Q) -> Option<Q> {
        let (a, b) = (primitive(&clear_denominators(a)), primitive(&clear_denominators(b)));
        let h = integer_gcd(&a, &b)?;
        Some(primitive(&h))
    }

    fn clear_denominators(p: &Q) -> Q {
        let l = p.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        p.scale(&BigRational::from_integer(l))
    }

    fn content(p: &Q) -> BigInt {
        p.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    /// Integer primitive part with a positive leading coefficient.
    fn primitive(p: &Q) -> Q {
        if p.is_zero() {
            return p.clone();
        }
        let mut c = content(p);
        if p.leading_coefficient().is_negative() {
            c = -c;
        }
        p.scale(&BigRational::from_integer(c).recip())
    }

    fn norm(p: &Q) -> BigInt {
        p.terms.values().map(|c| c.numer().abs()).max().unwrap_or_default()
    }

    fn eval_var(p: &Q, var: usize, xi: &BigInt) -> Q {
        let mut out = Q::zero();
        for (m, c) in &p.terms {
            let v = c.numer() * num_traits::pow(xi.clone(), m.exponent(var) as usize);
            out.add_term(m.without_var(var), BigRational::from_integer(v));
        }
        out
    }

    /// Inverse of `eval_var`, using symmetric residues mod `ξ`.
    fn reconstruct(gamma: &Q, var: usize, xi: &BigInt) -> Q {
        let half = xi / 2;
        let mut rest = gamma.clone();
        let mut out = Q::zero();
        let mut k = 0u32;
        while !rest.is_zero() {
            let mut digit = Q::zero();
            for (m, c) in &rest.terms {
                let mut r = c.numer().mod_floor(xi);
                if r > half {
                    r -= xi;
                }
                digit.add_term(m.clone(), BigRational::from_integer(r));
            }
            let shift = Monomial::var_power(var, k);
            out = &out + &digit.mul_monomial(&shift);
            rest = (&rest - &digit).scale(&BigRational::from_integer(xi.clone()).recip());
            k += 1;
        }
        out
    }

    fn integer_gcd(a: &Q, b: &Q) -> Option<Q> {
        if a.is_zero() {
            return Some(b.clone());
        }
        if b.is_zero() {
            return Some(a.clone());
        }
        if a.is_constant() || b.is_constant() {
            return Some(Q::constant(BigRational::from_integer(content(a).gcd(&content(b)))));
        }
        let var = a.arity().max(b.arity()) - 1;
        let mut xi = BigInt::from(2) * norm(a).min(norm(b)) + 29;
        for _ in 0..ATTEMPTS {
            let (ea, eb) = (eval_var(a, var, &xi), eval_var(b, var, &xi));
            if let Some(gamma) = integer_gcd(&ea, &eb) {
                let h = primitive(&reconstruct(&gamma, var, &xi));
                if !h.is_zero() && a.div_exact(&h).is_some() && b.div_exact(&h).is_some() {
                    let c = content(a).gcd(&content(b));
                    return Some(h.scale(&BigRational::from_integer(c)));
                }
            }
            xi = xi * 73794 / 27011;
        }
        None
    }
}

impl<C: Field> Zero for MultiPoly<C> {
    fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Field> One for MultiPoly<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }

    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }
}

impl<'a, C: Field> Add<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn add(self, rhs: &'a MultiPoly<C>) -> MultiPoly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, C: Field> Sub<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn sub(self, rhs: &'a MultiPoly<C>) -> MultiPoly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, C: Field> Mul<&'a MultiPoly<C>> for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn mul(self, rhs: &'a MultiPoly<C>) -> MultiPoly<C> {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Field> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Field> $tr for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $m(self, rhs: Self) -> MultiPoly<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<C: Field> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn neg(self) -> MultiPoly<C> {
        -&self
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MultiPoly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut first = true;
            if m.is_one() || !mag.is_one() {
                write_rational(f, &mag)?;
                first = false;
            }
            for (v, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "a{}", v + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = MultiPoly<BigRational>;

    fn a(i: usize) -> P {
        P::var(i)
    }

    fn c(n: i64) -> P {
        P::constant(BigRational::from_integer(BigInt::from(n)))
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let m = |e: &[u32]| Monomial::new(e.to_vec());
        assert!(m(&[1]) > m(&[0, 1]));
        assert!(m(&[0, 2]) > m(&[1]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
        assert_eq!(m(&[1, 0, 0]), m(&[1]));
        assert!(m(&[1]) > m(&[]));
    }

    #[test]
    fn arithmetic_and_display() {
        let p = &(&a(1) - &a(2)) * &(&a(1) + &a(2));
        assert_eq!(p, &a(1).pow(2) - &a(2).pow(2));
        assert_eq!(p.to_string(), "a1^2 - a2^2");
        let q = &c(3) * &a(3);
        assert_eq!((&q - &c(1)).to_string(), "3*a3 - 1");
        let half = P::constant(BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!((&half * &(&a(1) * &a(2))).to_string(), "-1/2*a1*a2");
        assert_eq!(P::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let num = &a(1).pow(2) - &a(2).pow(2);
        let den = &a(1) - &a(2);
        assert_eq!(num.div_exact(&den), Some(&a(1) + &a(2)));
        assert_eq!(num.div_exact(&(&a(1) - &a(3))), None);
        assert_eq!(c(6).div_exact(&c(3)), Some(c(2)));
        assert_eq!(a(1).div_exact(&a(2)), None);
    }

    #[test]
    fn heuristic_and_prs_agree() {
        let f = &(&a(1).pow(2) + &(&c(3) * &a(2))) - &(&a(3) * &a(1));
        let g1 = &(&a(2).pow(3) - &c(2)) + &a(1);
        let g2 = &(&a(1) * &a(3)) - &(&c(5) * &a(2).pow(2));
        let (x, y) = (&(&f * &g1) * &f, &(&f * &g2) * &g2);
        let fast = gcd(&x, &y);
        assert_eq!(fast, prs_gcd(&x, &y));
        assert_eq!(fast, f.monic());
        let h = heuristic::gcd(&x, &y).unwrap();
        assert_eq!(h.monic(), f.monic());
    }

    #[test]
    fn gcd_examples() {
        let l12 = &a(1) - &a(2);
        let l13 = &a(1) - &a(3);
        let l23 = &a(2) - &a(3);
        let x = &(&l12 * &l13) * &l13;
        let y = &(&l13 * &l23).scale(&BigRational::from_integer(BigInt::from(7))) * &l12;
        assert_eq!(gcd(&x, &y), (&l12 * &l13).monic());
        assert!(gcd(&l12, &l23).is_one());
        assert_eq!(gcd(&P::zero(), &l12.scale(&BigRational::from_integer(BigInt::from(-2)))), l12);
        let s = &(&a(1).pow(2) + &a(2).pow(2)) + &c(1);
        assert_eq!(gcd(&(&s * &l12), &(&s * &l23)), s.monic());
        assert_eq!(gcd(&(&a(1).pow(3) * &a(2)), &(&a(1) * &a(2).pow(2))), &a(1) * &a(2));
    }

    #[test]
    fn coefficients_and_eval() {
        let p = &(&a(1).pow(2) * &a(2)) + &(&a(2) - &c(4));
        let cs = p.coefficients_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], &a(2) - &c(4));
        assert!(cs[1].is_zero());
        assert_eq!(cs[2], a(2));
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        assert_eq!(p.eval(&[q(2), q(3)]), q(11));
    }
}
