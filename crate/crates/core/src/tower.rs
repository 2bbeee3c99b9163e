//! Multi-quadratic towers `F(r₁, …, r_k)` with `r_i² = d_i ∈ F`.
//!
//! An element is stored in the monomial basis `∏_{i∈S} r_i`, one base-field
//! coefficient per subset `S` (a bit mask). Multiplication is the finite
//! rewriting `r_i² → d_i`. Inverses go down the tower one radical at a
//! time by multiplying with the conjugate.
//!
//! For the hyperelliptic family the radicals are `i = √−1` followed by
//! `s_jk = √(a_j − a_k)` for `j < k`, in lexicographic order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::poly::MultiPoly;
use crate::ratfunc::RationalFunction;
use crate::scalar::Field;

pub type QRationalFunction = RationalFunction<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("elements belong to different radical sets")]
    RadicalSetMismatch,
    #[error("inverse of zero")]
    DivisionByZero,
    #[error("nonzero element with vanishing norm: radicals are not independent")]
    ZeroDivisor,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown radical {0:?}")]
    UnknownRadical(String),
    #[error("too many radicals ({0}); at most 31 are supported")]
    TooManyRadicals(usize),
    #[error("specialization makes a denominator vanish")]
    BadSpecialization,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadicalSet<F> {
    names: Vec<String>,
    squares: Vec<F>,
}

impl<F: Field> RadicalSet<F> {
    pub fn new(radicals: Vec<(String, F)>) -> Result<Arc<Self>, TowerError> {
        if radicals.len() > 31 {
            return Err(TowerError::TooManyRadicals(radicals.len()));
        }
        let (names, squares) = radicals.into_iter().unzip();
        Ok(Arc::new(RadicalSet { names, squares }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn square(&self, index: usize) -> &F {
        &self.squares[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << self.len()) - 1
    }

    /// Radicals whose bit is set in `mask`, as a new set.
    pub fn restrict(&self, mask: u32) -> Arc<Self> {
        let (names, squares) = (0..self.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (self.names[i].clone(), self.squares[i].clone()))
            .unzip();
        Arc::new(RadicalSet { names, squares })
    }

    pub fn map_squares<G: Field, M: Fn(&F) -> Option<G>>(&self, f: M) -> Option<Arc<RadicalSet<G>>> {
        let squares = self.squares.iter().map(f).collect::<Option<Vec<G>>>()?;
        Some(Arc::new(RadicalSet {
            names: self.names.clone(),
            squares,
        }))
    }
}

/// Tower layout for genus `g`: `i` then `s_jk` for `1 ≤ j < k ≤ 2g+1`.
pub fn hyperelliptic_radicals_with<F: Field>(genus: usize, root: impl Fn(usize) -> F) -> Result<Arc<RadicalSet<F>>, TowerError> {
    let n = 2 * genus + 1;
    let mut radicals = vec![("i".to_string(), -F::one())];
    for j in 1..=n {
        for k in j + 1..=n {
            radicals.push((format!("s{j}{k}"), root(j) - root(k)));
        }
    }
    RadicalSet::new(radicals)
}

/// The symbolic tower over `ℚ(a1, …, a_{2g+1})`.
pub fn hyperelliptic_radicals(genus: usize) -> Result<Arc<RadicalSet<QRationalFunction>>, TowerError> {
    hyperelliptic_radicals_with(genus, QRationalFunction::var)
}

/// Index of `s_jk` (`j < k`) in the hyperelliptic layout.
pub fn pair_radical_index(genus: usize, j: usize, k: usize) -> usize {
    let n = 2 * genus + 1;
    assert!(1 <= j && j < k && k <= n);
    let before: usize = (1..j).map(|r| n - r).sum();
    1 + before + (k - j - 1)
}

#[derive(Debug, Clone)]
pub struct TowerElement<F> {
    radicals: Arc<RadicalSet<F>>,
    coeffs: BTreeMap<u32, F>,
}

impl<F: Field> PartialEq for TowerElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.same_set(other) && self.coeffs == other.coeffs
    }
}

impl<F: Field> TowerElement<F> {
    pub fn zero(radicals: &Arc<RadicalSet<F>>) -> Self {
        TowerElement {
            radicals: radicals.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_base(radicals: &Arc<RadicalSet<F>>, c: F) -> Self {
        Self::monomial(radicals, 0, c)
    }

    pub fn one(radicals: &Arc<RadicalSet<F>>) -> Self {
        Self::from_base(radicals, F::one())
    }

    pub fn from_int(radicals: &Arc<RadicalSet<F>>, v: i64) -> Self {
        Self::from_base(radicals, F::from_int(v))
    }

    /// `c · ∏_{i ∈ mask} r_i`.
    pub fn monomial(radicals: &Arc<RadicalSet<F>>, mask: u32, c: F) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(mask, c);
        }
        TowerElement {
            radicals: radicals.clone(),
            coeffs,
        }
    }

    pub fn radical(radicals: &Arc<RadicalSet<F>>, index: usize) -> Self {
        Self::monomial(radicals, 1 << index, F::one())
    }

    pub fn from_coefficients(radicals: &Arc<RadicalSet<F>>, coeffs: impl IntoIterator<Item = (u32, F)>) -> Self {
        let mut e = Self::zero(radicals);
        for (m, c) in coeffs {
            e.add_term(m, c);
        }
        e
    }

    pub fn radicals(&self) -> &Arc<RadicalSet<F>> {
        &self.radicals
    }

    pub fn coefficients(&self) -> &BTreeMap<u32, F> {
        &self.coeffs
    }

    pub fn coefficient(&self, mask: u32) -> F {
        self.coeffs.get(&mask).cloned().unwrap_or_else(F::zero)
    }

    /// Union of the radical masks in the support.
    pub fn support_mask(&self) -> u32 {
        self.coeffs.keys().fold(0, |a, m| a | m)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coefficient(0).is_one()
    }

    /// The base-field value when the element lies in the base field.
    pub fn as_base(&self) -> Option<F> {
        match self.coeffs.len() {
            0 => Some(F::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    fn same_set(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.radicals, &other.radicals) || self.radicals == other.radicals
    }

    fn check(&self, other: &Self) -> Result<(), TowerError> {
        if self.same_set(other) {
            Ok(())
        } else {
            Err(TowerError::RadicalSetMismatch)
        }
    }

    fn add_term(&mut self, mask: u32, c: F) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(mask) {
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

    pub fn try_add(&self, other: &Self) -> Result<Self, TowerError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, TowerError> {
        self.try_add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        TowerElement {
            radicals: self.radicals.clone(),
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.radicals);
        }
        TowerElement {
            radicals: self.radicals.clone(),
            coeffs: self.coeffs.iter().map(|(m, x)| (*m, x.clone() * c.clone())).collect(),
        }
    }

    /// Product of the squares of the radicals in `mask`.
    fn square_product(&self, mask: u32) -> Option<F> {
        if mask == 0 {
            return None;
        }
        let mut acc = F::one();
        for i in 0..self.radicals.len() {
            if mask >> i & 1 == 1 {
                acc = acc * self.radicals.squares[i].clone();
            }
        }
        Some(acc)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, TowerError> {
        self.check(other)?;
        let mut out = Self::zero(&self.radicals);
        let mut square_cache: BTreeMap<u32, F> = BTreeMap::new();
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                let mut c = ca.clone() * cb.clone();
                let shared = ma & mb;
                if shared != 0 {
                    let sq = square_cache
                        .entry(shared)
                        .or_insert_with(|| self.square_product(shared).expect("nonempty mask"));
                    c = c * sq.clone();
                }
                out.add_term(ma ^ mb, c);
            }
        }
        Ok(out)
    }

    /// `r ↦ −r` for the radical at `index`.
    pub fn conjugate(&self, index: usize) -> Self {
        TowerElement {
            radicals: self.radicals.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| if m >> index & 1 == 1 { (*m, -c.clone()) } else { (*m, c.clone()) })
                .collect(),
        }
    }

    /// Inverse by successive conjugation: with `r` the top radical in the
    /// support, `a · ā` lies in the subtower without `r`.
    pub fn inverse(&self) -> Result<Self, TowerError> {
        if self.is_zero() {
            return Err(TowerError::DivisionByZero);
        }
        let support = self.support_mask();
        if support == 0 {
            let c = self.coefficient(0);
            return Ok(Self::from_base(&self.radicals, c.inverse().ok_or(TowerError::DivisionByZero)?));
        }
        let top = 31 - support.leading_zeros() as usize;
        let conj = self.conjugate(top);
        let norm = self.try_mul(&conj)?;
        if norm.is_zero() {
            return Err(TowerError::ZeroDivisor);
        }
        debug_assert_eq!(norm.support_mask() >> top & 1, 0);
        let norm_inv = norm.inverse()?;
        conj.try_mul(&norm_inv)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, TowerError> {
        self.try_mul(&other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.radicals);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The element rewritten over the radicals in `mask`, if every basis
    /// monomial in its support uses only those radicals.
    pub fn subtower_membership(&self, mask: u32) -> Option<TowerElement<F>> {
        if self.support_mask() & !mask != 0 {
            return None;
        }
        let sub = self.radicals.restrict(mask);
        let positions: Vec<usize> = (0..self.radicals.len()).filter(|i| mask >> i & 1 == 1).collect();
        let remap = |m: u32| {
            positions
                .iter()
                .enumerate()
                .fold(0u32, |acc, (new, &old)| acc | ((m >> old & 1) << new))
        };
        Some(TowerElement {
            radicals: sub,
            coeffs: self.coeffs.iter().map(|(m, c)| (remap(*m), c.clone())).collect(),
        })
    }

    /// Applies a base-field map coefficientwise into a tower with the same
    /// radical names over another field.
    pub fn map_base<G: Field, M: Fn(&F) -> Option<G>>(
        &self,
        target: &Arc<RadicalSet<G>>,
        f: M,
    ) -> Result<TowerElement<G>, TowerError> {
        if target.names != self.radicals.names {
            return Err(TowerError::RadicalSetMismatch);
        }
        let mut out = TowerElement::zero(target);
        for (m, c) in &self.coeffs {
            out.add_term(*m, f(c).ok_or(TowerError::BadSpecialization)?);
        }
        Ok(out)
    }
}

macro_rules! tower_ops {
    ($($tr:ident $m:ident $try:ident),*) => {$(
        impl<'a, F: Field> $tr<&'a TowerElement<F>> for &'a TowerElement<F> {
            type Output = TowerElement<F>;
            /// Panics on a radical-set mismatch; use the `try_` form to get an error.
            fn $m(self, rhs: &'a TowerElement<F>) -> TowerElement<F> {
                self.$try(rhs).expect("radical-set mismatch")
            }
        }
        impl<F: Field> $tr for TowerElement<F> {
            type Output = TowerElement<F>;
            fn $m(self, rhs: Self) -> TowerElement<F> {
                self.$try(&rhs).expect("radical-set mismatch")
            }
        }
    )*};
}
tower_ops!(Add add try_add, Sub sub try_sub, Mul mul try_mul);

impl<F: Field> Neg for &TowerElement<F> {
    type Output = TowerElement<F>;

    fn neg(self) -> TowerElement<F> {
        self.negate()
    }
}

impl<F: Field> Neg for TowerElement<F> {
    type Output = TowerElement<F>;

    fn neg(self) -> TowerElement<F> {
        self.negate()
    }
}

/// Symbolic tower elements over `ℚ(a1, …)`.
pub type SymbolicElement = TowerElement<QRationalFunction>;

impl<F: Field + fmt::Display> fmt::Display for TowerElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (mask, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let names: Vec<&str> = (0..self.radicals.len())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| self.radicals.name(k))
                .collect();
            let radicals = names.join("*");
            if *mask == 0 {
                let text = c.to_string();
                if is_atom(&text) {
                    write!(f, "{text}")?;
                } else {
                    write!(f, "({text})")?;
                }
            } else if c.is_one() {
                write!(f, "{radicals}")?;
            } else if (-c.clone()).is_one() {
                write!(f, "-{radicals}")?;
            } else {
                write!(f, "({c})*{radicals}")?;
            }
        }
        Ok(())
    }
}

fn is_atom(text: &str) -> bool {
    let body = text.strip_prefix('-').unwrap_or(text);
    !body.is_empty() && body.chars().all(|ch| ch.is_ascii_alphanumeric())
}

/// Parses the rendered syntax (and general `+ - * / ^ ( )` expressions in
/// `a<k>`, integers and the radical names) into an element of `radicals`.
pub fn parse_element(
    text: &str,
    radicals: &Arc<RadicalSet<QRationalFunction>>,
) -> Result<SymbolicElement, TowerError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        radicals,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    radicals: &'a Arc<RadicalSet<QRationalFunction>>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> TowerError {
        TowerError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<SymbolicElement, TowerError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SymbolicElement, TowerError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' { &acc * &rhs } else { acc.try_div(&rhs)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SymbolicElement, TowerError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<SymbolicElement, TowerError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            let e: u32 = digits.parse().map_err(|_| self.error("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<SymbolicElement, TowerError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let v: BigInt = d.parse().map_err(|_| self.error("bad integer"))?;
                Ok(SymbolicElement::from_base(
                    self.radicals,
                    QRationalFunction::constant(BigRational::from_integer(v)),
                ))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if let Some(k) = self.radicals.index_of(name) {
                    return Ok(SymbolicElement::radical(self.radicals, k));
                }
                if let Some(idx) = name.strip_prefix('a').and_then(|d| d.parse::<usize>().ok()) {
                    if idx >= 1 {
                        return Ok(SymbolicElement::from_base(self.radicals, QRationalFunction::var(idx)));
                    }
                }
                Err(TowerError::UnknownRadical(name.to_string()))
            }
            _ => Err(self.error("unexpected token")),
        }
    }
}

/// Whether every nonempty product of the radicands is a non-square, so
/// that the tower is a field of degree `2^len`. `None` when the base field
/// cannot decide squares.
pub fn tower_is_field<F: Field>(radicals: &RadicalSet<F>) -> Option<bool> {
    let k = radicals.len();
    for subset in 1u64..(1 << k) {
        let product = (0..k)
            .filter(|i| subset >> i & 1 == 1)
            .fold(F::one(), |acc, i| acc * radicals.square(i).clone());
        if product.is_square()? {
            return Some(false);
        }
    }
    Some(true)
}

/// Rational tower with the same radical names, `a_k ↦ point[k-1]`.
pub fn specialize_radicals(
    radicals: &RadicalSet<QRationalFunction>,
    point: &[BigRational],
) -> Result<Arc<RadicalSet<BigRational>>, TowerError> {
    radicals.map_squares(|c| c.eval(point)).ok_or(TowerError::BadSpecialization)
}

/// Evaluates every coefficient at `point`.
pub fn specialize(
    e: &SymbolicElement,
    target: &Arc<RadicalSet<BigRational>>,
    point: &[BigRational],
) -> Result<TowerElement<BigRational>, TowerError> {
    e.map_base(target, |c| c.eval(point))
}

/// Distinct integer roots in `[-bound, bound]` for which the rational
/// hyperelliptic tower of the given genus is a field.
pub fn random_field_roots<R: rand::Rng>(genus: usize, bound: i64, rng: &mut R) -> Vec<BigRational> {
    let n = 2 * genus + 1;
    loop {
        let mut roots: Vec<i64> = Vec::with_capacity(n);
        while roots.len() < n {
            let v = rng.gen_range(-bound..=bound);
            if !roots.contains(&v) {
                roots.push(v);
            }
        }
        let roots: Vec<BigRational> = roots.into_iter().map(|v| BigRational::from_integer(v.into())).collect();
        let radicals = hyperelliptic_radicals_with(genus, |i| roots[i - 1].clone()).expect("small genus");
        if tower_is_field(&radicals) == Some(true) {
            return roots;
        }
    }
}

/// Outcome of the square test for one product of root differences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareCheck {
    /// The pairs `(j, k)` whose differences `a_j − a_k` are multiplied.
    pub pairs: Vec<(usize, usize)>,
    pub with_minus_one: bool,
    /// Multiplicity of each pair's linear form in the product.
    pub multiplicities: Vec<u32>,
    pub is_square: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    pub genus: usize,
    pub checks: Vec<SquareCheck>,
    /// Subsets of differences (without `−1`) checked.
    pub subsets: usize,
    pub non_squares: usize,
    /// `log₂ [L₂ : L₁]` certified when every product is a non-square.
    pub certified_log_degree: Option<usize>,
}

impl IndependenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.is_square) && self.certified_log_degree == Some(2 * self.genus * self.genus + self.genus)
    }
}

/// Largest genus for which every subset is enumerated.
pub const MAX_INDEPENDENCE_GENUS: usize = 2;

/// For every nonempty subset of the differences `a_j − a_k`, decides whether
/// the product is a square in `ℚ(a)` from its factorization into the
/// (pairwise non-associate, irreducible) linear forms: the product is a
/// square iff every multiplicity is even and the remaining constant is a
/// rational square. With `include_minus_one`, the products times `−1` are
/// checked as well.
pub fn verify_radical_independence(genus: usize, include_minus_one: bool) -> IndependenceReport {
    assert!(genus >= 1 && genus <= MAX_INDEPENDENCE_GENUS, "genus out of range");
    type P = MultiPoly<BigRational>;
    let n = 2 * genus + 1;
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|j| (j + 1..=n).map(move |k| (j, k))).collect();
    let forms: Vec<P> = pairs.iter().map(|&(j, k)| &P::var(j) - &P::var(k)).collect();
    let count = pairs.len();
    let mut checks = Vec::new();
    let mut non_squares = 0;
    for subset in 1u64..(1 << count) {
        let chosen: Vec<usize> = (0..count).filter(|b| subset >> b & 1 == 1).collect();
        let product = chosen.iter().fold(P::one(), |acc, &b| &acc * &forms[b]);
        for minus in [false, true] {
            if minus && !include_minus_one {
                continue;
            }
            let mut rest = if minus { -&product } else { product.clone() };
            let mut multiplicities = vec![0u32; count];
            for (b, form) in forms.iter().enumerate() {
                while let Some(q) = rest.div_exact(form) {
                    rest = q;
                    multiplicities[b] += 1;
                }
            }
            assert!(rest.is_constant(), "product of linear forms must factor completely");
            let constant_square = rest.constant_term().is_square().expect("rationals decide squares");
            let is_square = multiplicities.iter().all(|m| m % 2 == 0) && constant_square;
            if !minus && !is_square {
                non_squares += 1;
            }
            checks.push(SquareCheck {
                pairs: chosen.iter().map(|&b| pairs[b]).collect(),
                with_minus_one: minus,
                multiplicities,
                is_square,
            });
        }
    }
    let subsets = (1usize << count) - 1;
    IndependenceReport {
        genus,
        subsets,
        non_squares,
        certified_log_degree: (non_squares == subsets).then_some(count),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn setup() -> Arc<RadicalSet<QRationalFunction>> {
        hyperelliptic_radicals(1).unwrap()
    }

    fn a(r: &Arc<RadicalSet<QRationalFunction>>, i: usize) -> SymbolicElement {
        SymbolicElement::from_base(r, QRationalFunction::var(i))
    }

    fn s(r: &Arc<RadicalSet<QRationalFunction>>, name: &str) -> SymbolicElement {
        SymbolicElement::radical(r, r.index_of(name).unwrap())
    }

    #[test]
    fn layout() {
        let r = setup();
        assert_eq!(r.names(), ["i", "s12", "s13", "s23"]);
        assert_eq!(pair_radical_index(1, 1, 2), 1);
        assert_eq!(pair_radical_index(1, 2, 3), 3);
        let r2 = hyperelliptic_radicals(2).unwrap();
        assert_eq!(r2.len(), 11);
        assert_eq!(r2.name(pair_radical_index(2, 3, 5)), "s35");
        assert_eq!(r2.name(pair_radical_index(2, 4, 5)), "s45");
    }

    #[test]
    fn multiplication_examples() {
        let r = setup();
        let (s12, s13, i) = (s(&r, "s12"), s(&r, "s13"), s(&r, "i"));
        assert_eq!(&s12 * &s12, &a(&r, 1) - &a(&r, 2));
        assert_eq!(&i * &i, SymbolicElement::from_int(&r, -1));
        assert_eq!(&(&s12 + &s13) * &(&s12 - &s13), &a(&r, 3) - &a(&r, 2));
    }

    #[test]
    fn inverse_examples() {
        let r = setup();
        let (s12, s13, i) = (s(&r, "s12"), s(&r, "s13"), s(&r, "i"));
        let d12 = (&a(&r, 1) - &a(&r, 2)).as_base().unwrap();
        assert_eq!(s12.inverse().unwrap(), s12.scale(&d12.inverse().unwrap()));
        let one = SymbolicElement::one(&r);
        let half = QRationalFunction::constant(BigRational::new(1.into(), 2.into()));
        assert_eq!((&one + &i).inverse().unwrap(), (&one - &i).scale(&half));
        let d = (&a(&r, 3) - &a(&r, 2)).as_base().unwrap();
        assert_eq!((&s12 + &s13).inverse().unwrap(), (&s12 - &s13).scale(&d.inverse().unwrap()));
        assert_eq!(SymbolicElement::zero(&r).inverse(), Err(TowerError::DivisionByZero));
    }

    #[test]
    fn zero_divisor_detected_in_degenerate_tower() {
        let q = |n: i64| BigRational::from_integer(n.into());
        let r = RadicalSet::new(vec![("t".to_string(), q(4))]).unwrap();
        let t = TowerElement::radical(&r, 0);
        let x = &t - &TowerElement::from_int(&r, 2);
        assert_eq!(x.inverse(), Err(TowerError::ZeroDivisor));
    }

    #[test]
    fn mismatch_is_an_error() {
        let r = setup();
        let other = hyperelliptic_radicals(2).unwrap();
        let x = SymbolicElement::one(&r);
        let y = SymbolicElement::one(&other);
        assert_eq!(x.try_mul(&y), Err(TowerError::RadicalSetMismatch));
        assert_eq!(x.try_add(&y), Err(TowerError::RadicalSetMismatch));
        // structurally equal sets are compatible
        let r_again = setup();
        assert!(x.try_mul(&SymbolicElement::one(&r_again)).is_ok());
    }

    #[test]
    fn subtower_examples() {
        let r = setup();
        let (s12, s13) = (s(&r, "s12"), s(&r, "s13"));
        let (i12, i13, i23) = (1u32 << 1, 1u32 << 2, 1u32 << 3);
        let p = &s12 * &s13;
        let sub = p.subtower_membership(i12 | i13).unwrap();
        assert_eq!(sub.radicals().names(), ["s12", "s13"]);
        assert_eq!(sub.coefficient(0b11), QRationalFunction::one());
        assert!(s12.subtower_membership(i13 | i23).is_none());
        let base = &a(&r, 1) + &s12.scale(&QRationalFunction::zero());
        assert!(base.subtower_membership(0).is_some());
    }

    #[test]
    fn render_and_parse() {
        let r = setup();
        let e = parse_element("(a1-a2)*s12*s13 + 1", &r).unwrap();
        assert_eq!(e.to_string(), "(a1 - a2)*s12*s13 + 1");
        assert_eq!(parse_element(&e.to_string(), &r).unwrap(), e);
        let f = parse_element("s12 / (a1 - a2) - i*s23 + 3/2*a1^2", &r).unwrap();
        assert_eq!(parse_element(&f.to_string(), &r).unwrap(), f);
        assert!(matches!(parse_element("s14", &r), Err(TowerError::UnknownRadical(_))));
        assert!(matches!(parse_element("(a1", &r), Err(TowerError::Parse { .. })));
        assert!(matches!(parse_element("a1 a2", &r), Err(TowerError::Parse { .. })));
    }

    #[test]
    fn independence_genus_one() {
        let rep = verify_radical_independence(1, false);
        assert_eq!(rep.subsets, 7);
        assert_eq!(rep.non_squares, 7);
        assert_eq!(rep.certified_log_degree, Some(3));
        assert!(rep.passed());
        let single = &rep.checks[0];
        assert_eq!(single.pairs, vec![(1, 2)]);
        assert_eq!(single.multiplicities, vec![1, 0, 0]);
        let with_i = verify_radical_independence(1, true);
        assert_eq!(with_i.checks.len(), 14);
        assert!(with_i.passed());
    }
}
