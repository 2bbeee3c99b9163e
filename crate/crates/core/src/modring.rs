//! Square integer matrices, their reductions mod 2ⁿ, the chain symplectic
//! form and closed-form orders of `Sp(2g, ℤ/2ⁿ)`.
//!
//! # Byte encoding
//!
//! A matrix reduced mod 2ⁿ is encoded row-major with `n` bits per entry.
//! Entry `e` (row-major index) occupies stream bits `e·n .. e·n + n`, least
//! significant bit first, and stream bit `p` is bit `p % 8` of byte `p / 8`.
//! The encoding has `ceil(size²·n / 8)` bytes and unused high bits of the
//! last byte are zero.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::IntScalar;

pub const MAX_LEVEL: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("matrix is not symplectic for the given form")]
    NotSymplectic,
    #[error("modulus exponent {0} outside 1..={MAX_LEVEL}")]
    LevelOutOfRange(u32),
    #[error("matrix entries are not reduced mod 2^{0}")]
    NotReduced(u32),
    #[error("expected an even matrix size, got {0}")]
    OddSize(usize),
    #[error("encoding has wrong length: expected {expected} bytes, got {actual}")]
    BadEncoding { expected: usize, actual: usize },
}

/// The modulus 2ⁿ with 1 ≤ n ≤ 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus {
    exponent: u32,
}

impl Modulus {
    pub fn new(exponent: u32) -> Result<Self, MatrixError> {
        if (1..=MAX_LEVEL).contains(&exponent) {
            Ok(Modulus { exponent })
        } else {
            Err(MatrixError::LevelOutOfRange(exponent))
        }
    }

    pub fn exponent(self) -> u32 {
        self.exponent
    }

    pub fn value(self) -> u64 {
        1u64 << self.exponent
    }

    pub fn mask(self) -> u8 {
        ((1u16 << self.exponent) - 1) as u8
    }

    pub(crate) fn as_scalar<T: IntScalar>(self) -> T {
        T::from_u64(self.value()).expect("2^n fits every IntScalar")
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.exponent)
    }
}

/// A dense square matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    size: usize,
    entries: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn zero(size: usize) -> Self {
        Matrix {
            size,
            entries: vec![T::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.entries[i * size + i] = T::one();
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are not square.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Self {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), size, "rows must form a square matrix");
            entries.extend_from_slice(row);
        }
        Matrix { size, entries }
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<T>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| T::from_i64_exact(v)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.entries[row * self.size + col] = value;
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size)
    }

    /// Entrywise reduction into `[0, 2ⁿ)`.
    pub fn reduce(&self, m: Modulus) -> Self {
        let q: T = m.as_scalar();
        Matrix {
            size: self.size,
            entries: self.entries.iter().map(|x| x.mod_floor(&q)).collect(),
        }
    }

    pub fn is_reduced(&self, m: Modulus) -> bool {
        let q: T = m.as_scalar();
        self.entries.iter().all(|x| !x.is_negative() && *x < q)
    }

    pub fn mul(&self, other: &Self, m: Option<Modulus>) -> Result<Self, MatrixError> {
        mat_mul(self, other, m)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.size != other.size {
            return Err(MatrixError::SizeMismatch(self.size, other.size));
        }
        Ok(Matrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            size: self.size,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Converts between integer scalar types; `None` if an entry does not fit.
    pub fn convert<U: IntScalar>(&self) -> Option<Matrix<U>> {
        let entries = self
            .entries
            .iter()
            .map(|x| x.to_i128().and_then(U::from_i128))
            .collect::<Option<Vec<U>>>()?;
        Some(Matrix {
            size: self.size,
            entries,
        })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> T {
        let n = self.size;
        if n == 0 {
            return T::one();
        }
        let mut a = self.entries.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return T::zero();
                };
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j].clone() * a[k * n + k].clone()
                        - a[i * n + k].clone() * a[k * n + j].clone();
                    a[i * n + j] = v / prev.clone();
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * a[n * n - 1].clone()
    }
}

impl<T: IntScalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.size.max(1)).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Exact product `a·b`, reduced mod 2ⁿ when a modulus is given.
pub fn mat_mul<T: IntScalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    m: Option<Modulus>,
) -> Result<Matrix<T>, MatrixError> {
    if a.size != b.size {
        return Err(MatrixError::SizeMismatch(a.size, b.size));
    }
    let n = a.size;
    let mut out = Matrix::<T>::zero(n);
    for i in 0..n {
        for k in 0..n {
            let aik = &a.entries[i * n + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                let bkj = &b.entries[k * n + j];
                if !bkj.is_zero() {
                    out.entries[i * n + j] = out.entries[i * n + j].clone() + aik.clone() * bkj.clone();
                }
            }
        }
    }
    Ok(match m {
        Some(m) => out.reduce(m),
        None => out,
    })
}

/// The chain intersection form: `E[i][i+1] = 1`, `E[i+1][i] = -1` for
/// consecutive indices, zero elsewhere.
pub fn chain_form<T: IntScalar>(genus: usize) -> Matrix<T> {
    let n = 2 * genus;
    let mut e = Matrix::zero(n);
    for i in 0..n.saturating_sub(1) {
        e.set(i, i + 1, T::one());
        e.set(i + 1, i, -T::one());
    }
    e
}

/// The standard block form `[[0, I], [-I, 0]]`.
pub fn standard_form<T: IntScalar>(genus: usize) -> Matrix<T> {
    let n = 2 * genus;
    let mut j = Matrix::zero(n);
    for i in 0..genus {
        j.set(i, genus + i, T::one());
        j.set(genus + i, i, -T::one());
    }
    j
}

fn check_form<T: IntScalar>(m: &Matrix<T>, form: &Matrix<T>) -> Result<(), MatrixError> {
    if m.size != form.size {
        return Err(MatrixError::SizeMismatch(m.size, form.size));
    }
    if m.size % 2 != 0 {
        return Err(MatrixError::OddSize(m.size));
    }
    Ok(())
}

/// `Mᵀ E M == E`, exactly or mod 2ⁿ. Size mismatches are reported as `false`.
pub fn is_symplectic<T: IntScalar>(m: &Matrix<T>, form: &Matrix<T>, modulus: Option<Modulus>) -> bool {
    if check_form(m, form).is_err() {
        return false;
    }
    let lhs = mat_mul(&m.transpose(), form, None)
        .and_then(|x| mat_mul(&x, m, modulus))
        .expect("sizes checked");
    match modulus {
        Some(q) => lhs == form.reduce(q),
        None => lhs == *form,
    }
}

/// Inverse of an E-symplectic matrix as `E⁻¹ Mᵀ E`.
pub fn symplectic_inverse<T: IntScalar>(
    m: &Matrix<T>,
    form: &Matrix<T>,
    modulus: Option<Modulus>,
) -> Result<Matrix<T>, MatrixError> {
    check_form(m, form)?;
    if !is_symplectic(m, form, modulus) {
        return Err(MatrixError::NotSymplectic);
    }
    // E is unimodular, so E⁻¹ is integral.
    let e_inv = unimodular_inverse(form).ok_or(MatrixError::NotSymplectic)?;
    let r = mat_mul(&e_inv, &m.transpose(), None)?;
    mat_mul(&r, form, modulus)
}

/// Exact inverse of an integer matrix with determinant ±1, via
/// Gauss–Jordan over ℚ followed by an integrality check.
fn unimodular_inverse<T: IntScalar>(m: &Matrix<T>) -> Option<Matrix<T>> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let n = m.size;
    let to_q = |x: &T| BigRational::from_integer(BigInt::from(x.to_i128().expect("form entries are small")));
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| to_q(m.get(i, j))).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let v = &a[c][k] * &f;
                    a[r][k] = &a[r][k] - v;
                }
            }
        }
    }
    let mut out = Matrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let q = &a[i][n + j];
            if !q.is_integer() {
                return None;
            }
            out.set(i, j, T::from_i128(q.to_integer().to_i128()?)?);
        }
    }
    Some(out)
}

/// Largest `k ≤ n` with `M ≡ I (mod 2^k)`.
pub fn congruence_level<T: IntScalar>(m: &Matrix<T>, modulus: Modulus) -> u32 {
    let q: T = modulus.as_scalar();
    let n = m.size;
    let mut level = modulus.exponent();
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { T::one() } else { T::zero() };
            let d = (m.get(i, j).clone() - delta).mod_floor(&q);
            if d.is_zero() {
                continue;
            }
            let v = d.to_u64().expect("reduced residue").trailing_zeros();
            level = level.min(v);
        }
    }
    level
}

/// `|Sp(2g, ℤ/2ⁿ)| = 2^{g²} ∏_{i=1}^{g} (2^{2i} − 1) · 2^{(n−1)·g(2g+1)}`.
pub fn sp_group_order(genus: u32, level: u32) -> BigUint {
    assert!(genus >= 1 && level >= 1, "genus and level must be positive");
    let two = BigUint::from(2u32);
    let mut order = two.pow(genus * genus);
    for i in 1..=genus {
        order *= two.pow(2 * i) - BigUint::one();
    }
    order * gamma_quotient_order(genus, level)
}

/// `|Sp(2g, F₂)|` by testing all `2^{4g²}` matrices over F₂ (`g ≤ 2`).
pub fn sp_order_brute_force(genus: usize) -> u64 {
    let n = 2 * genus;
    assert!((1..=2).contains(&genus), "brute force is limited to genus 1 and 2");
    let form = chain_form::<i64>(genus);
    let q = Modulus::new(1).expect("level 1");
    (0u32..1 << (n * n))
        .filter(|bits| {
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|i| (0..n).map(|j| i64::from(bits >> (i * n + j) & 1)).collect())
                .collect();
            is_symplectic(&Matrix::from_rows(&rows), &form, Some(q))
        })
        .count() as u64
}

/// `|Γ(2)/Γ(2ⁿ)| = 2^{(n−1)·g(2g+1)}`.
pub fn gamma_quotient_order(genus: u32, level: u32) -> BigUint {
    assert!(genus >= 1 && level >= 1, "genus and level must be positive");
    BigUint::from(2u32).pow((level - 1) * genus * (2 * genus + 1))
}

pub fn encoded_len(size: usize, m: Modulus) -> usize {
    (size * size * m.exponent() as usize).div_ceil(8)
}

/// Canonical packed encoding of a reduced matrix; see the module docs.
pub fn encode<T: IntScalar>(mat: &Matrix<T>, m: Modulus) -> Result<Vec<u8>, MatrixError> {
    if !mat.is_reduced(m) {
        return Err(MatrixError::NotReduced(m.exponent()));
    }
    let bits = m.exponent() as usize;
    let mut out = vec![0u8; encoded_len(mat.size, m)];
    for (e, x) in mat.entries.iter().enumerate() {
        let v = x.to_u64().expect("reduced entry");
        for b in 0..bits {
            if (v >> b) & 1 == 1 {
                let p = e * bits + b;
                out[p / 8] |= 1 << (p % 8);
            }
        }
    }
    Ok(out)
}

pub fn decode<T: IntScalar>(bytes: &[u8], size: usize, m: Modulus) -> Result<Matrix<T>, MatrixError> {
    let expected = encoded_len(size, m);
    if bytes.len() != expected {
        return Err(MatrixError::BadEncoding {
            expected,
            actual: bytes.len(),
        });
    }
    let bits = m.exponent() as usize;
    let entries = (0..size * size)
        .map(|e| {
            let v = (0..bits).fold(0u64, |acc, b| {
                let p = e * bits + b;
                acc | ((((bytes[p / 8] >> (p % 8)) & 1) as u64) << b)
            });
            T::from_u64(v).expect("small residue")
        })
        .collect();
    Ok(Matrix { size, entries })
}

/// Integral change of basis `P` with `Pᵀ E P = J`, where `E` is the chain
/// form and `J` the standard block form. Columns of `P` are the new basis
/// vectors written in the chain basis.
pub fn chain_to_standard_basis<T: IntScalar>(genus: usize) -> Matrix<T> {
    let n = 2 * genus;
    let form = chain_form::<T>(genus);
    let pair = |x: &[T], y: &[T]| -> T {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                s = s + x[i].clone() * form.get(i, j).clone() * y[j].clone();
            }
        }
        s
    };
    let mut pool: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let mut xs = Vec::with_capacity(genus);
    let mut ys = Vec::with_capacity(genus);
    while !pool.is_empty() {
        let x = pool.remove(0);
        let k = pool
            .iter()
            .position(|y| pair(&x, y).abs().is_one())
            .expect("unimodular form always admits a partner");
        let mut y = pool.remove(k);
        if pair(&x, &y).is_negative() {
            y = y.into_iter().map(|v| -v).collect();
        }
        // project the remaining vectors off span(x, y)
        for v in pool.iter_mut() {
            let a = pair(v, &y);
            let b = pair(&x, v);
            for i in 0..n {
                v[i] = v[i].clone() - a.clone() * x[i].clone() - b.clone() * y[i].clone();
            }
        }
        xs.push(x);
        ys.push(y);
    }
    let mut p = Matrix::zero(n);
    for (c, v) in xs.iter().chain(ys.iter()).enumerate() {
        for r in 0..n {
            p.set(r, c, v[r].clone());
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type M = Matrix<BigInt>;

    fn m(rows: &[[i64; 2]]) -> M {
        M::from_i64_rows(rows)
    }

    #[test]
    fn multiplication_examples() {
        let a = m(&[[1, -1], [0, 1]]);
        let b = m(&[[1, 0], [1, 1]]);
        assert_eq!(mat_mul(&M::identity(2), &a, None).unwrap(), a);
        assert_eq!(mat_mul(&a, &b, None).unwrap(), m(&[[0, -1], [1, 1]]));
        let q4 = Modulus::new(2).unwrap();
        assert_eq!(mat_mul(&a, &a, Some(q4)).unwrap(), m(&[[1, 2], [0, 1]]));
        assert_eq!(
            mat_mul(&a, &M::identity(4), None),
            Err(MatrixError::SizeMismatch(2, 4))
        );
    }

    #[test]
    fn symplectic_checks_and_inverses() {
        let e = chain_form::<BigInt>(1);
        assert_eq!(e, m(&[[0, 1], [-1, 0]]));
        assert!(is_symplectic(&M::identity(2), &e, None));
        let t = m(&[[1, -1], [0, 1]]);
        assert!(is_symplectic(&t, &e, None));
        assert!(!is_symplectic(&m(&[[2, 0], [0, 1]]), &e, None));
        assert_eq!(symplectic_inverse(&M::identity(2), &e, None).unwrap(), M::identity(2));
        assert_eq!(symplectic_inverse(&t, &e, None).unwrap(), m(&[[1, 1], [0, 1]]));
        let a13 = m(&[[3, -2], [2, -1]]);
        let inv = symplectic_inverse(&a13, &e, None).unwrap();
        // adjugate of a det-1 2x2 matrix
        assert_eq!(inv, m(&[[-1, 2], [-2, 3]]));
        assert!(mat_mul(&a13, &inv, None).unwrap().is_identity());
        assert_eq!(
            symplectic_inverse(&m(&[[2, 0], [0, 1]]), &e, None),
            Err(MatrixError::NotSymplectic)
        );
    }

    #[test]
    fn inverse_mod_power_of_two() {
        let e = chain_form::<i64>(2);
        let q = Modulus::new(3).unwrap();
        let t = Matrix::<i64>::from_i64_rows(&[[1, 0, 0, 0], [1, 1, -1, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        let t = mat_mul(&t, &t, Some(q)).unwrap();
        let inv = symplectic_inverse(&t, &e, Some(q)).unwrap();
        assert!(mat_mul(&t, &inv, Some(q)).unwrap().is_identity());
        assert!(mat_mul(&inv, &t, Some(q)).unwrap().is_identity());
    }

    #[test]
    fn levels() {
        let q8 = Modulus::new(3).unwrap();
        let q4 = Modulus::new(2).unwrap();
        assert_eq!(congruence_level(&M::identity(2), q8), 3);
        assert_eq!(congruence_level(&m(&[[1, 2], [0, 1]]), q8), 1);
        assert_eq!(congruence_level(&m(&[[0, 3], [1, 0]]), q4), 0);
        assert_eq!(congruence_level(&m(&[[5, 0], [0, 5]]), q8), 2);
    }

    #[test]
    fn group_orders() {
        assert_eq!(sp_group_order(1, 1), BigUint::from(6u32));
        assert_eq!(sp_group_order(2, 1), BigUint::from(720u32));
        assert_eq!(sp_group_order(1, 2), BigUint::from(48u32));
        assert_eq!(sp_group_order(1, 3), BigUint::from(384u32));
        assert_eq!(gamma_quotient_order(1, 2), BigUint::from(8u32));
        for g in 1..=6 {
            assert_eq!(gamma_quotient_order(g, 2), BigUint::from(2u32).pow(2 * g * g + g));
        }
    }

    #[test]
    fn encoding_layout() {
        let q2 = Modulus::new(1).unwrap();
        assert_eq!(encode(&M::identity(2), q2).unwrap(), vec![0b1001]);
        let q8 = Modulus::new(3).unwrap();
        // entries 1,2,3,4: bits 100 010 110 001 -> stream 1000 1011 0001
        let x = m(&[[1, 2], [3, 4]]);
        let bytes = encode(&x, q8).unwrap();
        assert_eq!(bytes, vec![0b1101_0001, 0b0000_1000]);
        assert_eq!(decode::<BigInt>(&bytes, 2, q8).unwrap(), x);
        assert_eq!(encode(&m(&[[8, 0], [0, 1]]), q8), Err(MatrixError::NotReduced(3)));
        assert!(decode::<BigInt>(&[0], 2, q8).is_err());
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(m(&[[3, -2], [2, -1]]).determinant(), BigInt::from(1));
        let a = M::from_i64_rows(&[[0, 2, 1], [1, 0, 0], [3, 1, 5]]);
        assert_eq!(a.determinant(), BigInt::from(-9));
    }

    #[test]
    fn base_change_to_block_form() {
        for g in 1..=4 {
            let p = chain_to_standard_basis::<BigInt>(g);
            let e = chain_form::<BigInt>(g);
            let lhs = mat_mul(&mat_mul(&p.transpose(), &e, None).unwrap(), &p, None).unwrap();
            assert_eq!(lhs, standard_form::<BigInt>(g), "genus {g}");
            assert!(num_traits::Signed::abs(&p.determinant()).is_one());
        }
    }
}
