//! Breadth-first closure of matrix groups mod 2ⁿ and the order-based
//! checks built on it: the image of the pure braid group against
//! `|Γ(2)/Γ(2ⁿ)|`, the image of the full braid group mod 2, and the
//! `Γ(2)/Γ(4)` log map with its F₂ rank.

use std::hash::Hash;
use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::braid::pure_braid_generators;
use crate::homology::{rep_word, GeneratorImages};
use crate::modring::{
    chain_form, congruence_level, encoded_len, gamma_quotient_order, is_symplectic, sp_group_order,
    symplectic_inverse, Matrix, Modulus,
};

/// Largest matrix size handled by the closure engine (genus 4).
pub const MAX_DIM: usize = 8;
pub const DEFAULT_MAX_ELEMENTS: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("closure limit reached: more than {limit} elements")]
    LimitReached { limit: usize },
    #[error("closure memory estimate exceeds {limit_bytes} bytes")]
    MemoryLimitReached { limit_bytes: u64 },
    #[error("generator {0} is not symplectic mod the working modulus")]
    NotSymplectic(usize),
    #[error("generator {index} has size {size}, expected {expected}")]
    SizeMismatch { index: usize, size: usize, expected: usize },
    #[error("genus {0} unsupported by the closure engine (max {max})", max = MAX_DIM / 2)]
    GenusOutOfRange(usize),
    #[error("matrix is not congruent to the identity mod 2")]
    NotInGammaTwo,
    #[error("level {0} outside the supported range 1..=6")]
    LevelOutOfRange(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureLimits {
    pub max_elements: usize,
    pub max_memory_bytes: Option<u64>,
}

impl Default for ClosureLimits {
    fn default() -> Self {
        ClosureLimits {
            max_elements: DEFAULT_MAX_ELEMENTS,
            max_memory_bytes: None,
        }
    }
}

/// Reduced matrix in a fixed-size buffer. Entries live in `[0, 2ⁿ)` and
/// products use wrapping `u8` arithmetic, exact mod 2ⁿ for `n ≤ 8`.
#[derive(Clone, Copy)]
struct Packed {
    dim: usize,
    e: [u8; MAX_DIM * MAX_DIM],
}

impl Packed {
    fn from_matrix(m: &Matrix<i64>, q: Modulus) -> Packed {
        let r = m.reduce(q);
        let mut e = [0u8; MAX_DIM * MAX_DIM];
        for (i, x) in r.entries().iter().enumerate() {
            e[i] = *x as u8;
        }
        Packed { dim: m.size(), e }
    }

    fn to_matrix(self) -> Matrix<i64> {
        let n = self.dim;
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| self.e[i * n + j] as i64).collect()).collect();
        Matrix::from_rows(&rows)
    }

    fn mul(&self, rhs: &Packed, mask: u8) -> Packed {
        let n = self.dim;
        let mut e = [0u8; MAX_DIM * MAX_DIM];
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    e[i * n + j] = e[i * n + j].wrapping_add(a.wrapping_mul(rhs.e[k * n + j]));
                }
            }
        }
        for x in e[..n * n].iter_mut() {
            *x &= mask;
        }
        Packed { dim: n, e }
    }
}

/// Hash-set key: the canonical packed encoding.
trait Key: Clone + Hash + Eq + Ord + Send + Sync {
    fn pack(m: &Packed, bits: u32) -> Self;
    fn unpack(&self, dim: usize, bits: u32) -> Packed;
    fn bytes(&self, len: usize) -> Vec<u8>;
}

impl Key for u128 {
    fn pack(m: &Packed, bits: u32) -> Self {
        let mut k = 0u128;
        for (i, &x) in m.e[..m.dim * m.dim].iter().enumerate() {
            k |= (x as u128) << (i as u32 * bits);
        }
        k
    }

    fn unpack(&self, dim: usize, bits: u32) -> Packed {
        let mask = (1u128 << bits) - 1;
        let mut e = [0u8; MAX_DIM * MAX_DIM];
        for (i, x) in e[..dim * dim].iter_mut().enumerate() {
            *x = ((self >> (i as u32 * bits)) & mask) as u8;
        }
        Packed { dim, e }
    }

    fn bytes(&self, len: usize) -> Vec<u8> {
        self.to_le_bytes()[..len].to_vec()
    }
}

impl Key for Vec<u8> {
    fn pack(m: &Packed, bits: u32) -> Self {
        let bits = bits as usize;
        let mut out = vec![0u8; (m.dim * m.dim * bits).div_ceil(8)];
        for (i, &x) in m.e[..m.dim * m.dim].iter().enumerate() {
            for b in 0..bits {
                if (x >> b) & 1 == 1 {
                    let p = i * bits + b;
                    out[p / 8] |= 1 << (p % 8);
                }
            }
        }
        out
    }

    fn unpack(&self, dim: usize, bits: u32) -> Packed {
        let bits = bits as usize;
        let mut e = [0u8; MAX_DIM * MAX_DIM];
        for (i, x) in e[..dim * dim].iter_mut().enumerate() {
            for b in 0..bits {
                let p = i * bits + b;
                *x |= ((self[p / 8] >> (p % 8)) & 1) << b;
            }
        }
        Packed { dim, e }
    }

    fn bytes(&self, _len: usize) -> Vec<u8> {
        self.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ElementSet {
    Word(Vec<u128>),
    Bytes(Vec<Vec<u8>>),
}

/// A finite matrix group mod 2ⁿ enumerated in full.
#[derive(Debug, Clone)]
pub struct GroupClosure {
    pub genus: usize,
    pub modulus: Modulus,
    pub generators: Vec<Matrix<i64>>,
    elements: ElementSet,
}

impl GroupClosure {
    pub fn order(&self) -> usize {
        match &self.elements {
            ElementSet::Word(v) => v.len(),
            ElementSet::Bytes(v) => v.len(),
        }
    }

    fn bits(&self) -> u32 {
        self.modulus.exponent()
    }

    pub fn contains(&self, m: &Matrix<i64>) -> bool {
        if m.size() != 2 * self.genus {
            return false;
        }
        let p = Packed::from_matrix(m, self.modulus);
        match &self.elements {
            ElementSet::Word(v) => v.binary_search(&u128::pack(&p, self.bits())).is_ok(),
            ElementSet::Bytes(v) => v.binary_search(&Vec::<u8>::pack(&p, self.bits())).is_ok(),
        }
    }

    /// Every element as a reduced matrix, in canonical key order.
    pub fn matrices(&self) -> Box<dyn Iterator<Item = Matrix<i64>> + '_> {
        let dim = 2 * self.genus;
        let bits = self.bits();
        match &self.elements {
            ElementSet::Word(v) => Box::new(v.iter().map(move |k| k.unpack(dim, bits).to_matrix())),
            ElementSet::Bytes(v) => Box::new(v.iter().map(move |k| k.unpack(dim, bits).to_matrix())),
        }
    }

    /// Canonical encodings as lowercase hex, sorted.
    pub fn dump_lines(&self) -> Vec<String> {
        let len = encoded_len(2 * self.genus, self.modulus);
        let mut lines: Vec<String> = match &self.elements {
            ElementSet::Word(v) => v.iter().map(|k| hex::encode(k.bytes(len))).collect(),
            ElementSet::Bytes(v) => v.iter().map(|k| hex::encode(k.bytes(len))).collect(),
        };
        lines.sort_unstable();
        lines
    }

    pub fn write_dump(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        for line in self.dump_lines() {
            writeln!(f, "{line}")?;
        }
        f.flush()
    }

    /// Number of elements with congruence level 0 (not ≡ I mod 2).
    pub fn count_outside_gamma_two(&self) -> usize {
        self.matrices().filter(|m| congruence_level(m, self.modulus) == 0).count()
    }
}

/// BFS closure of `gens` (and their inverses) mod 2ⁿ.
pub fn closure(
    genus: usize,
    gens: &[Matrix<i64>],
    modulus: Modulus,
    limits: ClosureLimits,
) -> Result<GroupClosure, ClosureError> {
    if genus == 0 || 2 * genus > MAX_DIM {
        return Err(ClosureError::GenusOutOfRange(genus));
    }
    let dim = 2 * genus;
    let form = chain_form::<i64>(genus);
    let mut all = Vec::with_capacity(2 * gens.len());
    for (index, g) in gens.iter().enumerate() {
        if g.size() != dim {
            return Err(ClosureError::SizeMismatch {
                index,
                size: g.size(),
                expected: dim,
            });
        }
        let g = g.reduce(modulus);
        let inv = symplectic_inverse(&g, &form, Some(modulus)).map_err(|_| ClosureError::NotSymplectic(index))?;
        all.push(Packed::from_matrix(&g, modulus));
        all.push(Packed::from_matrix(&inv, modulus));
    }
    let total_bits = dim * dim * modulus.exponent() as usize;
    let elements = if total_bits <= 128 {
        ElementSet::Word(bfs::<u128>(dim, &all, modulus, limits)?)
    } else {
        ElementSet::Bytes(bfs::<Vec<u8>>(dim, &all, modulus, limits)?)
    };
    Ok(GroupClosure {
        genus,
        modulus,
        generators: gens.iter().map(|g| g.reduce(modulus)).collect(),
        elements,
    })
}

fn bfs<K: Key>(dim: usize, gens: &[Packed], modulus: Modulus, limits: ClosureLimits) -> Result<Vec<K>, ClosureError> {
    let bits = modulus.exponent();
    let mask = modulus.mask();
    let identity = Packed::from_matrix(&Matrix::identity(dim), modulus);
    let per_entry = (std::mem::size_of::<K>() + encoded_len(dim, modulus)) as u64 * 2;
    let start = K::pack(&identity, bits);
    let mut visited: FxHashSet<K> = FxHashSet::default();
    visited.insert(start.clone());
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let seen = &visited;
        let fresh: FxHashSet<K> = frontier
            .par_chunks(1024)
            .map(|chunk| {
                let mut local = FxHashSet::default();
                for k in chunk {
                    let m = k.unpack(dim, bits);
                    for g in gens {
                        let child = K::pack(&g.mul(&m, mask), bits);
                        if !seen.contains(&child) {
                            local.insert(child);
                        }
                    }
                }
                local
            })
            .reduce(FxHashSet::default, |a, b| {
                let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
                big.extend(small);
                big
            });
        if visited.len() + fresh.len() > limits.max_elements {
            return Err(ClosureError::LimitReached {
                limit: limits.max_elements,
            });
        }
        if let Some(limit_bytes) = limits.max_memory_bytes {
            if (visited.len() + fresh.len()) as u64 * per_entry > limit_bytes {
                return Err(ClosureError::MemoryLimitReached { limit_bytes });
            }
        }
        frontier = fresh.into_iter().collect();
        visited.extend(frontier.iter().cloned());
    }
    let mut out: Vec<K> = visited.into_iter().collect();
    out.par_sort_unstable();
    Ok(out)
}

/// `R(σ_1), …, R(σ_{2g})` mod 2ⁿ.
pub fn sigma_generators(genus: usize, modulus: Modulus) -> Vec<Matrix<i64>> {
    GeneratorImages::<i64>::new(genus, Some(modulus)).positive
}

/// `R(A_ij)` mod 2ⁿ for all `i < j`, in lexicographic order.
pub fn pure_generator_images(genus: usize, modulus: Modulus) -> Vec<Matrix<i64>> {
    pure_braid_generators(2 * genus + 1)
        .iter()
        .map(|(_, w)| rep_word::<i64>(w, genus, Some(modulus)).expect("strand count matches genus"))
        .collect()
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCheck {
    pub genus: usize,
    pub level: u32,
    pub expected: BigUint,
    pub computed: BigUint,
    /// Order divides `|Sp(2g, ℤ/2ⁿ)|`.
    pub lagrange: bool,
    pub details: Vec<String>,
    pub passed: bool,
}

fn lagrange(genus: usize, level: u32, order: &BigUint) -> bool {
    !order.is_zero() && (sp_group_order(genus as u32, level) % order).is_zero()
}

/// Pure-braid image mod 2ⁿ: order must equal `|Γ(2)/Γ(2ⁿ)|` with every
/// element ≡ I mod 2.
pub fn verify_theorem_level(genus: usize, level: u32, limits: ClosureLimits) -> Result<(OrderCheck, GroupClosure), ClosureError> {
    let q = Modulus::new(level).map_err(|_| ClosureError::LevelOutOfRange(level))?;
    verify_theorem_level_with(genus, q, &pure_generator_images(genus, q), limits)
}

pub fn verify_theorem_level_with(
    genus: usize,
    modulus: Modulus,
    gens: &[Matrix<i64>],
    limits: ClosureLimits,
) -> Result<(OrderCheck, GroupClosure), ClosureError> {
    let level = modulus.exponent();
    let c = closure(genus, gens, modulus, limits)?;
    let computed = BigUint::from(c.order());
    let expected = gamma_quotient_order(genus as u32, level);
    let outside = c.count_outside_gamma_two();
    let lagrange = lagrange(genus, level, &computed);
    let details = vec![
        format!("generators: {} pure braid images A_ij mod 2^{level}", gens.len()),
        format!("elements not congruent to I mod 2: {outside}"),
        format!("order divides |Sp(2g, Z/2^{level})|: {lagrange}"),
    ];
    let passed = computed == expected && outside == 0 && lagrange;
    Ok((
        OrderCheck {
            genus,
            level,
            expected,
            computed,
            lagrange,
            details,
            passed,
        },
        c,
    ))
}

/// Image of `B_{2g+1}` mod 2 has order `(2g+1)!`; for `g = 1` it is all of
/// `Sp(2, F₂)`.
pub fn verify_mod2_quotient(genus: usize) -> Result<OrderCheck, ClosureError> {
    let q = Modulus::new(1).expect("level 1");
    verify_mod2_quotient_with(genus, &sigma_generators(genus, q))
}

pub fn verify_mod2_quotient_with(genus: usize, gens: &[Matrix<i64>]) -> Result<OrderCheck, ClosureError> {
    let q = Modulus::new(1).expect("level 1");
    let c = closure(genus, gens, q, ClosureLimits::default())?;
    let computed = BigUint::from(c.order());
    let expected = factorial(2 * genus as u32 + 1);
    let sp = sp_group_order(genus as u32, 1);
    let lagrange = lagrange(genus, 1, &computed);
    let mut details = vec![
        format!("|S_{}| = {expected}", 2 * genus + 1),
        format!("|Sp({}, F_2)| = {sp}", 2 * genus),
    ];
    let mut passed = computed == expected && lagrange;
    if genus == 1 {
        let full = computed == sp;
        details.push(format!("image is all of Sp(2, F_2) = SL(2, F_2): {full}"));
        passed &= full;
    } else {
        details.push(format!("proper subgroup of index {}", &sp / &expected));
    }
    Ok(OrderCheck {
        genus,
        level: 1,
        expected,
        computed,
        lagrange,
        details,
        passed,
    })
}

/// Genus 1: the braid image mod 2ⁿ is all of `Sp(2, ℤ/2ⁿ)`.
pub fn verify_g1_full_sp(level: u32) -> Result<OrderCheck, ClosureError> {
    let q = Modulus::new(level).map_err(|_| ClosureError::LevelOutOfRange(level))?;
    verify_g1_full_sp_with(q, &sigma_generators(1, q))
}

pub fn verify_g1_full_sp_with(modulus: Modulus, gens: &[Matrix<i64>]) -> Result<OrderCheck, ClosureError> {
    let level = modulus.exponent();
    let c = closure(1, gens, modulus, ClosureLimits::default())?;
    let computed = BigUint::from(c.order());
    let expected = sp_group_order(1, level);
    let lagrange = lagrange(1, level, &computed);
    Ok(OrderCheck {
        genus: 1,
        level,
        details: vec![format!("|Sp(2, Z/2^{level})| = {expected}")],
        passed: computed == expected,
        expected,
        computed,
        lagrange,
    })
}

/// An F₂-matrix `A` with `AᵀE + EA ≡ 0`, stored row-major as bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieAlgebraVector {
    size: usize,
    bits: Vec<u8>,
}

impl LieAlgebraVector {
    pub fn zero(size: usize) -> Self {
        LieAlgebraVector {
            size,
            bits: vec![0; size * size],
        }
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let size = rows.len();
        let bits = rows.iter().flat_map(|r| r.as_ref().iter().map(|b| b & 1)).collect::<Vec<_>>();
        assert_eq!(bits.len(), size * size);
        LieAlgebraVector { size, bits }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.bits[r * self.size + c]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        LieAlgebraVector {
            size: self.size,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    /// `AᵀE + EA ≡ 0 (mod 2)` for the chain form.
    pub fn in_lie_algebra(&self) -> bool {
        let g = self.size / 2;
        let e = chain_form::<i64>(g);
        let a = Matrix::<i64>::from_rows(&self.bits.chunks(self.size).map(|r| r.iter().map(|&b| b as i64).collect::<Vec<_>>()).collect::<Vec<_>>());
        let lhs = crate::modring::mat_mul(&a.transpose(), &e, None).unwrap();
        let rhs = crate::modring::mat_mul(&e, &a, None).unwrap();
        lhs.entries().iter().zip(rhs.entries()).all(|(x, y)| (x + y) % 2 == 0)
    }

    /// Row-major bit vector, bit `r·size + c` set iff `A[r][c] = 1`.
    pub fn flatten(&self) -> u128 {
        assert!(self.bits.len() <= 128);
        self.bits
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &b)| acc | ((b as u128) << i))
    }
}

/// `M = I + 2A ↦ A mod 2` on `Γ(2)/Γ(4)`. Accepts any representative
/// whose reduction mod 4 is meaningful (exact or reduced mod 2ⁿ, n ≥ 2).
pub fn log_map(m: &Matrix<i64>) -> Result<LieAlgebraVector, ClosureError> {
    let n = m.size();
    let mut bits = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let d = (m.get(i, j) - i64::from(i == j)).rem_euclid(4);
            if d % 2 != 0 {
                return Err(ClosureError::NotInGammaTwo);
            }
            bits.push((d / 2) as u8);
        }
    }
    Ok(LieAlgebraVector { size: n, bits })
}

/// Rank over F₂ of bit vectors.
pub fn f2_rank(rows: &[u128]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            let pivot = 127 - b.leading_zeros();
            if (v >> pivot) & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// F₂-rank of the log-mapped pure braid generator images.
pub fn gamma2mod4_rank(genus: usize) -> usize {
    let q = Modulus::new(2).expect("level 2");
    let vs: Vec<u128> = pure_generator_images(genus, q)
        .iter()
        .map(|m| log_map(m).expect("pure braids are trivial mod 2").flatten())
        .collect();
    f2_rank(&vs)
}

/// Dimension over F₂ of `{A : AᵀE + EA ≡ 0}`, by elimination on the
/// linear system itself.
pub fn lie_algebra_dimension(genus: usize) -> usize {
    let n = 2 * genus;
    assert!(n * n <= 128, "genus too large for 128-bit rows");
    let e = chain_form::<i64>(genus);
    // (AᵀE + EA)[r][c] = Σ_k A[k][r] E[k][c] + E[r][k] A[k][c]
    let mut equations = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut row = 0u128;
            for k in 0..n {
                if e.get(k, c) % 2 != 0 {
                    row ^= 1 << (k * n + r);
                }
                if e.get(r, k) % 2 != 0 {
                    row ^= 1 << (k * n + c);
                }
            }
            equations.push(row);
        }
    }
    n * n - f2_rank(&equations)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankCheck {
    pub genus: usize,
    pub expected: usize,
    pub rank: usize,
    pub lie_dimension: usize,
    pub passed: bool,
}

pub fn verify_gamma2mod4_rank(genus: usize) -> RankCheck {
    let q = Modulus::new(2).expect("level 2");
    verify_gamma2mod4_rank_with(genus, &pure_generator_images(genus, q))
}

pub fn verify_gamma2mod4_rank_with(genus: usize, gens: &[Matrix<i64>]) -> RankCheck {
    let expected = 2 * genus * genus + genus;
    let logs: Option<Vec<LieAlgebraVector>> = gens.iter().map(|m| log_map(m).ok()).collect();
    let (rank, in_algebra) = match &logs {
        Some(v) => (f2_rank(&v.iter().map(|a| a.flatten()).collect::<Vec<_>>()), v.iter().all(|a| a.in_lie_algebra())),
        None => (0, false),
    };
    let lie_dimension = lie_algebra_dimension(genus);
    RankCheck {
        genus,
        expected,
        rank,
        lie_dimension,
        passed: in_algebra && rank == expected && lie_dimension == expected,
    }
}

/// Whether every generator is symplectic mod the modulus (pre-check used
/// by callers that want a report instead of an error).
pub fn generators_symplectic(genus: usize, gens: &[Matrix<i64>], modulus: Modulus) -> bool {
    let e = chain_form::<i64>(genus);
    gens.iter().all(|g| is_symplectic(&g.reduce(modulus), &e, Some(modulus)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::pure_braid_generator;

    fn q(n: u32) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn trivial_closure() {
        let c = closure(1, &[Matrix::identity(2)], q(3), ClosureLimits::default()).unwrap();
        assert_eq!(c.order(), 1);
        assert!(c.contains(&Matrix::identity(2)));
    }

    #[test]
    fn small_closures() {
        assert_eq!(closure(1, &sigma_generators(1, q(1)), q(1), ClosureLimits::default()).unwrap().order(), 6);
        assert_eq!(closure(2, &sigma_generators(2, q(1)), q(1), ClosureLimits::default()).unwrap().order(), 120);
    }

    #[test]
    fn limit_is_an_error_not_a_truncation() {
        let err = closure(1, &sigma_generators(1, q(3)), q(3), ClosureLimits { max_elements: 100, max_memory_bytes: None });
        assert_eq!(err.unwrap_err(), ClosureError::LimitReached { limit: 100 });
        let err = closure(1, &sigma_generators(1, q(3)), q(3), ClosureLimits { max_elements: 1000, max_memory_bytes: Some(64) });
        assert!(matches!(err, Err(ClosureError::MemoryLimitReached { .. })));
    }

    #[test]
    fn non_symplectic_generator_rejected() {
        let bad = Matrix::<i64>::from_i64_rows(&[[1, 1], [1, 1]]);
        assert_eq!(
            closure(1, &[bad], q(2), ClosureLimits::default()).unwrap_err(),
            ClosureError::NotSymplectic(0)
        );
    }

    #[test]
    fn theorem_small_levels() {
        for (g, n, order) in [(1usize, 2u32, 8usize), (1, 3, 64), (1, 4, 512), (2, 2, 1024)] {
            let (check, c) = verify_theorem_level(g, n, ClosureLimits::default()).unwrap();
            assert!(check.passed, "{check:?}");
            assert_eq!(c.order(), order);
        }
    }

    #[test]
    fn quotient_and_full_sp() {
        for (g, order) in [(1usize, 6u32), (2, 120)] {
            let r = verify_mod2_quotient(g).unwrap();
            assert!(r.passed);
            assert_eq!(r.computed, BigUint::from(order));
        }
        for (n, order) in [(1u32, 6u32), (2, 48), (3, 384)] {
            let r = verify_g1_full_sp(n).unwrap();
            assert!(r.passed);
            assert_eq!(r.computed, BigUint::from(order));
        }
    }

    #[test]
    fn log_map_examples() {
        assert!(log_map(&Matrix::identity(2)).unwrap().is_zero());
        let a12 = Matrix::<i64>::from_i64_rows(&[[1, -2], [0, 1]]);
        assert_eq!(log_map(&a12).unwrap(), LieAlgebraVector::from_rows(&[[0, 1], [0, 0]]));
        let a13 = Matrix::<i64>::from_i64_rows(&[[3, -2], [2, -1]]);
        assert_eq!(log_map(&a13).unwrap(), LieAlgebraVector::from_rows(&[[1, 1], [1, 1]]));
        assert_eq!(
            log_map(&Matrix::<i64>::from_i64_rows(&[[1, -1], [0, 1]])),
            Err(ClosureError::NotInGammaTwo)
        );
        // A13 image computed through the representation agrees
        let w = pure_braid_generator(3, 1, 3).unwrap();
        let m = rep_word::<i64>(&w, 1, Some(q(2))).unwrap();
        assert_eq!(log_map(&m).unwrap(), LieAlgebraVector::from_rows(&[[1, 1], [1, 1]]));
    }

    #[test]
    fn ranks_and_dimensions() {
        let g1 = [0b0010u128, 0b0100, 0b1111];
        assert_eq!(f2_rank(&g1), 3);
        assert_eq!(f2_rank(&[0b11, 0b01, 0b10]), 2);
        assert_eq!(f2_rank(&[0, 0]), 0);
        for (g, r) in [(1, 3), (2, 10), (3, 21)] {
            assert_eq!(gamma2mod4_rank(g), r);
        }
        for g in 1..=4 {
            assert_eq!(lie_algebra_dimension(g), 2 * g * g + g);
        }
    }

    #[test]
    fn log_map_is_additive_on_closure() {
        use rand::{Rng, SeedableRng};
        for g in 1..=2 {
            let (_, c) = verify_theorem_level(g, 2, ClosureLimits::default()).unwrap();
            let els: Vec<_> = c.matrices().collect();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
            for _ in 0..500 {
                let a = &els[rng.gen_range(0..els.len())];
                let b = &els[rng.gen_range(0..els.len())];
                let ab = crate::modring::mat_mul(a, b, Some(q(2))).unwrap();
                let la = log_map(a).unwrap();
                let lb = log_map(b).unwrap();
                assert_eq!(log_map(&ab).unwrap(), la.add(&lb));
                assert!(la.in_lie_algebra());
            }
        }
    }

    #[test]
    fn dump_matches_encoding() {
        let c = closure(1, &sigma_generators(1, q(1)), q(1), ClosureLimits::default()).unwrap();
        let lines = c.dump_lines();
        assert_eq!(lines.len(), 6);
        assert!(lines.contains(&"09".to_string()));
        for m in c.matrices() {
            let enc = crate::modring::encode(&m, q(1)).unwrap();
            assert!(lines.contains(&hex::encode(enc)));
        }
    }

    #[test]
    fn wide_keys_use_byte_path() {
        // 6x6 mod 8 needs 108 bits; 8x8 mod 4 needs 128; 6x6 mod 16 needs 144.
        let gens = sigma_generators(3, q(4));
        let c = closure(3, &gens[..1], q(4), ClosureLimits::default()).unwrap();
        assert_eq!(c.order(), 16);
        assert!(c.contains(&gens[0]));
        assert!(!c.contains(&gens[1]));
        assert_eq!(c.dump_lines()[0].len(), 2 * encoded_len(6, q(4)));
    }
}
