//! The symplectic representation `B_{2g+1} → Sp(2g, ℤ)` sending `σ_i` to
//! the transvection along the i-th cycle of a chain `c₁, …, c_{2g}` with
//! `⟨c_i, c_{i+1}⟩ = 1`.
//!
//! Convention: `T_v(x) = x + ⟨x, v⟩ v`, and `R(σ_i) = T_{c_i}`. Words are
//! evaluated left to right, `R(uv) = R(u) R(v)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::braid::{is_pure, BraidWord};
use crate::modring::{chain_form, mat_mul, Matrix, Modulus};
use crate::scalar::IntScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("transvection along the zero vector")]
    ZeroVector,
    #[error("vector length {got} does not match form size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("word on {strands} strands cannot act on genus {genus} homology")]
    StrandMismatch { strands: usize, genus: usize },
}

/// `xᵀ E y`.
pub fn pairing<T: IntScalar>(x: &[T], y: &[T], form: &Matrix<T>) -> Result<T, HomologyError> {
    let n = form.size();
    for v in [x, y] {
        if v.len() != n {
            return Err(HomologyError::LengthMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let mut s = T::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            let e = form.get(i, j);
            if !e.is_zero() && !y[j].is_zero() {
                s = s + x[i].clone() * e.clone() * y[j].clone();
            }
        }
    }
    Ok(s)
}

/// The i-th chain cycle `c_i` (1-based) as a coordinate vector.
pub fn chain_cycle<T: IntScalar>(genus: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); 2 * genus];
    v[i - 1] = T::one();
    v
}

fn transvection_with_sign<T: IntScalar>(v: &[T], form: &Matrix<T>, sign: T) -> Result<Matrix<T>, HomologyError> {
    let n = form.size();
    if v.len() != n {
        return Err(HomologyError::LengthMismatch {
            expected: n,
            got: v.len(),
        });
    }
    if v.iter().all(|x| x.is_zero()) {
        return Err(HomologyError::ZeroVector);
    }
    // column j is e_j + sign·⟨e_j, v⟩·v, i.e. T = I + sign·v (E v)ᵀ
    let ev: Vec<T> = (0..n)
        .map(|j| (0..n).fold(T::zero(), |acc, k| acc + form.get(j, k).clone() * v[k].clone()))
        .collect();
    let mut t = Matrix::<T>::identity(n);
    for r in 0..n {
        for c in 0..n {
            let d = sign.clone() * v[r].clone() * ev[c].clone();
            if !d.is_zero() {
                t.set(r, c, t.get(r, c).clone() + d);
            }
        }
    }
    Ok(t)
}

/// Matrix of `T_v(x) = x + ⟨x, v⟩ v`.
pub fn transvection_matrix<T: IntScalar>(v: &[T], form: &Matrix<T>) -> Result<Matrix<T>, HomologyError> {
    transvection_with_sign(v, form, T::one())
}

/// Matrix of `T_v⁻¹(x) = x − ⟨x, v⟩ v`.
pub fn inverse_transvection_matrix<T: IntScalar>(v: &[T], form: &Matrix<T>) -> Result<Matrix<T>, HomologyError> {
    transvection_with_sign(v, form, -T::one())
}

/// `R(σ_1), …, R(σ_{2g})` together with their inverses, optionally reduced.
#[derive(Debug, Clone)]
pub struct GeneratorImages<T> {
    pub genus: usize,
    pub modulus: Option<Modulus>,
    pub positive: Vec<Matrix<T>>,
    pub negative: Vec<Matrix<T>>,
}

impl<T: IntScalar> GeneratorImages<T> {
    pub fn new(genus: usize, modulus: Option<Modulus>) -> Self {
        let form = chain_form::<T>(genus);
        let reduce = |m: Matrix<T>| match modulus {
            Some(q) => m.reduce(q),
            None => m,
        };
        let mut positive = Vec::with_capacity(2 * genus);
        let mut negative = Vec::with_capacity(2 * genus);
        for i in 1..=2 * genus {
            let c = chain_cycle::<T>(genus, i);
            positive.push(reduce(transvection_matrix(&c, &form).expect("chain cycle is nonzero")));
            negative.push(reduce(inverse_transvection_matrix(&c, &form).expect("chain cycle is nonzero")));
        }
        GeneratorImages {
            genus,
            modulus,
            positive,
            negative,
        }
    }

    pub fn letter(&self, k: i32) -> &Matrix<T> {
        let i = k.unsigned_abs() as usize - 1;
        if k > 0 {
            &self.positive[i]
        } else {
            &self.negative[i]
        }
    }

    pub fn evaluate(&self, w: &BraidWord) -> Result<Matrix<T>, HomologyError> {
        if w.strands() != 2 * self.genus + 1 {
            return Err(HomologyError::StrandMismatch {
                strands: w.strands(),
                genus: self.genus,
            });
        }
        let mut acc = Matrix::identity(2 * self.genus);
        for &k in w.letters() {
            acc = mat_mul(&acc, self.letter(k), self.modulus).expect("square matrices of equal size");
        }
        Ok(acc)
    }
}

/// `R(w)`, exact when `modulus` is `None` and reduced mod 2ⁿ otherwise.
pub fn rep_word<T: IntScalar>(w: &BraidWord, genus: usize, modulus: Option<Modulus>) -> Result<Matrix<T>, HomologyError> {
    GeneratorImages::new(genus, modulus).evaluate(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    /// `σ_i σ_{i+1} σ_i = σ_{i+1} σ_i σ_{i+1}`
    Braid,
    /// `σ_i σ_j = σ_j σ_i` for `|i − j| ≥ 2`
    Commute,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub kind: RelationKind,
    pub i: usize,
    pub j: usize,
    pub holds: bool,
}

impl RelationCheck {
    pub fn describe(&self) -> String {
        let verdict = if self.holds { "pass" } else { "FAIL" };
        match self.kind {
            RelationKind::Braid => format!(
                "s{i} s{j} s{i} = s{j} s{i} s{j}: {verdict}",
                i = self.i,
                j = self.j
            ),
            RelationKind::Commute => format!("s{} s{} = s{} s{}: {verdict}", self.i, self.j, self.j, self.i),
        }
    }
}

/// Checks every defining relation of `B_{2g+1}` as exact integer matrix
/// equality on the given generator images.
pub fn check_braid_relations<T: IntScalar>(images: &GeneratorImages<T>) -> Vec<RelationCheck> {
    let n = 2 * images.genus;
    let q = images.modulus;
    let prod = |ks: &[usize]| {
        ks.iter().fold(Matrix::identity(n), |acc, &k| {
            mat_mul(&acc, &images.positive[k - 1], q).expect("equal sizes")
        })
    };
    let mut out = Vec::new();
    for i in 1..n {
        out.push(RelationCheck {
            kind: RelationKind::Braid,
            i,
            j: i + 1,
            holds: prod(&[i, i + 1, i]) == prod(&[i + 1, i, i + 1]),
        });
    }
    for i in 1..=n {
        for j in i + 2..=n {
            out.push(RelationCheck {
                kind: RelationKind::Commute,
                i,
                j,
                holds: prod(&[i, j]) == prod(&[j, i]),
            });
        }
    }
    out
}

pub fn verify_braid_relations(genus: usize) -> Vec<RelationCheck> {
    check_braid_relations(&GeneratorImages::<num_bigint::BigInt>::new(genus, None))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurityReport {
    pub genus: usize,
    pub samples: usize,
    pub seed: u64,
    pub pure_samples: usize,
    /// Words where purity and triviality mod 2 disagree.
    pub counterexamples: Vec<BraidWord>,
}

impl PurityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

pub const PURITY_MAX_WORD_LEN: usize = 40;

/// Samples random words and checks `w pure ⟺ R(w) ≡ I (mod 2)`.
///
/// Every fourth sample is conjugated into the pure braid group (a random
/// word times a random pure generator times its inverse), so both sides of
/// the equivalence are exercised.
pub fn purity_mod2_property(genus: usize, samples: usize, seed: u64) -> PurityReport {
    purity_mod2_with(&GeneratorImages::<i64>::new(genus, Some(Modulus::new(1).unwrap())), samples, seed)
}

pub fn purity_mod2_with(images: &GeneratorImages<i64>, samples: usize, seed: u64) -> PurityReport {
    let genus = images.genus;
    let strands = 2 * genus + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = crate::braid::pure_braid_generators(strands);
    let mut report = PurityReport {
        genus,
        samples,
        seed,
        pure_samples: 0,
        counterexamples: Vec::new(),
    };
    for s in 0..samples {
        let w = if s % 4 == 3 {
            use rand::Rng;
            let u = BraidWord::random(&mut rng, strands, PURITY_MAX_WORD_LEN / 4);
            let a = &gens[rng.gen_range(0..gens.len())].1;
            u.concat(a).and_then(|x| x.concat(&u.inverse())).expect("same strands")
        } else {
            BraidWord::random(&mut rng, strands, PURITY_MAX_WORD_LEN)
        };
        let pure = is_pure(&w);
        let trivial = images.evaluate(&w).expect("strands match").is_identity();
        if pure {
            report.pure_samples += 1;
        }
        if pure != trivial {
            report.counterexamples.push(w);
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticSampleReport {
    pub genus: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_len: usize,
    pub failures: Vec<BraidWord>,
}

impl SymplecticSampleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `R(w)ᵀ E R(w) = E` over ℤ for random words of length `1..=max_len`.
pub fn verify_symplectic_words(genus: usize, samples: usize, max_len: usize, seed: u64) -> SymplecticSampleReport {
    let images = GeneratorImages::<num_bigint::BigInt>::new(genus, None);
    let form = chain_form::<num_bigint::BigInt>(genus);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let w = BraidWord::random(&mut rng, 2 * genus + 1, max_len);
        let m = images.evaluate(&w).expect("strands match");
        if !crate::modring::is_symplectic(&m, &form, None) {
            failures.push(w);
        }
    }
    SymplecticSampleReport {
        genus,
        samples,
        seed,
        max_len,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::pure_braid_generator;
    use crate::modring::{congruence_level, is_symplectic};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type M = Matrix<BigInt>;

    fn word(g: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(2 * g + 1, letters.to_vec()).unwrap()
    }

    #[test]
    fn pairing_on_chain() {
        let e = chain_form::<i64>(2);
        let c = |i| chain_cycle::<i64>(2, i);
        assert_eq!(pairing(&c(1), &c(2), &e).unwrap(), 1);
        assert_eq!(pairing(&c(2), &c(1), &e).unwrap(), -1);
        assert_eq!(pairing(&c(1), &c(1), &e).unwrap(), 0);
        assert_eq!(pairing(&c(1), &c(3), &e).unwrap(), 0);
        assert!(pairing(&[1i64, 0], &c(1), &e).is_err());
    }

    #[test]
    fn transvection_examples() {
        let e = chain_form::<BigInt>(1);
        let t1 = transvection_matrix(&chain_cycle::<BigInt>(1, 1), &e).unwrap();
        let t2 = transvection_matrix(&chain_cycle::<BigInt>(1, 2), &e).unwrap();
        assert_eq!(t1, M::from_i64_rows(&[[1, -1], [0, 1]]));
        assert_eq!(t2, M::from_i64_rows(&[[1, 0], [1, 1]]));
        assert_eq!(
            transvection_matrix(&[BigInt::from(0), BigInt::from(0)], &e),
            Err(HomologyError::ZeroVector)
        );
    }

    #[test]
    fn transvection_squares_are_trivial_mod_two() {
        let e = chain_form::<i64>(2);
        let q2 = Modulus::new(1).unwrap();
        for v in [[1i64, 0, 0, 0], [1, 1, 0, 0], [2, -1, 3, 1], [0, 0, 5, 7]] {
            let t = transvection_matrix(&v, &e).unwrap();
            assert!(is_symplectic(&t, &e, None));
            let sq = mat_mul(&t, &t, Some(q2)).unwrap();
            assert!(sq.is_identity());
            // fixes the orthogonal complement of v
            for x in [[1i64, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]] {
                if pairing(&x, &v, &e).unwrap() == 0 {
                    let tx: Vec<i64> = (0..4).map(|r| (0..4).map(|c| t.get(r, c) * x[c]).sum()).collect();
                    assert_eq!(tx, x.to_vec());
                }
            }
        }
    }

    #[test]
    fn representation_examples() {
        assert!(rep_word::<BigInt>(&word(1, &[]), 1, None).unwrap().is_identity());
        let a13 = pure_braid_generator(3, 1, 3).unwrap();
        assert_eq!(
            rep_word::<BigInt>(&a13, 1, None).unwrap(),
            M::from_i64_rows(&[[3, -2], [2, -1]])
        );
        let lhs = rep_word::<BigInt>(&word(1, &[1, 2, 1]), 1, None).unwrap();
        let rhs = rep_word::<BigInt>(&word(1, &[2, 1, 2]), 1, None).unwrap();
        let rot = M::from_i64_rows(&[[0, -1], [1, 0]]);
        assert_eq!(lhs, rot);
        assert_eq!(rhs, rot);
        assert!(matches!(
            rep_word::<BigInt>(&word(2, &[1]), 1, None),
            Err(HomologyError::StrandMismatch { .. })
        ));
    }

    #[test]
    fn relations_hold_for_small_genus() {
        for g in 1..=4 {
            let checks = verify_braid_relations(g);
            let n = 2 * g;
            assert_eq!(checks.len(), n * (n - 1) / 2);
            assert!(checks.iter().all(|c| c.holds), "genus {g}");
        }
    }

    #[test]
    fn purity_examples() {
        let q2 = Some(Modulus::new(1).unwrap());
        assert!(rep_word::<i64>(&word(1, &[1, 1]), 1, q2).unwrap().is_identity());
        assert!(!rep_word::<i64>(&word(1, &[1]), 1, q2).unwrap().is_identity());
        let r = purity_mod2_property(2, 400, 11);
        assert!(r.passed());
        assert!(r.pure_samples >= 100);
    }

    #[test]
    fn pure_generators_land_in_level_two() {
        let q = Modulus::new(3).unwrap();
        for g in 1..=3 {
            for (_, a) in crate::braid::pure_braid_generators(2 * g + 1) {
                let m = rep_word::<BigInt>(&a, g, Some(q)).unwrap();
                assert!(congruence_level(&m, q) >= 1);
            }
        }
    }

    fn word_strategy(genus: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
        let top = (2 * genus) as i32;
        prop::collection::vec((1..=top, any::<bool>()), 0..max_len).prop_map(move |v| {
            BraidWord::new(2 * genus + 1, v.into_iter().map(|(k, s)| if s { k } else { -k }).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn homomorphism_and_symplecticity(u in word_strategy(2, 20), v in word_strategy(2, 20)) {
            let ru = rep_word::<BigInt>(&u, 2, None).unwrap();
            let rv = rep_word::<BigInt>(&v, 2, None).unwrap();
            let ruv = rep_word::<BigInt>(&u.concat(&v).unwrap(), 2, None).unwrap();
            prop_assert_eq!(&ruv, &mat_mul(&ru, &rv, None).unwrap());
            prop_assert!(is_symplectic(&ruv, &chain_form(2), None));
            prop_assert_eq!(ruv.determinant(), BigInt::from(1));
        }

        #[test]
        fn reduction_commutes(u in word_strategy(3, 30), n in 1u32..=6) {
            let q = Modulus::new(n).unwrap();
            let exact = rep_word::<BigInt>(&u, 3, None).unwrap();
            let reduced = rep_word::<i64>(&u, 3, Some(q)).unwrap();
            prop_assert_eq!(exact.reduce(q).convert::<i64>().unwrap(), reduced);
        }

        #[test]
        fn free_reduction_preserves_image(u in word_strategy(2, 30)) {
            prop_assert_eq!(
                rep_word::<BigInt>(&u, 2, None).unwrap(),
                rep_word::<BigInt>(&u.free_reduce(), 2, None).unwrap()
            );
        }
    }
}
