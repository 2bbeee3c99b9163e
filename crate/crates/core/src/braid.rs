//! Braid words on `2g+1` strands, their permutations, and the standard
//! pure-braid generators `A_ij`.
//!
//! Words are letter sequences only. Equality of braids is never decided
//! here; downstream checks compare images in the homology representation.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("letter {letter} out of range for {strands} strands")]
    LetterOutOfRange { letter: i32, strands: usize },
    #[error("pure braid generator indices ({i}, {j}) invalid for {strands} strands")]
    BadGeneratorIndices { i: usize, j: usize, strands: usize },
    #[error("cannot parse braid word: {0}")]
    Parse(String),
    #[error("braid words on different strand counts ({0} vs {1})")]
    StrandMismatch(usize, usize),
}

/// A word in `σ₁^{±1}, …, σ_{s-1}^{±1}`; letter `k > 0` is `σ_k`, `-k` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        for &letter in &letters {
            if letter == 0 || letter.unsigned_abs() as usize >= strands {
                return Err(BraidError::LetterOutOfRange { letter, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn empty(strands: usize) -> Self {
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    /// Parses the comma-separated syntax, e.g. `"1,2,-1"`; empty input is
    /// the empty word.
    pub fn parse(strands: usize, text: &str) -> Result<Self, BraidError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty(strands));
        }
        let letters = text
            .split(',')
            .map(|t| {
                i32::from_str(t.trim()).map_err(|_| BraidError::Parse(format!("bad letter {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch(self.strands, other.strands));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|k| -k).collect(),
        }
    }

    /// Cancels adjacent `k, -k` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut stack: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &k in &self.letters {
            if stack.last() == Some(&-k) {
                stack.pop();
            } else {
                stack.push(k);
            }
        }
        BraidWord {
            strands: self.strands,
            letters: stack,
        }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn permutation(&self) -> Permutation {
        permutation_of(self)
    }

    pub fn is_pure(&self) -> bool {
        is_pure(self)
    }

    /// Random word: length uniform in `[1, max_len]`, letters uniform over
    /// all `±k`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, strands: usize, max_len: usize) -> BraidWord {
        assert!(strands >= 2 && max_len >= 1);
        let len = rng.gen_range(1..=max_len);
        let top = (strands - 1) as i32;
        let letters = (0..len)
            .map(|_| {
                let k = rng.gen_range(1..=top);
                if rng.gen_bool(0.5) {
                    k
                } else {
                    -k
                }
            })
            .collect();
        BraidWord { strands, letters }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

/// A permutation of `{1, …, s}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// The transposition of the 1-based points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a - 1, b - 1);
        p
    }

    /// Builds from 1-based images; `None` unless bijective.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return None;
            }
            seen[v - 1] = true;
            out.push(v - 1);
        }
        Some(Permutation { images: out })
    }

    /// 1-based image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] + 1
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.images.len(), other.images.len());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// Image of `w` under `B_s → S_s`, `σ_i ↦ (i, i+1)`. Words act left to
/// right as composition: `perm(uv) = perm(u) ∘ perm(v)`.
pub fn permutation_of(w: &BraidWord) -> Permutation {
    let mut p = Permutation::identity(w.strands);
    for &k in &w.letters {
        let i = k.unsigned_abs() as usize;
        p = p.compose(&Permutation::transposition(w.strands, i, i + 1));
    }
    p
}

pub fn is_pure(w: &BraidWord) -> bool {
    permutation_of(w).is_identity()
}

/// `A_ij = σ_{j-1} ⋯ σ_{i+1} σ_i² σ_{i+1}⁻¹ ⋯ σ_{j-1}⁻¹` for `1 ≤ i < j ≤ s`.
pub fn pure_braid_generator(strands: usize, i: usize, j: usize) -> Result<BraidWord, BraidError> {
    if !(1 <= i && i < j && j <= strands) {
        return Err(BraidError::BadGeneratorIndices { i, j, strands });
    }
    let conj: Vec<i32> = (i + 1..j).rev().map(|k| k as i32).collect();
    let mut letters = conj.clone();
    letters.push(i as i32);
    letters.push(i as i32);
    letters.extend(conj.iter().rev().map(|k| -k));
    BraidWord::new(strands, letters)
}

/// All `A_ij` in lexicographic order of `(i, j)`; there are `s(s-1)/2`.
pub fn pure_braid_generators(strands: usize) -> Vec<((usize, usize), BraidWord)> {
    let mut out = Vec::new();
    for i in 1..strands {
        for j in i + 1..=strands {
            out.push(((i, j), pure_braid_generator(strands, i, j).expect("indices in range")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(strands: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(strands, letters.to_vec()).unwrap()
    }

    #[test]
    fn free_reduction_examples() {
        assert!(w(5, &[1, -1]).free_reduce().is_empty());
        assert_eq!(w(5, &[2, 1, -1, 2]).free_reduce(), w(5, &[2, 2]));
        assert_eq!(w(5, &[1, 2, -2, -1, 3]).free_reduce(), w(5, &[3]));
    }

    #[test]
    fn permutation_examples() {
        assert!(permutation_of(&BraidWord::empty(3)).is_identity());
        assert_eq!(permutation_of(&w(3, &[1])), Permutation::transposition(3, 1, 2));
        assert!(permutation_of(&w(3, &[1, 1])).is_identity());
        assert_eq!(Permutation::from_images(&[2, 1, 3]), Some(Permutation::transposition(3, 1, 2)));
        assert_eq!(Permutation::from_images(&[1, 1, 3]), None);
    }

    #[test]
    fn pure_generators() {
        assert_eq!(pure_braid_generator(3, 1, 2).unwrap(), w(3, &[1, 1]));
        assert_eq!(pure_braid_generator(3, 1, 3).unwrap(), w(3, &[2, 1, 1, -2]));
        assert_eq!(pure_braid_generator(5, 2, 5).unwrap(), w(5, &[4, 3, 2, 2, -3, -4]));
        assert_eq!(pure_braid_generators(5).len(), 10);
        assert!(is_pure(&w(3, &[1, 1])));
        assert!(!is_pure(&w(3, &[1])));
        assert!(is_pure(&pure_braid_generator(3, 1, 3).unwrap()));
        assert!(pure_braid_generator(3, 2, 2).is_err());
        assert!(pure_braid_generator(3, 1, 4).is_err());
        for s in [3, 5, 7, 9] {
            assert!(pure_braid_generators(s).iter().all(|(_, a)| a.is_pure()));
        }
    }

    #[test]
    fn parsing() {
        assert_eq!(BraidWord::parse(3, "1,2,-1").unwrap(), w(3, &[1, 2, -1]));
        assert_eq!(BraidWord::parse(3, " 1 , -2 ").unwrap(), w(3, &[1, -2]));
        assert!(BraidWord::parse(3, "").unwrap().is_empty());
        assert!(matches!(BraidWord::parse(3, "1,x"), Err(BraidError::Parse(_))));
        assert!(matches!(BraidWord::parse(3, "3"), Err(BraidError::LetterOutOfRange { .. })));
        assert!(matches!(BraidWord::parse(3, "0"), Err(BraidError::LetterOutOfRange { .. })));
        assert_eq!(w(5, &[1, -3, 2]).to_string(), "1,-3,2");
    }

    fn word_strategy(strands: usize) -> impl Strategy<Value = BraidWord> {
        let top = (strands - 1) as i32;
        prop::collection::vec((1..=top, any::<bool>()), 0..30).prop_map(move |v| {
            BraidWord::new(strands, v.into_iter().map(|(k, s)| if s { k } else { -k }).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn permutation_is_a_homomorphism(u in word_strategy(7), v in word_strategy(7)) {
            let uv = u.concat(&v).unwrap();
            prop_assert_eq!(permutation_of(&uv), permutation_of(&u).compose(&permutation_of(&v)));
        }

        #[test]
        fn reduction_preserves_permutation(u in word_strategy(5)) {
            let r = u.free_reduce();
            prop_assert!(r.is_freely_reduced());
            prop_assert_eq!(permutation_of(&r), permutation_of(&u));
            prop_assert!(u.concat(&u.inverse()).unwrap().free_reduce().is_empty());
        }
    }
}
