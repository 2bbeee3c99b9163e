//! Finite-level verification of the 2-adic monodromy of the hyperelliptic
//! family `y² = (x − α₁)⋯(x − α_{2g+1})`.
//!
//! The matrix layer is generic over an exact integer type and the
//! function-field layer over an exact field; the aliases below fix the
//! concrete choices used by the verifications.

pub mod braid;
pub mod group_enum;
pub mod homology;
pub mod modring;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod torsion;
pub mod tower;

pub use braid::{BraidWord, Permutation};
pub use modring::{Matrix, Modulus};
pub use scalar::{Field, IntScalar};

/// Exact integer matrices.
pub type IntMatrix = Matrix<num_bigint::BigInt>;
/// Matrices with small entries, used for residues mod 2ⁿ.
pub type SmallMatrix = Matrix<i64>;
/// Polynomials in `a1, a2, …` over ℚ.
pub type QPoly = poly::MultiPoly<num_rational::BigRational>;
/// Rational functions in `a1, a2, …` over ℚ.
pub type QRatFunc = ratfunc::RationalFunction<num_rational::BigRational>;
/// Tower elements over the symbolic base field.
pub type SymbolicTower = tower::TowerElement<QRatFunc>;
/// Tower elements over ℚ, after specializing the roots.
pub type RationalTower = tower::TowerElement<num_rational::BigRational>;
