//! Decides which positive integral surgeries on positive torus knots bound
//! rational homology 4-balls, and cross-checks the answer with two
//! independent obstructions: Heegaard Floer correction terms and an exact
//! lattice-embedding search.

pub mod cfrac;
pub mod classify;
pub mod floer;
pub mod lattice;
pub mod lisca;
pub mod plumbing;
pub mod seq;

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("sequence kind has no Pell-type recursion")]
    NotPellKind,
    #[error("index {0} out of range for this sequence")]
    IndexOutOfRange(i64),
    #[error("value {0} does not expand: need a rational > 1")]
    NotExpandable(String),
    #[error("coefficient {0} too large for this representation")]
    WeightOverflow(BigInt),
    #[error("weight {0} below 2 is not allowed")]
    BadWeight(i64),
    #[error("empty weight string")]
    EmptyString,
    #[error("{0} has no inverse modulo {1}")]
    NotCoprime(BigInt, BigInt),
    #[error("invalid surgery triple: {0}")]
    BadTriple(String),
    #[error("surgery yields a connected sum, not a Seifert plumbing")]
    Reducible,
    #[error("surgery yields a lens space ({0:+} framing offset), not a Seifert plumbing")]
    LensSpace(i8),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("invalid lens space: {0}")]
    BadLensSpace(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
