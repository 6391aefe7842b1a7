//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("element is zero in K")]
    ZeroInField,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("prime {0} exceeds the supported bound 2^63")]
    PrimeTooLarge(String),
    #[error("defining polynomial is not squarefree over Q")]
    NotSquarefree,
    #[error("could not certify squarefreeness of the defining polynomial")]
    SquarefreeUndecided,
    #[error("polynomial is reducible")]
    Reducible,
    #[error("empty point cloud")]
    EmptyCloud,
    #[error("norm not factorable: {0}")]
    NormNotFactorable(String),
    #[error("element is not integral at the prime")]
    NotIntegral,
    #[error("valuation not zero / inconsistent log vector")]
    InconsistentLogVector,
    #[error("all generators are zero")]
    ZeroIdeal,
    #[error("conflicting duplicate primes in CRT targets")]
    DuplicateCrtTarget,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal verification failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
