//! Exact-arithmetic construction of the prime ideals of a number field
//! K = Q[x]/(f) via Okutsu-Montes representations, and fractional ideal
//! arithmetic built on top of them: valuations, factorization, generators,
//! two-element representations, residue maps, Chinese remainders and
//! p-integral bases. The maximal order is never constructed and disc(f) is
//! never factored.

pub mod arith;
pub mod crt;
pub mod error;
pub mod ffield;
pub mod ideal;
pub mod intfactor;
pub mod json;
pub mod montes;
pub mod omtype;
pub mod pbasis;
pub mod polygon;
pub mod valuation;

pub use error::{Error, Result};
