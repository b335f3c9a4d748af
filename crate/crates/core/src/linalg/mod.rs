//! Exact linear algebra on the integer coefficient matrices.
//!
//! Two independent routes to the same facts, by design:
//! - fraction-free (Bareiss) elimination over `Z` for rank and for exact
//!   maximal-minor values, and
//! - Gaussian elimination over `F_p` for rank modulo a prime.
//!
//! The exhaustive minor gcd is the brute-force oracle for small degrees;
//! the sampled-minor + factorization route serves the large ones.

mod bareiss;
mod factor;
mod modp;

pub use bareiss::{
    det_bigint, minor_gcd_exhaustive, nonzero_maximal_minor, rank_over_rationals,
    rank_over_rationals_dense, sample_minors, MinorCertificate, PivotStrategy,
};
pub use factor::{factorize, FactorResult};
pub use modp::{
    is_prime_u64, is_probable_prime, mul_mod_u64, pow_mod_u64, rank_mod_p, rank_mod_p_dense,
};

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("{subsets} row subsets exceed the exhaustive-minor limit {limit}")]
    TooManyMinors { subsets: BigUint, limit: u64 },
    #[error("fraction-free elimination hit an inexact division (internal error)")]
    InexactDivision,
}
