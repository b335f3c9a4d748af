//! Exact computation of the bad primes of the Casas-Alvero conjecture.
//!
//! For a degree `n`, a prime `p` is *bad* when the Casas-Alvero statement
//! fails over an algebraically closed field of characteristic `p`. The bad
//! primes are exactly the primes dividing the C-th determinantal divisor
//! `J_T` of at least one Macaulay-style coefficient matrix `M_T`, where `T`
//! ranges over the tuples selecting one involution per elementary symmetric
//! polynomial. This crate builds those matrices exactly, certifies their
//! rank over the rationals and modulo candidate primes, and aggregates the
//! verdicts into a per-degree report.
//!
//! Modules:
//! - [`poly`]: sparse multivariate polynomials over big integers; the
//!   involution substitutions and the generator table.
//! - [`macaulay`]: degree combinatorics, monomial bases, matrix assembly,
//!   and the tuple symmetry reduction.
//! - [`linalg`]: fraction-free (Bareiss) elimination, rank modulo p,
//!   maximal-minor extraction, exhaustive minor gcd, factorization.
//! - [`bounds`]: the explicit upper bounds on bad primes.
//! - [`oracle`]: Hasse derivatives and brute-force Casas-Alvero searches
//!   over small finite fields, used as independent ground truth.
//! - [`certify`]: the end-to-end pipeline producing tuple certificates and
//!   degree reports, with a resumable on-disk cache.

pub mod bounds;
pub mod certify;
pub mod linalg;
pub mod macaulay;
pub mod oracle;
pub mod poly;

pub use bounds::BoundReport;
pub use certify::{bad_primes, certify_tuple, Config, DegreeReport, TupleCertificate};
pub use linalg::{FactorResult, MinorCertificate};
pub use macaulay::{DegreeData, MacaulayMatrix, Tuple};
pub use oracle::FpUniPoly;
pub use poly::{GeneratorTable, Monomial, MultiPoly};

use num_bigint::BigUint;

/// Binomial coefficient as a big integer; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// Binomial coefficient for counts known to fit in a `u64`.
///
/// Panics if the value overflows; callers use it only for index bookkeeping
/// where the matrix would not fit in memory anyway.
pub fn binom_u64(n: u64, k: u64) -> u64 {
    u64::try_from(&binom(n, k)).expect("binomial exceeds u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_small() {
        assert_eq!(binom_u64(5, 2), 10);
        assert_eq!(binom_u64(19, 15), 3876);
        assert_eq!(binom_u64(0, 0), 1);
        assert_eq!(binom(3, 5), BigUint::from(0u32));
    }
}
