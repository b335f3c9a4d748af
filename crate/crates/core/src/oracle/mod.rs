//! Brute-force ground truth over small finite fields.
//!
//! A monic polynomial is Casas-Alvero when it shares a non-constant factor
//! with each of its Hasse derivatives `H_1, ..., H_{n-1}`. Over `F_p` this
//! is decidable by gcds, and exhaustive enumeration of all monic degree-`n`
//! polynomials over `F_q` finds every witness that is not a pure power of a
//! linear polynomial. The matrix pipeline never feeds this module, so its
//! verdicts are an independent check on the certified bad primes.

mod fq;

pub use fq::{FqCtx, SearchReport};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::binom;
use crate::linalg::is_prime_u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient {0} is not reduced modulo {1}")]
    CoefficientOutOfRange(u64, u64),
    #[error("derivative order {i} out of range [1, {deg}]")]
    OrderOutOfRange { i: usize, deg: usize },
    #[error("polynomial must be monic of degree at least 2")]
    NotMonicOfDegreeTwo,
    #[error("search needs {required} polynomial evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
}

/// Univariate polynomial over `F_p`, coefficients highest degree first,
/// leading coefficient nonzero; empty = zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpUniPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpUniPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self, OracleError> {
        if !is_prime_u64(p) {
            return Err(OracleError::NotPrime(p));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= p) {
            return Err(OracleError::CoefficientOutOfRange(c, p));
        }
        let mut poly = FpUniPoly { p, coeffs };
        poly.normalize();
        Ok(poly)
    }

    /// Convenience constructor reducing signed coefficients, e.g.
    /// `[1, -1, 0, 0]` for `x^3 - x^2`.
    pub fn from_signed(p: u64, coeffs: &[i64]) -> Result<Self, OracleError> {
        if !is_prime_u64(p) {
            return Err(OracleError::NotPrime(p));
        }
        let pi = p as i64;
        let reduced = coeffs.iter().map(|&c| (c.rem_euclid(pi)) as u64).collect();
        FpUniPoly::new(p, reduced)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            Some(k) => {
                self.coeffs.drain(..k);
            }
            None => self.coeffs.clear(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.first() == Some(&1)
    }

    fn coeff_of(&self, m: usize) -> u64 {
        // coefficient of x^m
        match self.degree() {
            Some(d) if m <= d => self.coeffs[d - m],
            _ => 0,
        }
    }
}

impl std::fmt::Display for FpUniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let deg = self.degree().unwrap();
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let m = deg - k;
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "x")?,
                1 => write!(f, "{c}*x")?,
                _ if c == 1 => write!(f, "x^{m}")?,
                _ => write!(f, "{c}*x^{m}")?,
            }
        }
        Ok(())
    }
}

/// `binom(m, i) mod p` by Lucas' rule; cross-check for the exact route.
pub fn binom_mod_p_lucas(mut m: u64, mut i: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while m > 0 || i > 0 {
        let (md, id) = (m % p, i % p);
        if id > md {
            return 0;
        }
        let part = binom(md, id)
            .to_u64()
            .expect("digit binomial fits u64 for prime digits");
        acc = (acc as u128 * (part % p) as u128 % p as u128) as u64;
        m /= p;
        i /= p;
    }
    acc
}

fn binom_mod_p(m: u64, i: u64, p: u64) -> u64 {
    let b = binom(m, i) % BigUint::from(p);
    b.to_u64().expect("reduced value fits u64")
}

/// The `i`-th Hasse derivative: coefficient of `x^m` contributes
/// `binom(m, i)` times itself to `x^(m-i)`. Binomials are computed exactly
/// and reduced mod p.
pub fn hasse_derivative(f: &FpUniPoly, i: usize) -> Result<FpUniPoly, OracleError> {
    let deg = f.degree().unwrap_or(0);
    if i < 1 || i > deg {
        return Err(OracleError::OrderOutOfRange { i, deg });
    }
    let p = f.p;
    let mut coeffs = Vec::with_capacity(deg - i + 1);
    for m in (i..=deg).rev() {
        let b = binom_mod_p(m as u64, i as u64, p);
        coeffs.push((b as u128 * f.coeff_of(m) as u128 % p as u128) as u64);
    }
    FpUniPoly::new(p, coeffs)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::linalg::pow_mod_u64(a, p - 2, p)
}

/// Remainder of `a` divided by `b` over `F_p`; `b` nonzero.
pub fn poly_rem(a: &FpUniPoly, b: &FpUniPoly) -> FpUniPoly {
    debug_assert!(!b.is_zero());
    let p = a.p;
    let db = b.degree().unwrap();
    let lead_inv = inv_mod(b.coeffs[0], p);
    let mut rem = a.coeffs.clone();
    while rem.len() > db {
        let factor = (rem[0] as u128 * lead_inv as u128 % p as u128) as u64;
        if factor != 0 {
            for (k, &bc) in b.coeffs.iter().enumerate() {
                let sub = (factor as u128 * bc as u128 % p as u128) as u64;
                rem[k] = (rem[k] + p - sub) % p;
            }
        }
        debug_assert_eq!(rem[0], 0);
        rem.remove(0);
    }
    let mut out = FpUniPoly { p, coeffs: rem };
    out.normalize();
    out
}

/// Monic gcd over `F_p`.
pub fn poly_gcd(a: &FpUniPoly, b: &FpUniPoly) -> FpUniPoly {
    debug_assert_eq!(a.p, b.p);
    let p = a.p;
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if !x.is_zero() && !x.is_monic() {
        let inv = inv_mod(x.coeffs[0], p);
        for c in &mut x.coeffs {
            *c = (*c as u128 * inv as u128 % p as u128) as u64;
        }
    }
    x
}

/// Whether monic `f` of degree >= 2 shares a non-constant factor with every
/// Hasse derivative `H_1, ..., H_{n-1}`. A vanishing derivative counts as
/// sharing every factor.
pub fn is_casas_alvero(f: &FpUniPoly) -> Result<bool, OracleError> {
    let deg = match f.degree() {
        Some(d) if d >= 2 && f.is_monic() => d,
        _ => return Err(OracleError::NotMonicOfDegreeTwo),
    };
    for i in 1..deg {
        let h = hasse_derivative(f, i)?;
        if h.is_zero() {
            continue;
        }
        let g = poly_gcd(f, &h);
        if g.degree() == Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive search for monic degree-`n` Casas-Alvero polynomials over
/// `F_q`, `q = p^k`, excluding powers of linear polynomials. Refuses when
/// `q^n` exceeds the enumeration budget.
pub fn search_counterexamples(
    n: u32,
    p: u64,
    k: u32,
    budget: u64,
) -> Result<SearchReport, OracleError> {
    fq::search(n, p, k, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, coeffs: &[i64]) -> FpUniPoly {
        FpUniPoly::from_signed(p, coeffs).unwrap()
    }

    #[test]
    fn construction_and_normalization() {
        let f = FpUniPoly::new(5, vec![0, 0, 3, 1]).unwrap();
        assert_eq!(f.coeffs(), &[3, 1]);
        assert_eq!(f.degree(), Some(1));
        assert!(FpUniPoly::new(4, vec![1]).is_err());
        assert!(FpUniPoly::new(5, vec![7]).is_err());
        assert!(FpUniPoly::new(5, vec![]).unwrap().is_zero());
    }

    #[test]
    fn hasse_example_over_f2() {
        // f = x^3 - x^2 over F_2, i = 2 -> x + 1
        let f = fp(2, &[1, -1, 0, 0]);
        let h = hasse_derivative(&f, 2).unwrap();
        assert_eq!(h, fp(2, &[1, 1]));
    }

    #[test]
    fn hasse_of_linear_power() {
        // H_i((x-b)^n) = binom(n, i) (x-b)^(n-i)
        for p in [3u64, 5, 7] {
            for b in 0..p.min(4) {
                for n in 2..=5usize {
                    let linear = fp(p, &[1, -(b as i64)]);
                    let f = poly_pow(&linear, n);
                    for i in 1..=n {
                        let h = hasse_derivative(&f, i).unwrap();
                        let mut expect = poly_pow(&linear, n - i);
                        let scale = binom_mod_p(n as u64, i as u64, p);
                        for c in &mut expect.coeffs {
                            *c = (*c as u128 * scale as u128 % p as u128) as u64;
                        }
                        expect.normalize();
                        assert_eq!(h, expect, "p={p} b={b} n={n} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn hasse_at_full_degree_of_power_of_x() {
        for n in 2..=6usize {
            let mut coeffs = vec![1i64];
            coeffs.extend(std::iter::repeat_n(0, n));
            let f = fp(7, &coeffs);
            let h = hasse_derivative(&f, n).unwrap();
            assert_eq!(h, fp(7, &[1]));
        }
    }

    #[test]
    fn hasse_order_out_of_range() {
        let f = fp(3, &[1, 0, 1]);
        assert!(hasse_derivative(&f, 0).is_err());
        assert!(hasse_derivative(&f, 3).is_err());
        assert!(hasse_derivative(&f, 2).is_ok());
    }

    fn poly_pow(f: &FpUniPoly, e: usize) -> FpUniPoly {
        let mut acc = FpUniPoly::new(f.p, vec![1]).unwrap();
        for _ in 0..e {
            acc = poly_mul(&acc, f);
        }
        acc
    }

    fn poly_mul(a: &FpUniPoly, b: &FpUniPoly) -> FpUniPoly {
        if a.is_zero() || b.is_zero() {
            return FpUniPoly::new(a.p, vec![]).unwrap();
        }
        let p = a.p;
        let mut coeffs = vec![0u64; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &ca) in a.coeffs.iter().enumerate() {
            for (j, &cb) in b.coeffs.iter().enumerate() {
                coeffs[i + j] =
                    ((coeffs[i + j] as u128 + ca as u128 * cb as u128) % p as u128) as u64;
            }
        }
        FpUniPoly::new(p, coeffs).unwrap()
    }

    #[test]
    fn gcd_basics() {
        // gcd(x^2 - 1, x - 1) = x - 1 over F_5
        let a = fp(5, &[1, 0, -1]);
        let b = fp(5, &[1, -1]);
        assert_eq!(poly_gcd(&a, &b), b);
        // coprime pair
        let c = fp(5, &[1, 1]);
        let d = fp(5, &[1, 2]);
        assert_eq!(poly_gcd(&c, &d).degree(), Some(0));
    }

    #[test]
    fn casas_alvero_counterexample_family() {
        // x^(p+1) - x^p is Casas-Alvero over F_p
        for p in [2u64, 3, 5, 7] {
            let n = p as usize + 1;
            let mut coeffs = vec![1i64, -1];
            coeffs.extend(std::iter::repeat_n(0, n - 1));
            let f = fp(p, &coeffs);
            assert_eq!(f.degree(), Some(n));
            assert!(is_casas_alvero(&f).unwrap(), "p={p}");
        }
    }

    #[test]
    fn linear_powers_are_casas_alvero() {
        for p in [2u64, 3, 5] {
            for b in 0..p {
                for n in 2..=4usize {
                    let f = poly_pow(&fp(p, &[1, -(b as i64)]), n);
                    assert!(is_casas_alvero(&f).unwrap(), "p={p} b={b} n={n}");
                }
            }
        }
    }

    #[test]
    fn non_example_over_f3() {
        // x^2 + 1 over F_3: H_1 = 2x, gcd = 1
        let f = fp(3, &[1, 0, 1]);
        assert!(!is_casas_alvero(&f).unwrap());
    }

    #[test]
    fn casas_alvero_rejects_bad_inputs() {
        let nonmonic = fp(3, &[2, 0, 1]);
        assert!(is_casas_alvero(&nonmonic).is_err());
        let linear = fp(3, &[1, 1]);
        assert!(is_casas_alvero(&linear).is_err());
    }

    #[test]
    fn lucas_agrees_with_exact_reduction() {
        for p in [2u64, 3, 5, 7, 13] {
            for m in 0..30u64 {
                for i in 0..=m {
                    assert_eq!(
                        binom_mod_p_lucas(m, i, p),
                        binom_mod_p(m, i, p),
                        "m={m} i={i} p={p}"
                    );
                }
            }
        }
    }
}
