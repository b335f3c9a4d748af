//! Integer factorization with an explicit honesty budget.
//!
//! Trial division up to a configurable bound, Miller-Rabin on what is left,
//! Pollard rho (Brent's cycle finding) with an iteration budget for the
//! composite remainders. Whatever the budget cannot split is returned
//! verbatim as the unresolved cofactor; nothing is ever silently dropped.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

use super::modp::{is_probable_prime, mul_mod_u64};

/// Outcome of a factorization attempt: the certified prime factors and
/// whatever composite part the budgets could not resolve (1 when complete).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorResult {
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
}

impl FactorResult {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// The factored part times the cofactor; equals the input by invariant.
    pub fn reassemble(&self) -> BigUint {
        let mut acc = self.cofactor.clone();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }
}

/// Factors `n >= 1`. Budget exhaustion shows up as a cofactor > 1, never as
/// an error.
pub fn factorize(n: &BigUint, trial_bound: u64, pollard_budget: u64) -> FactorResult {
    assert!(!n.is_zero(), "factorize requires a positive integer");
    let mut primes: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut cofactor = BigUint::one();

    let mut remaining = n.clone();
    trial_divide(&mut remaining, trial_bound, &mut primes);

    // split what is left with rho, keeping a worklist of composites
    let mut stack = Vec::new();
    if !remaining.is_one() {
        stack.push(remaining);
    }
    while let Some(m) = stack.pop() {
        if is_probable_prime(&m) {
            *primes.entry(m).or_insert(0) += 1;
            continue;
        }
        match pollard_rho_brent(&m, pollard_budget) {
            Some(d) => {
                let q = &m / &d;
                stack.push(d);
                stack.push(q);
            }
            None => cofactor *= m,
        }
    }

    FactorResult {
        factors: primes.into_iter().collect(),
        cofactor,
    }
}

fn trial_divide(n: &mut BigUint, bound: u64, primes: &mut BTreeMap<BigUint, u32>) {
    let mut divide_out = |n: &mut BigUint, d: u64| {
        let db = BigUint::from(d);
        while n.is_multiple_of(&db) {
            *n /= &db;
            *primes.entry(db.clone()).or_insert(0) += 1;
        }
    };
    for d in [2u64, 3] {
        if d <= bound {
            divide_out(n, d);
        }
    }
    let mut d = 5u64;
    while d <= bound {
        let d_sq = BigUint::from(d) * BigUint::from(d);
        if d_sq > *n {
            break;
        }
        // periodically stop scanning once the remainder is already prime
        if d % 10_000 == 5 && is_probable_prime(n) {
            break;
        }
        divide_out(n, d);
        divide_out(n, d + 2);
        d += 6;
    }
}

/// Pollard rho with Brent's improvements; returns a nontrivial divisor or
/// `None` once the iteration budget is spent. Deterministic: the polynomial
/// constant starts at 1 and increases on each failed attempt.
fn pollard_rho_brent(n: &BigUint, budget: u64) -> Option<BigUint> {
    if n.is_multiple_of(&BigUint::from(2u32)) {
        return Some(BigUint::from(2u32));
    }
    if let Some(small) = n.to_u64() {
        return pollard_rho_brent_u64(small, budget).map(BigUint::from);
    }
    let mut spent = 0u64;
    let mut c = BigUint::one();
    while spent < budget {
        if let Some(d) = rho_attempt_big(n, &c, budget, &mut spent) {
            return Some(d);
        }
        c += 1u32;
    }
    None
}

fn rho_attempt_big(n: &BigUint, c: &BigUint, budget: u64, spent: &mut u64) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let (mut x, mut ys) = (y.clone(), y.clone());
    let m = 128u64;
    let mut g = BigUint::one();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = m.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            *spent += steps;
            if *spent >= budget {
                return None;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
    }
    if g == *n {
        // backtrack one step at a time
        loop {
            ys = f(&ys);
            *spent += 1;
            if *spent >= budget {
                return None;
            }
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g == *n || g.is_one() {
        None
    } else {
        Some(g)
    }
}

fn pollard_rho_brent_u64(n: u64, budget: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut spent = 0u64;
    let mut c = 1u64;
    while spent < budget {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let (mut x, mut ys) = (y, y);
        let m = 128u64;
        let mut g = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                let steps = m.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod_u64(q, x.abs_diff(y), n);
                }
                spent += steps;
                if spent >= budget {
                    return None;
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            g = 1;
            while g == 1 {
                ys = f(ys);
                spent += 1;
                if spent >= budget {
                    return None;
                }
                g = gcd_u64(x.abs_diff(ys), n);
            }
        }
        if g != n && g != 1 {
            return Some(g);
        }
        c += 1;
    }
    None
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(n: u64) -> FactorResult {
        factorize(&BigUint::from(n), 1_000_000, 10_000_000)
    }

    #[test]
    fn factorize_examples() {
        let r = fr(2);
        assert_eq!(r.factors, vec![(BigUint::from(2u32), 1)]);
        assert!(r.is_complete());

        let r = fr(72);
        assert_eq!(
            r.factors,
            vec![(BigUint::from(2u32), 3), (BigUint::from(3u32), 2)]
        );
        assert!(r.is_complete());

        let r = fr(1);
        assert!(r.factors.is_empty());
        assert!(r.is_complete());
    }

    #[test]
    fn factorize_reassembles() {
        for n in [2u64, 72, 97, 1 << 40, 600_851_475_143, 999_999_999_989] {
            let r = fr(n);
            assert_eq!(r.reassemble(), BigUint::from(n));
            for (p, _) in &r.factors {
                assert!(is_probable_prime(p));
            }
        }
    }

    #[test]
    fn factorize_semiprime_beyond_trial_division() {
        // both primes exceed the trial bound; rho must split it
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let r = fr(p * q);
        assert!(r.is_complete());
        assert_eq!(
            r.factors,
            vec![(BigUint::from(p), 1), (BigUint::from(q), 1)]
        );
    }

    #[test]
    fn budget_exhaustion_reports_cofactor() {
        // two ~64-bit primes; a zero rho budget cannot split the product
        let p = BigUint::from(18_446_744_073_709_551_557u64);
        let q = BigUint::from(18_446_744_073_709_551_533u64);
        let n = &p * &q;
        let r = factorize(&n, 1_000, 0);
        assert!(!r.is_complete());
        assert_eq!(r.cofactor, n);
        assert_eq!(r.reassemble(), n);
    }

    #[test]
    fn big_rho_path_splits_a_big_semiprime() {
        // product exceeds u64 so the BigUint rho path is exercised
        let p = BigUint::from(4_294_967_311u64); // prime > 2^32
        let q = BigUint::from(4_294_967_357u64);
        let n = &p * &q;
        let r = factorize(&n, 1_000, 10_000_000);
        assert!(r.is_complete(), "cofactor {}", r.cofactor);
        assert_eq!(r.factors.len(), 2);
        assert_eq!(r.reassemble(), n);
    }
}
