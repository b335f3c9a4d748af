//! Rank computation over prime fields and primality testing.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::LinalgError;
use crate::macaulay::MacaulayMatrix;

/// Deterministic Miller-Rabin for `u64` (the listed bases cover the range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with fixed prime bases: deterministic below 3.3e24, a
/// probable-prime verdict beyond.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_multiple_of(&two) {
        return false;
    }
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_multiple_of(&two) {
        d /= 2u32;
        s += 1;
    }
    let bases: [u64; 24] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    ];
    'bases: for a in bases {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn inv_mod_u64(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime, a nonzero mod p
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    ((t % p as i128 + p as i128) % p as i128) as u64
}

fn bigint_mod_u64(v: &BigInt, p: u64) -> u64 {
    let m = v.mod_floor(&BigInt::from(p));
    m.to_u64().expect("mod_floor result fits the modulus")
}

/// Rank of the matrix over `F_p`. Errors when `p` is not (probably) prime.
pub fn rank_mod_p(m: &MacaulayMatrix, p: &BigUint) -> Result<usize, LinalgError> {
    if !is_probable_prime(p) {
        return Err(LinalgError::NotPrime(p.clone()));
    }
    if let Some(p_small) = p.to_u64() {
        let mut dense = vec![vec![0u64; m.n_cols()]; m.n_rows()];
        for (r, row) in m.rows.iter().enumerate() {
            for (c, v) in &row.entries {
                dense[r][*c] = bigint_mod_u64(v, p_small);
            }
        }
        Ok(rank_mod_p_dense_u64(&mut dense, p_small))
    } else {
        let pb = BigInt::from(p.clone());
        let dense: Vec<Vec<BigUint>> = m
            .to_dense()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.mod_floor(&pb).to_biguint().expect("non-negative"))
                    .collect()
            })
            .collect();
        Ok(rank_mod_p_dense_big(dense, p))
    }
}

/// Rank over `F_p` of a dense integer matrix, `p` a `u64` prime.
pub fn rank_mod_p_dense(rows: &[Vec<BigInt>], p: u64) -> Result<usize, LinalgError> {
    if !is_prime_u64(p) {
        return Err(LinalgError::NotPrime(BigUint::from(p)));
    }
    let mut dense: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| row.iter().map(|v| bigint_mod_u64(v, p)).collect())
        .collect();
    Ok(rank_mod_p_dense_u64(&mut dense, p))
}

fn rank_mod_p_dense_u64(m: &mut [Vec<u64>], p: u64) -> usize {
    let n_rows = m.len();
    let n_cols = if n_rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0usize;
    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let pivot = match (rank..n_rows).find(|&r| m[r][col] != 0) {
            Some(r) => r,
            None => continue,
        };
        m.swap(rank, pivot);
        let inv = inv_mod_u64(m[rank][col], p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail {
            if row[col] == 0 {
                continue;
            }
            let factor = mul_mod_u64(row[col], inv, p);
            for c in col..n_cols {
                if pivot_row[c] != 0 {
                    let sub = mul_mod_u64(factor, pivot_row[c], p);
                    row[c] = (row[c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_mod_p_dense_big(mut m: Vec<Vec<BigUint>>, p: &BigUint) -> usize {
    let n_rows = m.len();
    let n_cols = if n_rows == 0 { 0 } else { m[0].len() };
    let two = BigUint::from(2u32);
    let mut rank = 0usize;
    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let pivot = match (rank..n_rows).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => continue,
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].modpow(&(p - &two), p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail {
            if row[col].is_zero() {
                continue;
            }
            let factor = (&row[col] * &inv) % p;
            for c in col..n_cols {
                if !pivot_row[c].is_zero() {
                    let sub = (&factor * &pivot_row[c]) % p;
                    row[c] = (&row[c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macaulay::{build_matrix, Tuple};
    use crate::poly::GeneratorTable;

    fn n3_matrix(t: &[u32]) -> MacaulayMatrix {
        let table = GeneratorTable::new(3).unwrap();
        build_matrix(3, &Tuple::new(3, t.to_vec()).unwrap(), &table).unwrap()
    }

    #[test]
    fn primality_small() {
        let primes = [2u64, 3, 5, 7, 11, 13, 97, 1_000_003, 2_147_483_647];
        for p in primes {
            assert!(is_prime_u64(p), "{p}");
        }
        for c in [0u64, 1, 4, 9, 91, 1_000_001, 6_700_417 * 3] {
            assert!(!is_prime_u64(c), "{c}");
        }
        // 2^61 - 1 is a Mersenne prime
        assert!(is_prime_u64((1 << 61) - 1));
    }

    #[test]
    fn probable_prime_big() {
        // 2^89 - 1 is a Mersenne prime
        let p = (BigUint::from(1u32) << 89) - 1u32;
        assert!(is_probable_prime(&p));
        let c = &p * BigUint::from(3u32);
        assert!(!is_probable_prime(&c));
    }

    #[test]
    fn rank_mod_p_examples() {
        let m = n3_matrix(&[1, 3]);
        assert_eq!(rank_mod_p(&m, &BigUint::from(2u32)).unwrap(), 2);
        assert_eq!(rank_mod_p(&m, &BigUint::from(3u32)).unwrap(), 3);
        let id = n3_matrix(&[3, 3]);
        for p in [2u32, 3, 5, 7, 11] {
            assert_eq!(rank_mod_p(&id, &BigUint::from(p)).unwrap(), 3);
        }
    }

    #[test]
    fn rank_mod_p_rejects_composites() {
        let m = n3_matrix(&[1, 3]);
        assert!(matches!(
            rank_mod_p(&m, &BigUint::from(6u32)),
            Err(LinalgError::NotPrime(_))
        ));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let mut dense = vec![vec![0u64; 4]; 3];
        assert_eq!(rank_mod_p_dense_u64(&mut dense, 5), 0);
    }

    #[test]
    fn big_prime_path_agrees_with_small() {
        let m = n3_matrix(&[1, 2]);
        let p_small = BigUint::from(1_000_003u64);
        let small = rank_mod_p(&m, &p_small).unwrap();
        // same prime through the big-integer code path
        let dense: Vec<Vec<BigUint>> = m
            .to_dense()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| {
                        v.mod_floor(&BigInt::from(1_000_003u64))
                            .to_biguint()
                            .unwrap()
                    })
                    .collect()
            })
            .collect();
        assert_eq!(rank_mod_p_dense_big(dense, &p_small), small);
    }

    #[test]
    fn inverse_mod_p() {
        for p in [3u64, 5, 97, 1_000_003] {
            for a in 1..20u64 {
                if a % p == 0 {
                    continue;
                }
                assert_eq!(mul_mod_u64(a, inv_mod_u64(a, p), p), 1);
            }
        }
    }
}
