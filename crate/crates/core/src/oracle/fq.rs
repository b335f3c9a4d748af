//! Arithmetic in `F_q = F_p[t]/(h)` and the exhaustive witness search.
//!
//! Elements are length-`k` coefficient vectors over `F_p`, little-endian in
//! `t`. The modulus `h` comes from a small table of Conway polynomials; for
//! pairs `(p, k)` outside the table the lexicographically least monic
//! irreducible is found by a deterministic scan, so witness coordinates are
//! reproducible either way (the modulus is part of the report).

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::binom;
use crate::linalg::{is_prime_u64, mul_mod_u64, pow_mod_u64};

type Elem = Vec<u64>;

/// Conway polynomials for the small fields the searches actually use,
/// little-endian coefficients including the leading 1.
fn conway(p: u64, k: u32) -> Option<Vec<u64>> {
    let table: &[((u64, u32), &[u64])] = &[
        ((2, 2), &[1, 1, 1]),
        ((2, 3), &[1, 1, 0, 1]),
        ((2, 4), &[1, 1, 0, 0, 1]),
        ((2, 5), &[1, 0, 1, 0, 0, 1]),
        ((2, 6), &[1, 1, 0, 1, 1, 0, 1]),
        ((3, 2), &[2, 2, 1]),
        ((3, 3), &[1, 2, 0, 1]),
        ((5, 2), &[2, 4, 1]),
        ((7, 2), &[3, 6, 1]),
        ((11, 2), &[2, 7, 1]),
        ((13, 2), &[2, 12, 1]),
    ];
    table
        .iter()
        .find(|((tp, tk), _)| *tp == p && *tk == k)
        .map(|(_, c)| c.to_vec())
}

/// The field `F_{p^k}`.
#[derive(Clone, Debug)]
pub struct FqCtx {
    pub p: u64,
    pub k: u32,
    /// Monic irreducible modulus, little-endian, length `k + 1`; for
    /// `k = 1` this is `[0, 1]` (plain `t`) and never used in reduction.
    pub modulus: Vec<u64>,
}

impl FqCtx {
    pub fn new(p: u64, k: u32) -> Result<Self, OracleError> {
        if !is_prime_u64(p) {
            return Err(OracleError::NotPrime(p));
        }
        assert!(k >= 1, "extension degree must be positive");
        let modulus = if k == 1 {
            vec![0, 1]
        } else if let Some(m) = conway(p, k) {
            debug_assert!(is_irreducible(&m, p));
            m
        } else {
            smallest_irreducible(p, k)
        };
        Ok(FqCtx { p, k, modulus })
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k)
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.k as usize]
    }

    pub fn one(&self) -> Elem {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Element of index `idx` in the enumeration order (base-p digits).
    pub fn from_index(&self, mut idx: u64) -> Elem {
        let mut e = self.zero();
        for c in e.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        debug_assert_eq!(idx, 0);
        e
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect()
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn scalar_mul(&self, s: u64, a: &Elem) -> Elem {
        a.iter()
            .map(|&x| mul_mod_u64(s % self.p, x, self.p))
            .collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let k = self.k as usize;
        if k == 1 {
            return vec![mul_mod_u64(a[0], b[0], self.p)];
        }
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod_u64(x, y, self.p)) % self.p;
            }
        }
        // reduce by the monic modulus
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &mc) in self.modulus.iter().enumerate().take(k) {
                let idx = d - k + j;
                let sub = mul_mod_u64(c, mc, self.p);
                prod[idx] = (prod[idx] + self.p - sub) % self.p;
            }
        }
        prod.truncate(k);
        prod
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        assert!(!self.is_zero(a), "inverse of zero");
        if self.k == 1 {
            return vec![pow_mod_u64(a[0], self.p - 2, self.p)];
        }
        // a^(q - 2)
        let mut exp = self.order() - 2;
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

/// Irreducibility over `F_p` of a monic polynomial, by the standard
/// criterion: `t^(p^k) = t (mod h)` and `gcd(t^(p^(k/q)) - t, h) = 1` for
/// every prime `q` dividing `k`.
fn is_irreducible(h: &[u64], p: u64) -> bool {
    let k = h.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let frob_k = polymod_pow_p_iterated(&x, k as u32, h, p);
    if frob_k != normalize(&x.to_vec()) {
        return false;
    }
    let mut rem = k;
    let mut q = 2usize;
    let mut prime_divs = Vec::new();
    while q * q <= rem {
        if rem % q == 0 {
            prime_divs.push(q);
            while rem % q == 0 {
                rem /= q;
            }
        }
        q += 1;
    }
    if rem > 1 {
        prime_divs.push(rem);
    }
    for q in prime_divs {
        let frob = polymod_pow_p_iterated(&x, (k / q) as u32, h, p);
        let diff = poly_sub(&frob, &x, p);
        if poly_gcd_fp(&diff, h, p).len() > 1 {
            return false;
        }
    }
    true
}

fn normalize(a: &[u64]) -> Vec<u64> {
    let mut v = a.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let mut out = vec![0u64; len];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    normalize(&out)
}

fn polymod_mul(a: &[u64], b: &[u64], h: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod_u64(x, y, p)) % p;
        }
    }
    polymod_rem(&prod, h, p)
}

fn polymod_rem(a: &[u64], h: &[u64], p: u64) -> Vec<u64> {
    let k = h.len() - 1;
    let mut rem = a.to_vec();
    while rem.len() > k {
        let d = rem.len() - 1;
        let c = rem[d];
        rem.pop();
        if c == 0 {
            continue;
        }
        for (j, &mc) in h.iter().enumerate().take(k) {
            let idx = d - k + j;
            let sub = mul_mod_u64(c, mc, p);
            rem[idx] = (rem[idx] + p - sub) % p;
        }
    }
    normalize(&rem)
}

/// `a^(p^times) mod h` by repeated Frobenius (square-and-multiply per step).
fn polymod_pow_p_iterated(a: &[u64], times: u32, h: &[u64], p: u64) -> Vec<u64> {
    let mut acc = polymod_rem(a, h, p);
    for _ in 0..times {
        let mut result = vec![1u64];
        let mut base = acc.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = polymod_mul(&result, &base, h, p);
            }
            base = polymod_mul(&base, &base, h, p);
            e >>= 1;
        }
        acc = result;
    }
    acc
}

fn poly_gcd_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (normalize(a), normalize(b));
    while !y.is_empty() {
        let r = poly_rem_fp(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn poly_rem_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = pow_mod_u64(b[db], p - 2, p);
    let mut rem = a.to_vec();
    while rem.len() > db {
        let d = rem.len() - 1;
        let factor = mul_mod_u64(rem[d], lead_inv, p);
        rem.pop();
        if factor != 0 {
            for (j, &bc) in b.iter().enumerate().take(db) {
                let idx = d - db + j;
                let sub = mul_mod_u64(factor, bc, p);
                rem[idx] = (rem[idx] + p - sub) % p;
            }
        }
    }
    normalize(&rem)
}

/// Lexicographically least monic irreducible of degree `k` over `F_p`
/// (constant term varies fastest).
fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let total = (p as u128).pow(k as u32);
    for idx in 0..total {
        let mut h = vec![0u64; k + 1];
        let mut rest = idx;
        for c in h.iter_mut().take(k) {
            *c = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        h[k] = 1;
        if is_irreducible(&h, p) {
            return h;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

/// Outcome of one exhaustive search: the field searched and every witness,
/// each a full coefficient vector (highest degree first, one length-`k`
/// vector per coefficient).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: u32,
    pub p: u64,
    pub k: u32,
    pub q: u64,
    /// Modulus of the extension, little-endian; absent for `k = 1`.
    pub modulus: Option<Vec<u64>>,
    pub witnesses: Vec<Vec<Elem>>,
}

impl SearchReport {
    /// Prime-field view of a witness (only for `k = 1`).
    pub fn witness_as_fp(&self, idx: usize) -> Option<super::FpUniPoly> {
        if self.k != 1 {
            return None;
        }
        let coeffs = self.witnesses.get(idx)?.iter().map(|e| e[0]).collect();
        super::FpUniPoly::new(self.p, coeffs).ok()
    }
}

struct FqPoly {
    // highest degree first; fixed length n+1 during the search
    coeffs: Vec<Elem>,
}

fn fq_poly_rem(a: &[Elem], b: &[Elem], ctx: &FqCtx) -> Vec<Elem> {
    // operands trimmed (leading coefficient nonzero)
    let db = b.len() - 1;
    let lead_inv = ctx.inv(&b[0]);
    let mut rem: Vec<Elem> = a.to_vec();
    while rem.len() > db {
        let factor = ctx.mul(&rem[0], &lead_inv);
        if !ctx.is_zero(&factor) {
            for (k, bc) in b.iter().enumerate() {
                let sub = ctx.mul(&factor, bc);
                rem[k] = ctx.sub(&rem[k], &sub);
            }
        }
        rem.remove(0);
    }
    // trim
    let lead = rem.iter().position(|c| !ctx.is_zero(c));
    match lead {
        Some(k) => rem.split_off(k),
        None => Vec::new(),
    }
}

fn fq_gcd_degree(f: &[Elem], g: &[Elem], ctx: &FqCtx) -> Option<usize> {
    // degree of gcd(f, g); inputs trimmed, f nonzero
    let mut x: Vec<Elem> = f.to_vec();
    let mut y: Vec<Elem> = g.to_vec();
    while !y.is_empty() {
        let r = fq_poly_rem(&x, &y, ctx);
        x = y;
        y = r;
    }
    if x.is_empty() {
        None
    } else {
        Some(x.len() - 1)
    }
}

fn fq_hasse(f: &FqPoly, i: usize, ctx: &FqCtx) -> Vec<Elem> {
    // f monic of degree n = len - 1; returns trimmed H_i
    let n = f.coeffs.len() - 1;
    let mut out: Vec<Elem> = Vec::with_capacity(n - i + 1);
    for m in (i..=n).rev() {
        let b = binom(m as u64, i as u64) % num_bigint::BigUint::from(ctx.p);
        let b = num_traits::ToPrimitive::to_u64(&b).unwrap();
        out.push(ctx.scalar_mul(b, &f.coeffs[n - m]));
    }
    let lead = out.iter().position(|c| !ctx.is_zero(c));
    match lead {
        Some(k) => out.split_off(k),
        None => Vec::new(),
    }
}

fn fq_is_casas_alvero(f: &FqPoly, ctx: &FqCtx) -> bool {
    let n = f.coeffs.len() - 1;
    for i in 1..n {
        let h = fq_hasse(f, i, ctx);
        if h.is_empty() {
            continue;
        }
        match fq_gcd_degree(&f.coeffs, &h, ctx) {
            Some(0) => return false,
            _ => continue,
        }
    }
    true
}

pub(super) fn search(n: u32, p: u64, k: u32, budget: u64) -> Result<SearchReport, OracleError> {
    if !is_prime_u64(p) {
        return Err(OracleError::NotPrime(p));
    }
    assert!(n >= 2, "degree must be at least 2");
    let ctx = Arc::new(FqCtx::new(p, k)?);
    let q = ctx.order();
    let required = q.checked_pow(n).unwrap_or(u128::MAX);
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    let q = q as u64;

    // coefficient vectors of (x - b)^n for every b, to be excluded
    let powers: HashSet<Vec<Elem>> = (0..q)
        .map(|bi| {
            let b = ctx.from_index(bi);
            let mut acc = vec![ctx.one()];
            for _ in 0..n {
                // multiply by (x - b)
                let mut next = vec![ctx.zero(); acc.len() + 1];
                for (i, c) in acc.iter().enumerate() {
                    next[i] = ctx.add(&next[i], c);
                    let t = ctx.mul(c, &ctx.neg(&b));
                    next[i + 1] = ctx.add(&next[i + 1], &t);
                }
                acc = next;
            }
            acc
        })
        .collect();

    let per_branch = (q as u128).pow(n - 1) as u64;
    let witnesses: Vec<Vec<Elem>> = (0..q)
        .into_par_iter()
        .map(|first| {
            let ctx = Arc::clone(&ctx);
            let mut found = Vec::new();
            let mut coeffs: Vec<Elem> = vec![ctx.zero(); (n + 1) as usize];
            coeffs[0] = ctx.one();
            coeffs[1] = ctx.from_index(first);
            for rest in 0..per_branch {
                let mut idx = rest;
                for slot in coeffs.iter_mut().skip(2) {
                    *slot = ctx.from_index(idx % q);
                    idx /= q;
                }
                let f = FqPoly {
                    coeffs: coeffs.clone(),
                };
                if fq_is_casas_alvero(&f, &ctx) && !powers.contains(&f.coeffs) {
                    found.push(f.coeffs);
                }
            }
            found
        })
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });

    Ok(SearchReport {
        n,
        p,
        k,
        q,
        modulus: (k > 1).then(|| ctx.modulus.clone()),
        witnesses,
    })
}
