//! Sparse multivariate polynomials with exact integer coefficients.
//!
//! The polynomial ring here is `Z[x_1, ..., x_m]` with `m = n - 1` for a
//! degree-`n` run. Three families of elements matter downstream: the
//! elementary symmetric polynomials `sigma_i`, their images under the
//! involutions `x_i -> x_i - x_j`, `x_j -> -x_j`, and monomial shifts of
//! those images. Everything is kept in canonical collected form (no zero
//! coefficients, graded reverse lexicographic term order), so polynomial
//! equality is plain structural equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("symmetric index {i} out of range [1, {n_vars}]")]
    SymmetricIndexOutOfRange { i: u32, n_vars: usize },
    #[error("involution index {j} out of range [1, {n}]")]
    InvolutionIndexOutOfRange { j: u32, n: u32 },
    #[error("expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

/// A monomial as an exponent vector, one entry per variable.
///
/// Ordered by graded reverse lexicographic order: total degree first, ties
/// broken so that among equal-degree monomials the one whose rightmost
/// differing exponent is *smaller* is the larger monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// The constant monomial `1` in `n_vars` variables.
    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    /// `x_{idx}` with `idx` zero-based.
    pub fn var(n_vars: usize, idx: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn n_vars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Relabel variables: entry `k` of the result is entry `perm[k]` of self.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        Monomial(perm.iter().map(|&k| self.0[k]).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {
                for k in (0..self.0.len()).rev() {
                    match self.0[k].cmp(&other.0[k]) {
                        Ordering::Equal => continue,
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
            ord => ord,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", k + 1)?;
            } else {
                write!(f, "x{}^{}", k + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial over `Z`, kept in canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    n_vars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero(n_vars: usize) -> Self {
        MultiPoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Monomial::one(n_vars), c.into());
        p
    }

    /// `x_{idx}` with `idx` zero-based.
    pub fn var(n_vars: usize, idx: usize) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Monomial::var(n_vars, idx), BigInt::one());
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * mono`, collecting like terms and dropping zeros.
    pub fn add_term(&mut self, mono: Monomial, c: BigInt) {
        debug_assert_eq!(mono.n_vars(), self.n_vars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms in canonical order, leading monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, mono: &Monomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let mut out = MultiPoly::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::constant(self.n_vars, 1);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiplies every term by the monomial `alpha`; coefficients unchanged.
    pub fn mul_monomial(&self, alpha: &Monomial) -> Result<MultiPoly, PolyError> {
        if alpha.n_vars() != self.n_vars {
            return Err(PolyError::ArityMismatch {
                expected: self.n_vars,
                got: alpha.n_vars(),
            });
        }
        Ok(MultiPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(alpha), c.clone()))
                .collect(),
        })
    }

    /// Total degree if homogeneous, `None` otherwise (zero counts as homogeneous).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.degree());
        let first = match degs.next() {
            None => return Some(0),
            Some(d) => d,
        };
        degs.all(|d| d == first).then_some(first)
    }

    /// Largest absolute value among the coefficients (zero for the zero polynomial).
    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Applies a variable relabeling: `x_k -> x_{perm[k]}` (zero-based).
    pub fn permuted(&self, perm: &[usize]) -> MultiPoly {
        debug_assert_eq!(perm.len(), self.n_vars);
        let mut inv = vec![0usize; perm.len()];
        for (k, &pk) in perm.iter().enumerate() {
            inv[pk] = k;
        }
        let mut out = MultiPoly::zero(self.n_vars);
        for (m, c) in &self.terms {
            out.add_term(m.permuted(&inv), c.clone());
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (mono, c)) in self.terms().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mono.degree() == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// The `i`-th elementary symmetric polynomial in `n_vars` variables: the sum
/// of all squarefree degree-`i` monomials, each with coefficient 1.
pub fn elementary_symmetric(n_vars: usize, i: u32) -> Result<MultiPoly, PolyError> {
    if i == 0 || i as usize > n_vars {
        return Err(PolyError::SymmetricIndexOutOfRange { i, n_vars });
    }
    let mut p = MultiPoly::zero(n_vars);
    for combo in itertools::Itertools::combinations(0..n_vars, i as usize) {
        let mut e = vec![0u32; n_vars];
        for k in combo {
            e[k] = 1;
        }
        p.add_term(Monomial::new(e), BigInt::one());
    }
    Ok(p)
}

/// Applies the involution indexed by `j`: for `j < n` it substitutes
/// `x_i -> x_i - x_j` (for `i != j`) and `x_j -> -x_j`; `j = n` is the
/// identity. The result is expanded and collected immediately.
pub fn apply_involution(f: &MultiPoly, j: u32, n: u32) -> Result<MultiPoly, PolyError> {
    if j == 0 || j > n {
        return Err(PolyError::InvolutionIndexOutOfRange { j, n });
    }
    let m = f.n_vars();
    debug_assert_eq!(m, (n - 1) as usize);
    if j == n {
        return Ok(f.clone());
    }
    let jz = (j - 1) as usize;
    let images: Vec<MultiPoly> = (0..m)
        .map(|k| {
            if k == jz {
                MultiPoly::var(m, k).neg()
            } else {
                MultiPoly::var(m, k).add(&MultiPoly::var(m, jz).neg())
            }
        })
        .collect();
    let mut out = MultiPoly::zero(m);
    for (mono, c) in &f.terms {
        let mut prod = MultiPoly::constant(m, c.clone());
        for (k, &e) in mono.exponents().iter().enumerate() {
            if e > 0 {
                prod = prod.mul(&images[k].pow(e));
            }
        }
        out = out.add(&prod);
    }
    Ok(out)
}

/// Generator polynomial of a tuple slot: the involution `j` applied to the
/// `i`-th elementary symmetric polynomial in `n - 1` variables. Homogeneous
/// of degree `i`.
pub fn generator(n: u32, j: u32, i: u32) -> Result<MultiPoly, PolyError> {
    let sigma = elementary_symmetric((n - 1) as usize, i)?;
    apply_involution(&sigma, j, n)
}

/// Precomputed table of all generator polynomials for a degree, shared
/// read-only across tuples. Indexed by `(j, i)` with `j` in `[1, n]` and `i`
/// in `[1, n-1]`.
#[derive(Clone, Debug)]
pub struct GeneratorTable {
    n: u32,
    polys: Vec<Vec<MultiPoly>>,
}

impl GeneratorTable {
    pub fn new(n: u32) -> Result<Self, PolyError> {
        assert!(n >= 2, "degree must be at least 2");
        let mut polys = Vec::with_capacity(n as usize);
        for j in 1..=n {
            let mut row = Vec::with_capacity((n - 1) as usize);
            for i in 1..=(n - 1) {
                row.push(generator(n, j, i)?);
            }
            polys.push(row);
        }
        Ok(GeneratorTable { n, polys })
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn get(&self, j: u32, i: u32) -> &MultiPoly {
        assert!(j >= 1 && j <= self.n && i >= 1 && i < self.n);
        &self.polys[(j - 1) as usize][(i - 1) as usize]
    }
}
