//! Degree combinatorics and assembly of the sparse coefficient matrices.
//!
//! For degree `n` the relevant Macaulay degree is `d = (n^2 - 3n + 4) / 2`.
//! The matrix of a tuple `T` has one column per degree-`d` monomial in
//! `n - 1` variables (`C` columns) and one row per pair `(i, alpha)` with
//! `|alpha| = d - i` (`D` rows); row `(i, alpha)` is the coefficient vector
//! of `generator(n, T[i], i) * x^alpha`. Row and column order is fixed
//! (graded reverse lexicographic) so matrices, their hashes, and the
//! derived certificates are reproducible.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::binom_u64;
use crate::poly::{GeneratorTable, Monomial};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MacaulayError {
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("tuple must have {expected} entries in [1, {n}], got {got:?}")]
    BadTuple {
        expected: usize,
        n: u32,
        got: Vec<u32>,
    },
}

/// The size data of a degree: Macaulay degree `d`, column count `C`
/// (degree-`d` monomials), row count `D` (all shifted generators).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeData {
    pub n: u32,
    pub d: u32,
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "D")]
    pub d_rows: u64,
}

/// `d`, `C`, `D` for a degree `n >= 2`.
pub fn degree_data(n: u32) -> Result<DegreeData, MacaulayError> {
    if n < 2 {
        return Err(MacaulayError::DegreeTooSmall(n));
    }
    let n64 = n as u64;
    let d = (n64 * n64 + 4 - 3 * n64) / 2;
    let c = binom_u64((n64 * n64 - n64) / 2, n64 - 2);
    let d_rows: u64 = (1..=n64 - 1)
        .map(|i| binom_u64(d - i + n64 - 2, n64 - 2))
        .sum();
    Ok(DegreeData {
        n,
        d: d as u32,
        c,
        d_rows,
    })
}

/// A tuple selecting one involution index per generator slot: `n - 1`
/// entries, each in `[1, n]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Tuple(pub Vec<u32>);

impl Tuple {
    pub fn new(n: u32, entries: Vec<u32>) -> Result<Self, MacaulayError> {
        if entries.len() != (n - 1) as usize || entries.iter().any(|&j| j == 0 || j > n) {
            return Err(MacaulayError::BadTuple {
                expected: (n - 1) as usize,
                n,
                got: entries,
            });
        }
        Ok(Tuple(entries))
    }

    /// The identity tuple `(n, ..., n)` whose generators are the plain
    /// elementary symmetric polynomials.
    pub fn identity(n: u32) -> Self {
        Tuple(vec![n; (n - 1) as usize])
    }

    /// Canonical orbit representative under entrywise relabeling of the
    /// values `1..n-1` (entries equal to `n` are fixed): distinct non-`n`
    /// values are renamed `1, 2, ...` in order of first appearance, which
    /// yields the lexicographically least tuple in the orbit.
    pub fn canonical(&self, n: u32) -> Tuple {
        let mut rename: HashMap<u32, u32> = HashMap::new();
        let mut next = 1u32;
        let mut out = Vec::with_capacity(self.0.len());
        for &j in &self.0 {
            if j == n {
                out.push(n);
            } else {
                let r = *rename.entry(j).or_insert_with(|| {
                    let r = next;
                    next += 1;
                    r
                });
                out.push(r);
            }
        }
        Tuple(out)
    }

    /// Number of entries different from `n`; used for scheduling.
    pub fn non_identity_entries(&self, n: u32) -> usize {
        self.0.iter().filter(|&&j| j != n).count()
    }

    pub fn label(&self) -> String {
        self.0
            .iter()
            .map(|j| j.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

impl std::fmt::Display for Tuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.0
                .iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// All exponent vectors of total degree `deg` in `n_vars` variables, in
/// canonical (descending graded reverse lexicographic) order.
pub fn enumerate_monomials(n_vars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n_vars];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(Monomial::new(current.clone()));
            return;
        }
        for e in 0..=remaining {
            current[pos] = e;
            rec(out, current, pos + 1, remaining - e);
        }
        current[pos] = 0;
    }
    if n_vars == 0 {
        if deg == 0 {
            out.push(Monomial::new(vec![]));
        }
        return out;
    }
    rec(&mut out, &mut current, 0, deg);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// One sparse row: the generator slot `i`, the shift monomial, and the
/// nonzero entries as `(column index, coefficient)` sorted by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRow {
    pub slot: u32,
    pub shift: Monomial,
    pub entries: Vec<(usize, BigInt)>,
}

/// The `D x C` coefficient matrix of one tuple, stored sparse row-major.
#[derive(Clone, Debug)]
pub struct MacaulayMatrix {
    pub data: DegreeData,
    pub tuple: Tuple,
    pub columns: Vec<Monomial>,
    pub rows: Vec<MatrixRow>,
}

/// Builds the matrix of a tuple: rows grouped by slot `i` ascending, shifts
/// in canonical monomial order within each slot; columns are the degree-`d`
/// monomials in canonical order.
pub fn build_matrix(
    n: u32,
    tuple: &Tuple,
    table: &GeneratorTable,
) -> Result<MacaulayMatrix, MacaulayError> {
    let data = degree_data(n)?;
    if tuple.0.len() != (n - 1) as usize || tuple.0.iter().any(|&j| j == 0 || j > n) {
        return Err(MacaulayError::BadTuple {
            expected: (n - 1) as usize,
            n,
            got: tuple.0.clone(),
        });
    }
    let n_vars = (n - 1) as usize;
    let columns = enumerate_monomials(n_vars, data.d);
    debug_assert_eq!(columns.len() as u64, data.c);
    let col_index: HashMap<&Monomial, usize> =
        columns.iter().enumerate().map(|(k, m)| (m, k)).collect();

    let mut rows = Vec::with_capacity(data.d_rows as usize);
    for i in 1..=(n - 1) {
        let g = table.get(tuple.0[(i - 1) as usize], i);
        for alpha in enumerate_monomials(n_vars, data.d - i) {
            let mut entries: Vec<(usize, BigInt)> = g
                .terms()
                .map(|(m, c)| (col_index[&m.mul(&alpha)], c.clone()))
                .collect();
            entries.sort_by_key(|&(col, _)| col);
            rows.push(MatrixRow {
                slot: i,
                shift: alpha,
                entries,
            });
        }
    }
    debug_assert_eq!(rows.len() as u64, data.d_rows);
    Ok(MacaulayMatrix {
        data,
        tuple: tuple.clone(),
        columns,
        rows,
    })
}

impl MacaulayMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    /// Dense copy of the matrix; intended for small instances and tests.
    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::from(0); self.n_cols()]; self.n_rows()];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in &row.entries {
                out[r][*c] = v.clone();
            }
        }
        out
    }

    /// Plain-text triplet export: header `D C n tuple`, then one
    /// `row col value` triple per nonzero, 1-indexed, canonical order.
    pub fn to_triplet_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} {} {} {}",
            self.data.d_rows,
            self.data.c,
            self.data.n,
            self.tuple.label()
        );
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in &row.entries {
                let _ = writeln!(s, "{} {} {}", r + 1, c + 1, v);
            }
        }
        s
    }

    /// SHA-256 of the triplet export; identifies the matrix content.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_triplet_text().as_bytes());
        let digest = hasher.finalize();
        let mut s = String::with_capacity(64);
        for b in digest {
            let _ = write!(s, "{b:02x}");
        }
        s
    }
}

/// One representative per orbit of entrywise value relabeling, with orbit
/// size, scheduled by (number of non-identity entries, lexicographic).
/// Orbit sizes sum to `n^(n-1)`.
pub fn canonical_tuples(n: u32) -> Result<Vec<(Tuple, u64)>, MacaulayError> {
    if n < 2 {
        return Err(MacaulayError::DegreeTooSmall(n));
    }
    let mut orbits: HashMap<Tuple, u64> = HashMap::new();
    for t in all_tuples(n) {
        *orbits.entry(t.canonical(n)).or_insert(0) += 1;
    }
    let mut out: Vec<(Tuple, u64)> = orbits.into_iter().collect();
    out.sort_by(|(a, _), (b, _)| {
        a.non_identity_entries(n)
            .cmp(&b.non_identity_entries(n))
            .then_with(|| a.cmp(b))
    });
    Ok(out)
}

/// Every tuple in `{1..n}^(n-1)`, lexicographic.
pub fn all_tuples(n: u32) -> Vec<Tuple> {
    let len = (n - 1) as usize;
    let total = (n as u64).pow(len as u32);
    let mut out = Vec::with_capacity(total as usize);
    let mut current = vec![1u32; len];
    loop {
        out.push(Tuple(current.clone()));
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if current[pos] < n {
                current[pos] += 1;
                for e in current.iter_mut().skip(pos + 1) {
                    *e = 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::GeneratorTable;
    use std::collections::{BTreeMap, BTreeSet};

    #[test]
    fn degree_data_examples() {
        let d3 = degree_data(3).unwrap();
        assert_eq!((d3.d, d3.c, d3.d_rows), (2, 3, 3));
        let d4 = degree_data(4).unwrap();
        assert_eq!((d4.d, d4.c, d4.d_rows), (4, 15, 19));
        let d5 = degree_data(5).unwrap();
        assert_eq!((d5.d, d5.c, d5.d_rows), (7, 120, 195));
        assert!(degree_data(1).is_err());
    }

    #[test]
    fn degree_data_formulas_up_to_10() {
        for n in 2..=10u64 {
            let dd = degree_data(n as u32).unwrap();
            assert_eq!(dd.d as u64, (n * n + 4 - 3 * n) / 2);
            assert_eq!(dd.c, binom_u64((n * n - n) / 2, n - 2));
            let d_sum: u64 = (1..n)
                .map(|i| binom_u64(dd.d as u64 - i + n - 2, n - 2))
                .sum();
            assert_eq!(dd.d_rows, d_sum);
            // D >= C, with equality exactly at n = 2 and n = 3
            if n > 3 {
                assert!(dd.d_rows > dd.c);
            } else {
                assert_eq!(dd.d_rows, dd.c);
            }
        }
    }

    #[test]
    fn enumerate_monomials_examples() {
        let m22 = enumerate_monomials(2, 2);
        let expect: Vec<Monomial> = [[2, 0], [1, 1], [0, 2]]
            .iter()
            .map(|e| Monomial::new(e.to_vec()))
            .collect();
        assert_eq!(m22, expect);

        let m0 = enumerate_monomials(4, 0);
        assert_eq!(m0, vec![Monomial::one(4)]);

        assert_eq!(enumerate_monomials(3, 7).len() as u64, binom_u64(9, 2));
    }

    #[test]
    fn enumerate_monomials_sorted_and_complete() {
        for n_vars in 1..=4usize {
            for deg in 0..=5u32 {
                let ms = enumerate_monomials(n_vars, deg);
                assert_eq!(
                    ms.len() as u64,
                    binom_u64(deg as u64 + n_vars as u64 - 1, n_vars as u64 - 1)
                );
                for w in ms.windows(2) {
                    assert!(w[0] > w[1]);
                }
                for m in &ms {
                    assert_eq!(m.degree(), deg);
                }
            }
        }
    }

    fn dense_i64(m: &MacaulayMatrix) -> Vec<Vec<i64>> {
        m.to_dense()
            .iter()
            .map(|row| row.iter().map(|v| i64::try_from(v).unwrap()).collect())
            .collect()
    }

    #[test]
    fn matrix_n3_identity_tuple() {
        let table = GeneratorTable::new(3).unwrap();
        let t = Tuple::new(3, vec![3, 3]).unwrap();
        let m = build_matrix(3, &t, &table).unwrap();
        assert_eq!(
            dense_i64(&m),
            vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 1, 0]]
        );
    }

    #[test]
    fn matrix_n3_tuple_1_3() {
        let table = GeneratorTable::new(3).unwrap();
        let t = Tuple::new(3, vec![1, 3]).unwrap();
        let m = build_matrix(3, &t, &table).unwrap();
        assert_eq!(
            dense_i64(&m),
            vec![vec![-2, 1, 0], vec![0, -2, 1], vec![0, 1, 0]]
        );
    }

    #[test]
    fn matrix_shape_matches_degree_data() {
        for n in 2..=5u32 {
            let table = GeneratorTable::new(n).unwrap();
            let dd = degree_data(n).unwrap();
            for t in [
                Tuple::identity(n),
                Tuple::new(n, vec![1; (n - 1) as usize]).unwrap(),
            ] {
                let m = build_matrix(n, &t, &table).unwrap();
                assert_eq!(m.n_rows() as u64, dd.d_rows);
                assert_eq!(m.n_cols() as u64, dd.c);
            }
        }
    }

    #[test]
    fn row_sparsity_matches_generator_terms() {
        let table = GeneratorTable::new(4).unwrap();
        let t = Tuple::new(4, vec![1, 2, 4]).unwrap();
        let m = build_matrix(4, &t, &table).unwrap();
        for row in &m.rows {
            let g = table.get(t.0[(row.slot - 1) as usize], row.slot);
            assert_eq!(row.entries.len(), g.n_terms());
            // bound: number of degree-i monomials
            assert!(row.entries.len() as u64 <= binom_u64(row.slot as u64 + 4 - 2, 4 - 2));
        }
    }

    #[test]
    fn determinism_of_build() {
        let table = GeneratorTable::new(4).unwrap();
        let t = Tuple::new(4, vec![2, 1, 3]).unwrap();
        let a = build_matrix(4, &t, &table).unwrap();
        let b = build_matrix(4, &t, &table).unwrap();
        assert_eq!(a.to_triplet_text(), b.to_triplet_text());
        assert_eq!(a.content_hash(), b.content_hash());
    }

    #[test]
    fn triplet_header_format() {
        let table = GeneratorTable::new(3).unwrap();
        let t = Tuple::new(3, vec![1, 3]).unwrap();
        let m = build_matrix(3, &t, &table).unwrap();
        let text = m.to_triplet_text();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "3 3 3 1-3");
        // first row of the matrix is -2*x1^2 + x1*x2
        assert_eq!(lines.next().unwrap(), "1 1 -2");
        assert_eq!(lines.next().unwrap(), "1 2 1");
    }

    #[test]
    fn tuple_validation() {
        assert!(Tuple::new(3, vec![1, 9]).is_err());
        assert!(Tuple::new(3, vec![1]).is_err());
        assert!(Tuple::new(3, vec![0, 1]).is_err());
        assert!(Tuple::new(3, vec![1, 3]).is_ok());
    }

    /// Brute-force orbit grouping: tuples are equivalent when some
    /// permutation of the values 1..n-1 maps one to the other.
    fn brute_force_orbits(n: u32) -> BTreeMap<Tuple, BTreeSet<Tuple>> {
        use itertools::Itertools;
        let perms: Vec<Vec<u32>> = (1..n).permutations((n - 1) as usize).collect();
        let mut orbit_of: BTreeMap<Tuple, BTreeSet<Tuple>> = BTreeMap::new();
        for t in all_tuples(n) {
            let mut orbit = BTreeSet::new();
            for perm in &perms {
                let image = Tuple(
                    t.0.iter()
                        .map(|&j| if j == n { n } else { perm[(j - 1) as usize] })
                        .collect(),
                );
                orbit.insert(image);
            }
            let rep = orbit.iter().next().unwrap().clone();
            orbit_of.insert(rep, orbit);
        }
        orbit_of
    }

    #[test]
    fn canonical_tuples_match_brute_force() {
        for n in 2..=4u32 {
            let orbits = brute_force_orbits(n);
            let reps: BTreeMap<Tuple, u64> = canonical_tuples(n).unwrap().into_iter().collect();
            assert_eq!(reps.len(), orbits.len());
            for (rep, orbit) in &orbits {
                assert_eq!(reps.get(rep), Some(&(orbit.len() as u64)), "rep {rep}");
            }
        }
    }

    #[test]
    fn canonical_tuples_cover_everything() {
        for n in 2..=5u32 {
            let total: u64 = canonical_tuples(n).unwrap().iter().map(|(_, s)| s).sum();
            assert_eq!(total, (n as u64).pow(n - 1));
        }
    }

    #[test]
    fn identity_tuple_is_singleton_orbit() {
        for n in 2..=6u32 {
            let reps = canonical_tuples(n).unwrap();
            let (first, size) = &reps[0];
            assert_eq!(first, &Tuple::identity(n));
            assert_eq!(*size, 1);
        }
    }

    #[test]
    fn n3_has_five_orbits() {
        let reps = canonical_tuples(3).unwrap();
        let expect = vec![
            (Tuple(vec![3, 3]), 1),
            (Tuple(vec![1, 3]), 2),
            (Tuple(vec![3, 1]), 2),
            (Tuple(vec![1, 1]), 2),
            (Tuple(vec![1, 2]), 2),
        ];
        assert_eq!(reps, expect);
    }
}
