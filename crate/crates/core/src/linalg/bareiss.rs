//! Fraction-free elimination over the integers.
//!
//! Bareiss' one-step algorithm keeps every intermediate entry an exact
//! minor of the input, so each elimination step divides exactly by the
//! previous pivot; a nonzero remainder is an internal error, never rounded
//! away. Pivots are free (full pivoting); the pivot strategy decides which
//! nonzero entry to take, which is how distinct maximal minors are sampled
//! from one matrix.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LinalgError;
use crate::binom;
use crate::macaulay::MacaulayMatrix;

/// Pivot selection rule for fraction-free elimination.
#[derive(Clone, Debug)]
pub enum PivotStrategy {
    /// Minimal fill count `(nnz(row)-1)*(nnz(col)-1)`, ties by smallest
    /// absolute entry, then lowest row, then lowest column.
    Markowitz,
    /// Largest absolute entry, ties by lowest row then column.
    MaxAbs,
    /// Lowest row index, then lowest column index.
    FirstNonzero,
    /// Markowitz count with ties by largest absolute entry and highest row.
    MarkowitzLargest,
    /// Uniform choice among the nonzero active entries, seeded.
    Random(u64),
}

pub(super) struct Elimination {
    pub rank: usize,
    /// Original row indices in elimination order.
    pub pivot_rows: Vec<usize>,
    /// Original column indices in elimination order.
    pub pivot_cols: Vec<usize>,
    /// Final pivot: the determinant of the pivot rows x pivot columns
    /// submatrix taken in elimination order.
    pub last_pivot: BigInt,
}

fn parity_sign(seq: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(super) fn eliminate(
    m: &mut [Vec<BigInt>],
    strategy: &PivotStrategy,
) -> Result<Elimination, LinalgError> {
    let n_rows = m.len();
    let n_cols = if n_rows == 0 { 0 } else { m[0].len() };
    let mut row_active = vec![true; n_rows];
    let mut col_active = vec![true; n_cols];
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut prev = BigInt::one();
    let mut rng = match strategy {
        PivotStrategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };

    loop {
        let pivot = select_pivot(m, &row_active, &col_active, strategy, &mut rng);
        let (pr, pc) = match pivot {
            Some(p) => p,
            None => break,
        };
        let piv = m[pr][pc].clone();
        row_active[pr] = false;
        col_active[pc] = false;
        pivot_rows.push(pr);
        pivot_cols.push(pc);

        let scale_only_identity = piv == prev;
        let pivot_row = m[pr].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if !row_active[r] {
                continue;
            }
            let lead = row[pc].clone();
            if lead.is_zero() {
                if scale_only_identity {
                    continue;
                }
                for (c, active) in col_active.iter().enumerate() {
                    if !active || row[c].is_zero() {
                        continue;
                    }
                    let num = &row[c] * &piv;
                    let (q, rem) = num.div_rem(&prev);
                    if !rem.is_zero() {
                        return Err(LinalgError::InexactDivision);
                    }
                    row[c] = q;
                }
            } else {
                for (c, active) in col_active.iter().enumerate() {
                    if !active {
                        continue;
                    }
                    let num = &row[c] * &piv - &lead * &pivot_row[c];
                    let (q, rem) = num.div_rem(&prev);
                    if !rem.is_zero() {
                        return Err(LinalgError::InexactDivision);
                    }
                    row[c] = q;
                }
            }
        }
        prev = piv;
    }

    Ok(Elimination {
        rank: pivot_rows.len(),
        pivot_rows,
        pivot_cols,
        last_pivot: prev,
    })
}

fn select_pivot(
    m: &[Vec<BigInt>],
    row_active: &[bool],
    col_active: &[bool],
    strategy: &PivotStrategy,
    rng: &mut Option<ChaCha8Rng>,
) -> Option<(usize, usize)> {
    let nonzero = |r: usize, c: usize| !m[r][c].is_zero();
    match strategy {
        PivotStrategy::FirstNonzero => {
            for (r, row) in m.iter().enumerate() {
                if !row_active[r] {
                    continue;
                }
                for (c, v) in row.iter().enumerate() {
                    if col_active[c] && !v.is_zero() {
                        return Some((r, c));
                    }
                }
            }
            None
        }
        PivotStrategy::MaxAbs => {
            let mut best: Option<((usize, usize), BigInt)> = None;
            for (r, row) in m.iter().enumerate() {
                if !row_active[r] {
                    continue;
                }
                for (c, v) in row.iter().enumerate() {
                    if !col_active[c] || v.is_zero() {
                        continue;
                    }
                    let mag = v.abs();
                    let better = match &best {
                        None => true,
                        Some((_, bm)) => mag > *bm,
                    };
                    if better {
                        best = Some(((r, c), mag));
                    }
                }
            }
            best.map(|(p, _)| p)
        }
        PivotStrategy::Random(_) => {
            let rng = rng.as_mut().expect("random strategy carries an rng");
            let mut candidates = Vec::new();
            for (r, row) in m.iter().enumerate() {
                if !row_active[r] {
                    continue;
                }
                for (c, v) in row.iter().enumerate() {
                    if col_active[c] && !v.is_zero() {
                        candidates.push((r, c));
                    }
                }
            }
            if candidates.is_empty() {
                None
            } else {
                Some(candidates[rng.random_range(0..candidates.len())])
            }
        }
        PivotStrategy::Markowitz | PivotStrategy::MarkowitzLargest => {
            let n_rows = m.len();
            let n_cols = col_active.len();
            let mut row_nnz = vec![0usize; n_rows];
            let mut col_nnz = vec![0usize; n_cols];
            for (r, row) in m.iter().enumerate() {
                if !row_active[r] {
                    continue;
                }
                for (c, v) in row.iter().enumerate() {
                    if col_active[c] && !v.is_zero() {
                        row_nnz[r] += 1;
                        col_nnz[c] += 1;
                    }
                }
            }
            // score: (fill, |entry|, row, col); MarkowitzLargest flips the
            // entry and row preferences.
            let largest = matches!(strategy, PivotStrategy::MarkowitzLargest);
            let mut best: Option<((usize, usize), usize, BigInt)> = None;
            for (r, row) in m.iter().enumerate() {
                if !row_active[r] {
                    continue;
                }
                for (c, v) in row.iter().enumerate() {
                    if !col_active[c] || v.is_zero() {
                        continue;
                    }
                    debug_assert!(nonzero(r, c));
                    let fill = (row_nnz[r] - 1) * (col_nnz[c] - 1);
                    let mag = v.abs();
                    let better = match &best {
                        None => true,
                        Some((bp, bfill, bmag)) => {
                            if fill != *bfill {
                                fill < *bfill
                            } else if mag != *bmag {
                                if largest {
                                    mag > *bmag
                                } else {
                                    mag < *bmag
                                }
                            } else if largest {
                                r > bp.0
                            } else {
                                false // earlier (r, c) wins ties
                            }
                        }
                    };
                    if better {
                        best = Some(((r, c), fill, mag));
                    }
                }
            }
            best.map(|(p, _, _)| p)
        }
    }
}

/// Exact rank over the rationals via fraction-free elimination.
pub fn rank_over_rationals(m: &MacaulayMatrix) -> Result<usize, LinalgError> {
    rank_over_rationals_dense(m.to_dense())
}

/// Rank of a dense integer matrix over the rationals.
pub fn rank_over_rationals_dense(mut dense: Vec<Vec<BigInt>>) -> Result<usize, LinalgError> {
    Ok(eliminate(&mut dense, &PivotStrategy::Markowitz)?.rank)
}

/// One nonzero maximal minor together with the rows that produce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorCertificate {
    /// Determinant of the selected rows (sorted ascending) against all
    /// columns in natural order; zero when the matrix is rank-deficient.
    pub value: BigInt,
    /// Selected row indices, sorted ascending; empty when `value` is zero.
    pub rows: Vec<usize>,
    /// The same rows in elimination (pivot) order.
    pub pivot_rows: Vec<usize>,
    /// Pivot columns in elimination order.
    pub pivot_cols: Vec<usize>,
}

impl MinorCertificate {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Extracts a nonzero `C x C` minor with the default (Markowitz) pivoting,
/// or the zero certificate when rank < C.
pub fn nonzero_maximal_minor(m: &MacaulayMatrix) -> Result<MinorCertificate, LinalgError> {
    maximal_minor_with(m, &PivotStrategy::Markowitz)
}

fn maximal_minor_with(
    m: &MacaulayMatrix,
    strategy: &PivotStrategy,
) -> Result<MinorCertificate, LinalgError> {
    let mut dense = m.to_dense();
    let elim = eliminate(&mut dense, strategy)?;
    if elim.rank < m.n_cols() {
        return Ok(MinorCertificate {
            value: BigInt::zero(),
            rows: Vec::new(),
            pivot_rows: elim.pivot_rows,
            pivot_cols: elim.pivot_cols,
        });
    }
    let sign = parity_sign(&elim.pivot_rows) * parity_sign(&elim.pivot_cols);
    let mut rows = elim.pivot_rows.clone();
    rows.sort_unstable();
    Ok(MinorCertificate {
        value: &elim.last_pivot * sign,
        rows,
        pivot_rows: elim.pivot_rows,
        pivot_cols: elim.pivot_cols,
    })
}

/// Samples up to `count` maximal minors using distinct pivot strategies;
/// strategies beyond the four fixed ones use seeded random pivoting.
/// Stops early once the gcd of the sampled values cannot shrink further
/// (it reached 1) or the matrix proves rank-deficient.
pub fn sample_minors(
    m: &MacaulayMatrix,
    count: usize,
    seed: u64,
) -> Result<Vec<MinorCertificate>, LinalgError> {
    let mut out = Vec::new();
    let mut running_gcd = BigUint::zero();
    for idx in 0..count {
        let strategy = match idx {
            0 => PivotStrategy::Markowitz,
            1 => PivotStrategy::MaxAbs,
            2 => PivotStrategy::FirstNonzero,
            3 => PivotStrategy::MarkowitzLargest,
            k => PivotStrategy::Random(seed.wrapping_add(k as u64)),
        };
        let cert = maximal_minor_with(m, &strategy)?;
        if cert.is_zero() {
            return Ok(vec![cert]);
        }
        running_gcd = running_gcd.gcd(&cert.value.magnitude().clone());
        out.push(cert);
        if running_gcd.is_one() {
            break;
        }
    }
    Ok(out)
}

/// Exact determinant of a square integer matrix by textbook Bareiss with
/// row swaps. Used to re-evaluate minor certificates and by the exhaustive
/// oracle; deliberately independent of the strategy-driven elimination.
pub fn det_bigint(mat: &[Vec<BigInt>]) -> Result<BigInt, LinalgError> {
    let n = mat.len();
    if n == 0 {
        return Ok(BigInt::one());
    }
    debug_assert!(mat.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<BigInt>> = mat.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = match (k..n).find(|&r| !m[r][k].is_zero()) {
            Some(r) => r,
            None => return Ok(BigInt::zero()),
        };
        if pivot_row != k {
            m.swap(pivot_row, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, rem) = num.div_rem(&prev);
                if !rem.is_zero() {
                    return Err(LinalgError::InexactDivision);
                }
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Ok(&m[n - 1][n - 1] * sign)
}

/// Bareiss determinant in `i128`; `None` when any intermediate overflows.
fn det_i128(sub: &mut [Vec<i128>]) -> Option<i128> {
    let n = sub.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let pr = match (k..n).find(|&r| sub[r][k] != 0) {
            Some(r) => r,
            None => return Some(0),
        };
        if pr != k {
            sub.swap(pr, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = sub[k][k].checked_mul(sub[i][j])?;
                let b = sub[i][k].checked_mul(sub[k][j])?;
                let num = a.checked_sub(b)?;
                debug_assert_eq!(num % prev, 0);
                sub[i][j] = num / prev;
            }
            sub[i][k] = 0;
        }
        prev = sub[k][k];
    }
    Some(sign * sub[n - 1][n - 1])
}

/// Exact gcd of all `C x C` minors (the C-th determinantal divisor).
///
/// Refuses when `binom(D, C)` exceeds `limit`. Enumerates row subsets in
/// lexicographic order, accumulating the gcd of the determinant values;
/// stops early only when the gcd reaches 1, which no further minor can
/// change. Returns 0 when every maximal minor vanishes (rank < C).
pub fn minor_gcd_exhaustive(m: &MacaulayMatrix, limit: u64) -> Result<BigUint, LinalgError> {
    let d = m.n_rows() as u64;
    let c = m.n_cols() as u64;
    let subsets = binom(d, c);
    if subsets > BigUint::from(limit) {
        return Err(LinalgError::TooManyMinors { subsets, limit });
    }

    let dense = m.to_dense();
    let small: Option<Vec<Vec<i128>>> = dense
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| i128::try_from(v).ok())
                .collect::<Option<Vec<_>>>()
        })
        .collect();

    let c = c as usize;
    let mut g = BigUint::zero();
    let mut buf_small: Vec<Vec<i128>> = vec![vec![0; c]; c];
    for combo in itertools::Itertools::combinations(0..m.n_rows(), c) {
        let det: BigInt = match &small {
            Some(rows) => {
                for (dst, &src) in buf_small.iter_mut().zip(&combo) {
                    dst.copy_from_slice(&rows[src]);
                }
                match det_i128(&mut buf_small) {
                    Some(v) => BigInt::from(v),
                    None => {
                        let sub: Vec<Vec<BigInt>> =
                            combo.iter().map(|&r| dense[r].clone()).collect();
                        det_bigint(&sub)?
                    }
                }
            }
            None => {
                let sub: Vec<Vec<BigInt>> = combo.iter().map(|&r| dense[r].clone()).collect();
                det_bigint(&sub)?
            }
        };
        if !det.is_zero() {
            g = g.gcd(det.magnitude());
            if g.is_one() {
                break;
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macaulay::{build_matrix, Tuple};
    use crate::poly::GeneratorTable;

    fn mat(entries: &[&[i64]]) -> Vec<Vec<BigInt>> {
        entries
            .iter()
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn n3_matrix(t: &[u32]) -> MacaulayMatrix {
        let table = GeneratorTable::new(3).unwrap();
        build_matrix(3, &Tuple::new(3, t.to_vec()).unwrap(), &table).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_over_rationals(&n3_matrix(&[1, 3])).unwrap(), 3);
        assert_eq!(rank_over_rationals(&n3_matrix(&[3, 3])).unwrap(), 3);
        assert_eq!(
            rank_over_rationals_dense(mat(&[&[0, 0], &[0, 0]])).unwrap(),
            0
        );
    }

    #[test]
    fn rank_unchanged_by_duplicated_row() {
        let m = n3_matrix(&[1, 3]);
        let mut dense = m.to_dense();
        dense.push(dense[0].clone());
        assert_eq!(rank_over_rationals_dense(dense).unwrap(), 3);
    }

    #[test]
    fn maximal_minor_examples() {
        let cert = nonzero_maximal_minor(&n3_matrix(&[1, 3])).unwrap();
        assert_eq!(cert.value.abs(), BigInt::from(2));
        assert_eq!(cert.rows, vec![0, 1, 2]);
        let cert = nonzero_maximal_minor(&n3_matrix(&[3, 3])).unwrap();
        assert_eq!(cert.value.abs(), BigInt::from(1));
    }

    #[test]
    fn maximal_minor_zero_flag_on_deficient_input() {
        let table = GeneratorTable::new(3).unwrap();
        let mut m = build_matrix(3, &Tuple::new(3, vec![1, 3]).unwrap(), &table).unwrap();
        // duplicate one row three times so only two independent rows remain
        m.rows[1] = m.rows[0].clone();
        m.rows[2] = m.rows[0].clone();
        let cert = nonzero_maximal_minor(&m).unwrap();
        assert!(cert.is_zero());
        assert!(cert.rows.is_empty());
    }

    #[test]
    fn minor_reevaluation_reproduces_value() {
        for t in [[1u32, 3], [3, 3], [1, 2], [2, 1]] {
            let m = n3_matrix(&t);
            let cert = nonzero_maximal_minor(&m).unwrap();
            let dense = m.to_dense();
            let sub: Vec<Vec<BigInt>> = cert.rows.iter().map(|&r| dense[r].clone()).collect();
            assert_eq!(det_bigint(&sub).unwrap(), cert.value);
        }
    }

    #[test]
    fn minor_gcd_examples() {
        assert_eq!(
            minor_gcd_exhaustive(&n3_matrix(&[1, 3]), 10_000).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(
            minor_gcd_exhaustive(&n3_matrix(&[1, 1]), 10_000).unwrap(),
            BigUint::from(1u32)
        );
    }

    #[test]
    fn minor_gcd_limit_refusal() {
        let table = GeneratorTable::new(5).unwrap();
        let m = build_matrix(5, &Tuple::identity(5), &table).unwrap();
        match minor_gcd_exhaustive(&m, 10_000) {
            Err(LinalgError::TooManyMinors { subsets, limit }) => {
                assert_eq!(limit, 10_000);
                assert_eq!(subsets, binom(195, 120));
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(
            det_bigint(&mat(&[&[1, 2], &[3, 4]])).unwrap(),
            BigInt::from(-2)
        );
        assert_eq!(
            det_bigint(&mat(&[&[0, 1], &[1, 0]])).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            det_bigint(&mat(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]])).unwrap(),
            BigInt::from(30)
        );
        assert_eq!(
            det_bigint(&mat(&[&[1, 1], &[1, 1]])).unwrap(),
            BigInt::zero()
        );
    }

    #[test]
    fn det_i128_agrees_with_bigint() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]],
            vec![vec![-2, 1, 0], vec![0, -2, 1], vec![0, 1, 0]],
            vec![vec![0, 0], vec![0, 0]],
        ];
        for case in cases {
            let big = mat(&case.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
            let mut small: Vec<Vec<i128>> = case
                .iter()
                .map(|r| r.iter().map(|&v| v as i128).collect())
                .collect();
            assert_eq!(
                BigInt::from(det_i128(&mut small).unwrap()),
                det_bigint(&big).unwrap()
            );
        }
    }

    #[test]
    fn sampled_minors_are_all_multiples_of_the_exact_gcd() {
        for t in [[1u32, 3], [3, 1], [1, 2]] {
            let m = n3_matrix(&t);
            let exact = minor_gcd_exhaustive(&m, 10_000).unwrap();
            for cert in sample_minors(&m, 4, 7).unwrap() {
                assert!(cert.value.magnitude().is_multiple_of(&exact));
            }
        }
    }
}
