//! Explicit upper bounds on the bad primes of a degree.
//!
//! Any nonzero maximal minor is bounded by `C!` times a product of per-row
//! coefficient bounds, and every bad prime divides such a minor. The coarse
//! bound multiplies the bound of every row; the improved one sorts the `D`
//! per-row bounds and keeps only the `C` largest, since a minor only uses
//! `C` rows. Both are exact big integers; for n >= 5 only the factored form
//! and the digit count are human-usable.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::binom;
use crate::macaulay::{degree_data, DegreeData, MacaulayError};

/// A bound in factored form: `C! * prod base^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredBound {
    /// `C`, whose factorial is the leading factor.
    pub factorial_of: u64,
    /// `(base, exponent)` pairs, bases ascending.
    pub powers: Vec<(u64, u64)>,
    /// Exact value, as a decimal string in JSON.
    #[serde(with = "crate::certify::big_serde")]
    pub value: BigUint,
    /// Number of decimal digits of `value`.
    pub digits: usize,
}

impl FactoredBound {
    fn new(factorial_of: u64, powers: Vec<(u64, u64)>) -> Self {
        let mut value = factorial(factorial_of);
        for &(base, exp) in &powers {
            value *= BigUint::from(base).pow(exp as u32);
        }
        let digits = value.to_str_radix(10).len();
        FactoredBound {
            factorial_of,
            powers,
            value,
            digits,
        }
    }

    /// e.g. `15! * 3^10 * 6^6 * 10^3`
    pub fn display(&self) -> String {
        let mut s = format!("{}!", self.factorial_of);
        for &(base, exp) in &self.powers {
            s.push_str(&format!(" * {base}^{exp}"));
        }
        s
    }
}

/// The two bounds plus the sorted multiset they come from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u32,
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "D")]
    pub d_rows: u64,
    /// Per-row coefficient bounds as `(value, multiplicity)`, values
    /// ascending; total multiplicity is `D`.
    pub row_bounds: Vec<(u64, u64)>,
    pub bound5: FactoredBound,
    pub bound6: FactoredBound,
    /// The slot index `i` whose bound value sits at position `D - C + 1`
    /// of the sorted multiset (the smallest one the improved bound keeps).
    pub cutoff_slot: u32,
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

fn binom_u(n: u64, k: u64) -> u64 {
    u64::try_from(&binom(n, k)).expect("row bound fits u64")
}

/// Per-slot `(bound value, multiplicity)` pairs: slot `i` contributes the
/// number of degree-`i` monomials, once for each of its rows.
fn row_bound_multiset(data: &DegreeData) -> Vec<(u32, u64, u64)> {
    let n = data.n as u64;
    (1..n)
        .map(|i| {
            let value = binom_u(i + n - 2, n - 2);
            let mult = binom_u(data.d as u64 - i + n - 2, n - 2);
            (i as u32, value, mult)
        })
        .collect()
}

/// The coarse bound: `C!` times every row's coefficient bound.
pub fn upper_bound(n: u32) -> Result<BigUint, MacaulayError> {
    let data = degree_data(n)?;
    let powers = row_bound_multiset(&data)
        .into_iter()
        .map(|(_, value, mult)| (value, mult))
        .collect();
    Ok(FactoredBound::new(data.c, powers).value)
}

/// The improved bound: keep only the `C` largest row bounds. Also returns
/// the coarse bound for comparison.
pub fn improved_bound(n: u32) -> Result<BoundReport, MacaulayError> {
    let data = degree_data(n)?;
    let per_slot = row_bound_multiset(&data);
    let bound5 = FactoredBound::new(data.c, per_slot.iter().map(|&(_, v, m)| (v, m)).collect());

    // the multiset is already sorted: the bound value is strictly
    // increasing in the slot index
    debug_assert!(per_slot.windows(2).all(|w| w[0].1 < w[1].1));
    let mut keep = data.c;
    let mut kept: Vec<(u64, u64)> = Vec::new();
    let mut cutoff_slot = per_slot.last().map(|&(i, _, _)| i).unwrap_or(0);
    for &(i, value, mult) in per_slot.iter().rev() {
        if keep == 0 {
            break;
        }
        let take = mult.min(keep);
        kept.push((value, take));
        keep -= take;
        cutoff_slot = i;
    }
    kept.reverse();
    let bound6 = FactoredBound::new(data.c, kept);
    debug_assert!(bound6.value <= bound5.value);

    Ok(BoundReport {
        n,
        c: data.c,
        d_rows: data.d_rows,
        row_bounds: per_slot.iter().map(|&(_, v, m)| (v, m)).collect(),
        bound5,
        bound6,
        cutoff_slot,
    })
}
