//! End-to-end certification: per-tuple verdicts and per-degree reports.
//!
//! A tuple certificate pins down everything needed to re-check the verdict:
//! the exact rank over the rationals, the minor gcd (exact for small
//! instances, a certified multiple otherwise), every candidate prime with
//! its rank modulo p, and the matrix content hash. A degree report is the
//! union over the scheduled tuples, with one witness tuple per bad prime.
//!
//! Certificates are persisted as JSON keyed by (degree, tuple, matrix
//! hash); reruns skip tuples whose certificate is already on disk and whose
//! matrix hash still matches.

mod cache;

pub use cache::{clear_cache, list_cache, CacheEntry};

use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{improved_bound, BoundReport};
use crate::linalg::{
    factorize, minor_gcd_exhaustive, rank_mod_p, rank_over_rationals, sample_minors, LinalgError,
};
use crate::macaulay::{
    all_tuples, build_matrix, canonical_tuples, degree_data, MacaulayError, MacaulayMatrix, Tuple,
};
use crate::poly::{GeneratorTable, PolyError};
use crate::{binom, binom_u64};

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Macaulay(#[from] MacaulayError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("certificate encoding: {0}")]
    Json(#[from] serde_json::Error),
    #[error("re-verification failed for prime {prime} with witness tuple {tuple:?}")]
    WitnessReverification { prime: BigUint, tuple: Vec<u32> },
}

/// Serde helpers rendering big integers as arbitrary-precision JSON numbers.
pub mod big_serde {
    use num_bigint::BigUint;
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn to_number(v: &BigUint) -> serde_json::Number {
        v.to_string()
            .parse()
            .expect("decimal digits form a JSON number")
    }

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        to_number(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        n.to_string().parse().map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(to_number))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
            let ns = Vec::<serde_json::Number>::deserialize(d)?;
            ns.iter()
                .map(|n| n.to_string().parse().map_err(D::Error::custom))
                .collect()
        }
    }
}

/// Resource and scheduling knobs of a run. A fixed config (including the
/// seed) makes reports bit-identical across reruns and worker counts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Config {
    /// Worker threads; 0 picks the runtime default.
    pub jobs: usize,
    /// Process one representative per relabeling orbit instead of all of
    /// `{1..n}^(n-1)`.
    pub symmetry: bool,
    /// Use the exhaustive minor gcd when `binom(D, C)` is at most this.
    pub exhaustive_limit: u64,
    pub trial_division_bound: u64,
    pub pollard_budget: u64,
    /// Maximal minors sampled (distinct pivot strategies) before factoring.
    pub minor_samples: usize,
    /// Column-count cutoff for certifying full rank by fraction-free
    /// elimination; above it a full-rank verdict modulo a fixed 61-bit
    /// prime is used instead (exact whenever it fires), with elimination
    /// kept as the fallback for the deficient case.
    pub rank_bareiss_max_cols: usize,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            jobs: 0,
            symmetry: true,
            exhaustive_limit: 10_000,
            trial_division_bound: 1_000_000,
            pollard_budget: 10_000_000,
            minor_samples: 4,
            rank_bareiss_max_cols: 512,
            seed: 0,
            cache_dir: None,
        }
    }
}

const RANK_SHORTCUT_PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Complete,
    Incomplete,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "bad")]
    Bad,
    #[serde(rename = "good")]
    Good,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    #[serde(with = "big_serde")]
    pub prime: BigUint,
    pub rank_mod_p: u64,
    pub verdict: Verdict,
}

/// Everything certified about one tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleCertificate {
    pub degree: u32,
    pub tuple: Vec<u32>,
    pub orbit_size: u64,
    pub d: u32,
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "D")]
    pub d_rows: u64,
    pub rank_q: u64,
    /// Exact `J_T` on the exhaustive route, otherwise the gcd of the
    /// sampled maximal minors (a multiple of `J_T`).
    #[serde(with = "big_serde")]
    pub minor_gcd: BigUint,
    pub candidates: Vec<CandidateRecord>,
    #[serde(with = "big_serde::vec")]
    pub bad_primes: Vec<BigUint>,
    #[serde(with = "big_serde")]
    pub unresolved_cofactor: BigUint,
    pub status: Status,
    pub matrix_hash: String,
}

impl TupleCertificate {
    pub fn is_complete(&self) -> bool {
        matches!(self.status, Status::Complete)
    }
}

/// Size of the relabeling orbit of a tuple: injective relabelings of its
/// distinct non-identity values into `{1..n-1}`.
fn orbit_size_of(n: u32, tuple: &Tuple) -> u64 {
    let distinct: std::collections::HashSet<u32> =
        tuple.0.iter().copied().filter(|&j| j != n).collect();
    let v = distinct.len() as u64;
    let m = (n - 1) as u64;
    (m - v + 1..=m).product::<u64>().max(1)
}

/// Certifies a single tuple, building the generator table on the spot.
pub fn certify_tuple(
    n: u32,
    tuple: &Tuple,
    config: &Config,
) -> Result<TupleCertificate, CertifyError> {
    let table = GeneratorTable::new(n)?;
    certify_tuple_with_table(n, tuple, orbit_size_of(n, tuple), &table, config)
}

fn certify_tuple_with_table(
    n: u32,
    tuple: &Tuple,
    orbit_size: u64,
    table: &GeneratorTable,
    config: &Config,
) -> Result<TupleCertificate, CertifyError> {
    let data = degree_data(n)?;
    let matrix = build_matrix(n, tuple, table)?;
    let matrix_hash = matrix.content_hash();

    let c = data.c as usize;
    let rank_q = compute_rank_q(&matrix, config)?;

    if (rank_q as u64) < data.c {
        return Ok(TupleCertificate {
            degree: n,
            tuple: tuple.0.clone(),
            orbit_size,
            d: data.d,
            c: data.c,
            d_rows: data.d_rows,
            rank_q: rank_q as u64,
            minor_gcd: BigUint::zero(),
            candidates: Vec::new(),
            bad_primes: Vec::new(),
            unresolved_cofactor: BigUint::one(),
            status: Status::Degenerate,
            matrix_hash,
        });
    }

    let subsets = binom(data.d_rows, data.c);
    let (minor_gcd, unresolved) = if subsets <= BigUint::from(config.exhaustive_limit) {
        let j = minor_gcd_exhaustive(&matrix, config.exhaustive_limit)?;
        debug_assert!(!j.is_zero(), "full rank implies a nonzero minor");
        let fr = factorize(&j, config.trial_division_bound, config.pollard_budget);
        (j, fr)
    } else {
        sampled_minor_gcd(&matrix, config)?
    };
    let factorization = unresolved;

    let mut candidates = Vec::new();
    let mut bad = Vec::new();
    for (prime, _) in &factorization.factors {
        let rank_p = rank_mod_p(&matrix, prime)?;
        let verdict = if (rank_p as u64) < data.c {
            bad.push(prime.clone());
            Verdict::Bad
        } else {
            Verdict::Good
        };
        candidates.push(CandidateRecord {
            prime: prime.clone(),
            rank_mod_p: rank_p as u64,
            verdict,
        });
    }
    let _ = c;

    let status = if factorization.cofactor.is_one() {
        Status::Complete
    } else {
        Status::Incomplete
    };

    Ok(TupleCertificate {
        degree: n,
        tuple: tuple.0.clone(),
        orbit_size,
        d: data.d,
        c: data.c,
        d_rows: data.d_rows,
        rank_q: rank_q as u64,
        minor_gcd,
        candidates,
        bad_primes: bad,
        unresolved_cofactor: factorization.cofactor,
        status,
        matrix_hash,
    })
}

fn compute_rank_q(matrix: &MacaulayMatrix, config: &Config) -> Result<usize, CertifyError> {
    if matrix.n_cols() <= config.rank_bareiss_max_cols {
        return Ok(rank_over_rationals(matrix)?);
    }
    // A full-rank verdict modulo any prime certifies full rank over Q.
    let shortcut = rank_mod_p(matrix, &BigUint::from(RANK_SHORTCUT_PRIME))?;
    if shortcut == matrix.n_cols() {
        Ok(shortcut)
    } else {
        Ok(rank_over_rationals(matrix)?)
    }
}

/// The candidate-prime route: gcd of several maximal minors from distinct
/// pivot strategies, factored; when factoring stalls, extra minors shrink
/// the gcd before giving up.
fn sampled_minor_gcd(
    matrix: &MacaulayMatrix,
    config: &Config,
) -> Result<(BigUint, crate::linalg::FactorResult), CertifyError> {
    let initial = sample_minors(matrix, config.minor_samples.max(1), config.seed)?;
    debug_assert!(initial.iter().all(|cert| !cert.is_zero()));
    let mut g = BigUint::zero();
    for cert in &initial {
        g = g.gcd(cert.value.magnitude());
    }
    let mut used = initial.len();
    let mut fr = factorize(&g, config.trial_division_bound, config.pollard_budget);
    let extra_budget = config.minor_samples.max(4);
    let mut extras = 0usize;
    while !fr.cofactor.is_one() && extras < extra_budget {
        let next = sample_minors_from(matrix, used + 1, config.seed)?;
        extras += 1;
        used += 1;
        let shrunk = g.gcd(next.value.magnitude());
        if shrunk != g {
            g = shrunk;
            fr = factorize(&g, config.trial_division_bound, config.pollard_budget);
        }
    }
    Ok((g, fr))
}

fn sample_minors_from(
    matrix: &MacaulayMatrix,
    index: usize,
    seed: u64,
) -> Result<crate::linalg::MinorCertificate, CertifyError> {
    // strategies 0..3 are fixed; anything beyond is seeded random pivoting
    let certs = sample_minors(matrix, index + 1, seed)?;
    Ok(certs.into_iter().last().expect("at least one minor"))
}

/// One bad prime with the first tuple that certified it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "big_serde")]
    pub prime: BigUint,
    pub tuple: Vec<u32>,
}

/// Observed versus proven generator coefficient size for one slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffStat {
    pub slot: u32,
    pub observed_max: u64,
    pub bound: u64,
}

/// Wall-clock and cache counters; excluded from the JSON encoding so that
/// identical configs produce byte-identical reports.
#[derive(Clone, Debug, Default)]
pub struct RunStats {
    pub wall_ms: u128,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

/// Aggregate verdict for a degree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: u32,
    pub d: u32,
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "D")]
    pub d_rows: u64,
    pub symmetry: bool,
    #[serde(with = "big_serde::vec")]
    pub bad_primes: Vec<BigUint>,
    pub witnesses: Vec<Witness>,
    pub tuples_processed: u64,
    pub tuples_total: u64,
    /// Tuples represented once orbit sizes are accounted for.
    pub tuple_space_covered: u64,
    pub tuple_space_total: u64,
    pub complete: bool,
    pub degenerate_tuples: Vec<Vec<u32>>,
    pub generator_coeff_stats: Vec<CoeffStat>,
    pub bounds: BoundReport,
    pub certificates: Vec<TupleCertificate>,
    #[serde(skip)]
    pub stats: RunStats,
}

impl DegreeReport {
    pub fn has_degenerate(&self) -> bool {
        !self.degenerate_tuples.is_empty()
    }
}

/// Runs the whole degree: schedules tuples (orbit representatives unless
/// symmetry is off), certifies them in a worker pool, re-verifies every
/// reported prime on a freshly built matrix, and aggregates.
pub fn bad_primes(n: u32, config: &Config) -> Result<DegreeReport, CertifyError> {
    let started = Instant::now();
    let data = degree_data(n)?;
    let table = GeneratorTable::new(n)?;

    let scheduled: Vec<(Tuple, u64)> = if config.symmetry {
        canonical_tuples(n)?
    } else {
        let mut ts: Vec<(Tuple, u64)> = all_tuples(n).into_iter().map(|t| (t, 1)).collect();
        ts.sort_by(|(a, _), (b, _)| {
            a.non_identity_entries(n)
                .cmp(&b.non_identity_entries(n))
                .then_with(|| a.cmp(b))
        });
        ts
    };
    let tuples_total = scheduled.len() as u64;
    let tuple_space_covered: u64 = scheduled.iter().map(|(_, s)| s).sum();

    let hits = AtomicU64::new(0);
    let misses = AtomicU64::new(0);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .expect("worker pool");
    let results: Result<Vec<TupleCertificate>, CertifyError> = pool.install(|| {
        use rayon::prelude::*;
        scheduled
            .par_iter()
            .map(|(tuple, orbit)| {
                if let Some(dir) = &config.cache_dir {
                    let matrix = build_matrix(n, tuple, &table)?;
                    let hash = matrix.content_hash();
                    if let Some(mut cert) = cache::load(dir, n, tuple, &hash)? {
                        cert.orbit_size = *orbit;
                        hits.fetch_add(1, Ordering::Relaxed);
                        return Ok(cert);
                    }
                    misses.fetch_add(1, Ordering::Relaxed);
                    let cert = certify_tuple_with_table(n, tuple, *orbit, &table, config)?;
                    cache::store(dir, &cert)?;
                    Ok(cert)
                } else {
                    certify_tuple_with_table(n, tuple, *orbit, &table, config)
                }
            })
            .collect()
    });
    let certificates = results?;

    let mut bad: Vec<BigUint> = Vec::new();
    let mut witnesses: Vec<Witness> = Vec::new();
    let mut degenerate = Vec::new();
    for cert in &certificates {
        for p in &cert.bad_primes {
            if !bad.contains(p) {
                bad.push(p.clone());
                witnesses.push(Witness {
                    prime: p.clone(),
                    tuple: cert.tuple.clone(),
                });
            }
        }
        if matches!(cert.status, Status::Degenerate) {
            degenerate.push(cert.tuple.clone());
        }
    }
    let mut order: Vec<usize> = (0..bad.len()).collect();
    order.sort_by(|&a, &b| bad[a].cmp(&bad[b]));
    let bad: Vec<BigUint> = order.iter().map(|&k| bad[k].clone()).collect();
    let witnesses: Vec<Witness> = order.iter().map(|&k| witnesses[k].clone()).collect();

    // independent re-verification of every reported prime
    for w in &witnesses {
        let tuple = Tuple::new(n, w.tuple.clone())?;
        let fresh = build_matrix(n, &tuple, &table)?;
        let rank = rank_mod_p(&fresh, &w.prime)?;
        if rank as u64 >= data.c {
            return Err(CertifyError::WitnessReverification {
                prime: w.prime.clone(),
                tuple: w.tuple.clone(),
            });
        }
    }

    let generator_coeff_stats = (1..n)
        .map(|i| {
            let observed = (1..=n)
                .map(|j| table.get(j, i).max_abs_coeff())
                .max()
                .unwrap_or_default();
            CoeffStat {
                slot: i,
                observed_max: observed.to_u64().expect("generator coefficients are small"),
                bound: binom_u64(i as u64 + n as u64 - 2, n as u64 - 2),
            }
        })
        .collect();

    let complete = certificates.iter().all(|c| c.is_complete());
    Ok(DegreeReport {
        degree: n,
        d: data.d,
        c: data.c,
        d_rows: data.d_rows,
        symmetry: config.symmetry,
        bad_primes: bad,
        witnesses,
        tuples_processed: certificates.len() as u64,
        tuples_total,
        tuple_space_covered,
        tuple_space_total: (n as u64).pow(n - 1),
        complete,
        degenerate_tuples: degenerate,
        generator_coeff_stats,
        bounds: improved_bound(n)?,
        certificates,
        stats: RunStats {
            wall_ms: started.elapsed().as_millis(),
            cache_hits: hits.load(Ordering::Relaxed),
            cache_misses: misses.load(Ordering::Relaxed),
        },
    })
}
