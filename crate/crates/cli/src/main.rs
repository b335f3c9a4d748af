//! Command-line front end for the bad-prime pipeline.
//!
//! Exit codes encode the scientific outcome, not merely success: 0 for a
//! complete run, 2 when some certificate is incomplete (an unresolved
//! factorization cofactor), 3 when any tuple is degenerate (a rank drop
//! over the rationals), and 1 for usage or runtime errors.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use alvero_core::bounds::improved_bound;
use alvero_core::certify::{
    bad_primes, certify_tuple, clear_cache, list_cache, Config, DegreeReport, TupleCertificate,
};
use alvero_core::macaulay::{build_matrix, Tuple};
use alvero_core::oracle::search_counterexamples;
use alvero_core::poly::GeneratorTable;

const CACHE_ENV: &str = "ALVERO_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "alvero",
    version,
    about = "Exact bad primes of the Casas-Alvero conjecture per degree"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the full bad-prime set of a degree.
    Badprimes(BadprimesArgs),
    /// Certify a single tuple.
    Tuple(TupleArgs),
    /// Evaluate the explicit upper bounds on bad primes.
    Bounds(BoundsArgs),
    /// Exhaustively search a finite field for Casas-Alvero witnesses.
    Search(SearchArgs),
    /// Inspect or clear the certificate cache.
    Cache(CacheArgs),
}

#[derive(Args, Debug, Clone)]
struct RunKnobs {
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Process every tuple instead of one representative per orbit.
    #[arg(long)]
    no_symmetry: bool,
    /// Exhaustive minor gcd when binom(D, C) is at most this.
    #[arg(long, default_value_t = 10_000)]
    exhaustive_limit: u64,
    /// Trial-division bound for factoring minor gcds.
    #[arg(long, default_value_t = 1_000_000)]
    trial_bound: u64,
    /// Pollard rho iteration budget per composite.
    #[arg(long, default_value_t = 10_000_000)]
    pollard_budget: u64,
    /// Maximal minors sampled per tuple on the non-exhaustive route.
    #[arg(long, default_value_t = 4)]
    minor_samples: usize,
    /// Seed for randomized pivot strategies.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Certificate cache directory (env ALVERO_CACHE_DIR also works).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl RunKnobs {
    fn to_config(&self) -> Result<Config> {
        if self.exhaustive_limit == 0
            || self.trial_bound == 0
            || self.pollard_budget == 0
            || self.minor_samples == 0
        {
            bail!("budgets must be positive");
        }
        Ok(Config {
            jobs: self.jobs,
            symmetry: !self.no_symmetry,
            exhaustive_limit: self.exhaustive_limit,
            trial_division_bound: self.trial_bound,
            pollard_budget: self.pollard_budget,
            minor_samples: self.minor_samples,
            seed: self.seed,
            cache_dir: self
                .cache_dir
                .clone()
                .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from)),
            ..Config::default()
        })
    }
}

#[derive(Args, Debug)]
struct BadprimesArgs {
    /// Degree n >= 2.
    #[arg(long)]
    degree: u32,
    #[command(flatten)]
    knobs: RunKnobs,
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "table"])]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TupleArgs {
    /// Degree n >= 2.
    #[arg(long)]
    degree: u32,
    /// Comma-separated tuple entries, e.g. 1,3.
    #[arg(long = "t")]
    tuple: String,
    #[command(flatten)]
    knobs: RunKnobs,
    /// Export the matrix in triplet text format to this path.
    #[arg(long)]
    export_matrix: Option<PathBuf>,
    #[arg(long, default_value = "json", value_parser = ["json", "table"])]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Degree n >= 2.
    #[arg(long)]
    degree: u32,
    #[arg(long, default_value = "json", value_parser = ["json", "table"])]
    format: String,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Degree n >= 2.
    #[arg(long)]
    degree: u32,
    /// Field characteristic.
    #[arg(long)]
    p: u64,
    /// Extension degree: the field searched is F_(p^k).
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Enumeration budget (number of monic polynomials, q^n).
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    #[arg(long, default_value = "json", value_parser = ["json", "table"])]
    format: String,
}

#[derive(Args, Debug)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
    /// Cache directory (env ALVERO_CACHE_DIR also works).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// List cached certificates.
    List,
    /// Delete cached certificates.
    Clear,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                print!("{e}");
                std::process::exit(0);
            }
            _ => {
                eprint!("{e}");
                std::process::exit(1);
            }
        },
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Badprimes(args) => cmd_badprimes(args),
        Command::Tuple(args) => cmd_tuple(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Search(args) => cmd_search(args),
        Command::Cache(args) => cmd_cache(args),
    }
}

fn emit(text: String, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn report_exit_code(report: &DegreeReport) -> i32 {
    if report.has_degenerate() {
        3
    } else if !report.complete {
        2
    } else {
        0
    }
}

fn certificate_exit_code(cert: &TupleCertificate) -> i32 {
    use alvero_core::certify::Status;
    match cert.status {
        Status::Degenerate => 3,
        Status::Incomplete => 2,
        Status::Complete => 0,
    }
}

fn cmd_badprimes(args: BadprimesArgs) -> Result<i32> {
    let config = args.knobs.to_config()?;
    let report = bad_primes(args.degree, &config)?;
    let text = match args.format.as_str() {
        "json" => serde_json::to_string_pretty(&report)? + "\n",
        _ => render_report_table(&report),
    };
    emit(text, args.output.as_ref())?;
    Ok(report_exit_code(&report))
}

fn parse_tuple(degree: u32, raw: &str) -> Result<Tuple> {
    let entries: Vec<u32> = raw
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .context("tuple entries must be integers")
        })
        .collect::<Result<_>>()?;
    Tuple::new(degree, entries).map_err(|e| anyhow::anyhow!("{e}"))
}

fn cmd_tuple(args: TupleArgs) -> Result<i32> {
    let config = args.knobs.to_config()?;
    let tuple = parse_tuple(args.degree, &args.tuple)?;
    if let Some(path) = &args.export_matrix {
        let table = GeneratorTable::new(args.degree)?;
        let matrix = build_matrix(args.degree, &tuple, &table)?;
        std::fs::write(path, matrix.to_triplet_text())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let cert = certify_tuple(args.degree, &tuple, &config)?;
    let text = match args.format.as_str() {
        "json" => serde_json::to_string_pretty(&cert)? + "\n",
        _ => render_certificate_table(&cert),
    };
    emit(text, args.output.as_ref())?;
    Ok(certificate_exit_code(&cert))
}

fn cmd_bounds(args: BoundsArgs) -> Result<i32> {
    let report = improved_bound(args.degree)?;
    let text = match args.format.as_str() {
        "json" => serde_json::to_string_pretty(&report)? + "\n",
        _ => {
            let mut s = String::new();
            s.push_str(&format!(
                "degree {}: C={} D={}\n",
                report.n, report.c, report.d_rows
            ));
            s.push_str(&format!(
                "bound5 = {} ({} digits)\n",
                report.bound5.display(),
                report.bound5.digits
            ));
            s.push_str(&format!(
                "bound6 = {} ({} digits)\n",
                report.bound6.display(),
                report.bound6.digits
            ));
            s.push_str(&format!(
                "improved-bound cutoff attained at slot i={}\n",
                report.cutoff_slot
            ));
            s
        }
    };
    emit(text, None)?;
    Ok(0)
}

fn cmd_search(args: SearchArgs) -> Result<i32> {
    let report = search_counterexamples(args.degree, args.p, args.k, args.budget)?;
    let text = match args.format.as_str() {
        "json" => serde_json::to_string_pretty(&report)? + "\n",
        _ => {
            let mut s = format!(
                "degree {} over F_{} ({} monic polynomials scanned): {} witnesses\n",
                report.n,
                report.q,
                (report.q as u128).pow(report.n),
                report.witnesses.len()
            );
            for (idx, w) in report.witnesses.iter().enumerate() {
                if report.k == 1 {
                    match report.witness_as_fp(idx) {
                        Some(f) => s.push_str(&format!("  {f}\n")),
                        None => s.push_str(&format!("  {w:?}\n")),
                    }
                } else {
                    s.push_str(&format!("  {w:?}\n"));
                }
            }
            s
        }
    };
    emit(text, None)?;
    Ok(0)
}

fn cmd_cache(args: CacheArgs) -> Result<i32> {
    let dir = args
        .cache_dir
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .context("no cache directory: pass --cache-dir or set ALVERO_CACHE_DIR")?;
    match args.action {
        CacheAction::List => {
            let entries = list_cache(&dir)?;
            let mut out = String::new();
            for e in &entries {
                out.push_str(&format!(
                    "n={} tuple={:?} status={:?} {}\n",
                    e.degree,
                    e.tuple,
                    e.status,
                    e.file.display()
                ));
            }
            out.push_str(&format!("{} cached certificates\n", entries.len()));
            emit(out, None)?;
        }
        CacheAction::Clear => {
            let removed = clear_cache(&dir)?;
            emit(format!("removed {removed} cached certificates\n"), None)?;
        }
    }
    Ok(0)
}

fn render_report_table(report: &DegreeReport) -> String {
    let mut s = String::new();
    let primes = report
        .bad_primes
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    s.push_str(&format!(
        "degree {}: bad primes {{{}}}\n",
        report.degree, primes
    ));
    s.push_str(&format!(
        "d={} C={} D={}  tuples {}/{} ({} of {} covered)  {}\n",
        report.d,
        report.c,
        report.d_rows,
        report.tuples_processed,
        report.tuples_total,
        report.tuple_space_covered,
        report.tuple_space_total,
        if report.has_degenerate() {
            "DEGENERATE TUPLES FOUND"
        } else if report.complete {
            "complete"
        } else {
            "incomplete"
        }
    ));
    if !report.witnesses.is_empty() {
        s.push_str("witnesses:\n");
        for w in &report.witnesses {
            s.push_str(&format!(
                "  {} <- ({})\n",
                w.prime,
                w.tuple
                    .iter()
                    .map(|j| j.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ));
        }
    }
    for t in &report.degenerate_tuples {
        s.push_str(&format!("DEGENERATE: tuple {t:?} drops rank over Q\n"));
    }
    s.push_str(&format!(
        "bound5 = {} ({} digits)\nbound6 = {} ({} digits)\n",
        report.bounds.bound5.display(),
        report.bounds.bound5.digits,
        report.bounds.bound6.display(),
        report.bounds.bound6.digits
    ));
    s.push_str(&format!(
        "wall {} ms, cache {} hits / {} misses\n",
        report.stats.wall_ms, report.stats.cache_hits, report.stats.cache_misses
    ));
    s
}

fn render_certificate_table(cert: &TupleCertificate) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "degree {} tuple ({})  orbit size {}\n",
        cert.degree,
        cert.tuple
            .iter()
            .map(|j| j.to_string())
            .collect::<Vec<_>>()
            .join(","),
        cert.orbit_size
    ));
    s.push_str(&format!(
        "d={} C={} D={}  rank over Q = {}  status {:?}\n",
        cert.d, cert.c, cert.d_rows, cert.rank_q, cert.status
    ));
    s.push_str(&format!("minor gcd = {}\n", cert.minor_gcd));
    for c in &cert.candidates {
        s.push_str(&format!(
            "  p={}  rank mod p = {}  {:?}\n",
            c.prime, c.rank_mod_p, c.verdict
        ));
    }
    if cert.unresolved_cofactor > num_bigint::BigUint::from(1u32) {
        s.push_str(&format!(
            "unresolved cofactor: {}\n",
            cert.unresolved_cofactor
        ));
    }
    s.push_str(&format!("matrix hash {}\n", cert.matrix_hash));
    s
}
