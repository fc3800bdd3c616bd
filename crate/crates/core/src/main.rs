use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use selfdual::analyze::{
    is_self_dual, verify_polynomial, weight_distribution_with, EnumOptions, Family, Mode,
};
use selfdual::error::Error;
use selfdual::gf2::BitPoly;
use selfdual::io::{self as sio, RecordLine, TableReport};
use selfdual::search::{run_search, Dedup, SearchConfig};

const EXIT_PARSE: u8 = 2;
const EXIT_NOT_SELF_DUAL: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;
const EXIT_TABLE_MISMATCH: u8 = 5;

/// Self-dual [72, 36] codes from two-circulant convolutional constructions.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one code, enumerate it and print its record as JSON.
    Verify {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print all weight counters of one code.
    Distribution {
        #[command(flatten)]
        poly: OptPolyArgs,
        /// Read the generator matrix as 0/1 rows from this file instead.
        #[arg(long, conflicts_with_all = ["family", "hex", "k"])]
        raw: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Search all canonical polynomials in a range of constraint lengths.
    Search {
        #[arg(long)]
        family: FamilyArg,
        /// Single constraint length; shorthand for --k-min K --k-max K.
        #[arg(long, conflicts_with_all = ["k_min", "k_max"])]
        k: Option<u32>,
        #[arg(long)]
        k_min: Option<u32>,
        #[arg(long)]
        k_max: Option<u32>,
        /// Records file (JSON lines).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep every verified polynomial instead of one per parameter set.
        #[arg(long)]
        all: bool,
        /// Skip the gcd prefilter.
        #[arg(long)]
        no_gcd_filter: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare the published tables with computed parameters.
    Tables {
        /// Fixture CSV; defaults to the embedded copy.
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Compare against this records file instead of recomputing.
        #[arg(long)]
        results: Option<PathBuf>,
        /// Only rows of this family.
        #[arg(long)]
        family: Option<FamilyArg>,
        /// Check a seeded random subset of this many rows.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Singly,
    Doubly,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Singly => Family::SinglyEven,
            FamilyArg::Doubly => Family::DoublyEven,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Orbit,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long)]
    family: FamilyArg,
    /// Polynomial in hex, bit i = coefficient of x^i.
    #[arg(long)]
    hex: String,
    /// Constraint length (degree + 1).
    #[arg(long)]
    k: u32,
}

#[derive(Args)]
struct OptPolyArgs {
    #[arg(long, required_unless_present = "raw")]
    family: Option<FamilyArg>,
    #[arg(long, required_unless_present = "raw")]
    hex: Option<String>,
    #[arg(long, required_unless_present = "raw")]
    k: Option<u32>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl RunArgs {
    fn options(&self) -> EnumOptions {
        EnumOptions {
            mode: match self.mode {
                ModeArg::Full => Mode::Full,
                ModeArg::Orbit => Mode::OrbitReduced,
            },
            threads: self.threads,
            progress: true,
            ..Default::default()
        }
    }
}

/// A failure with the exit code it maps to.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotSelfDual => EXIT_NOT_SELF_DUAL,
            Error::NoTemplate { .. }
            | Error::WrongLength(_)
            | Error::WrongFamily(_)
            | Error::Inconsistent(_) => EXIT_INCONSISTENT,
            _ => EXIT_PARSE,
        };
        Failure(code, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(EXIT_PARSE, e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn parse_poly(hex: &str, k: u32) -> Result<BitPoly, Failure> {
    Ok(BitPoly::from_hex(hex, k)?)
}

fn in_threads<T>(threads: usize, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    selfdual::analyze::in_pool(threads, f)
}

fn cmd_verify(poly: PolyArgs, run: RunArgs) -> CmdResult {
    let p = parse_poly(&poly.hex, poly.k)?;
    let opts = run.options();
    let rec = in_threads(run.threads, || {
        verify_polynomial(poly.family.into(), &p, poly.k, &opts)
    })?;
    println!(
        "{}",
        serde_json::to_string(&RecordLine::from(&rec)).map_err(Error::from)?
    );
    Ok(())
}

fn cmd_distribution(poly: OptPolyArgs, raw: Option<PathBuf>, run: RunArgs) -> CmdResult {
    let g = match raw {
        Some(path) => sio::parse_raw_matrix(&read_file(&path)?)?,
        None => {
            // clap guarantees all three when --raw is absent
            let (family, hex, k) = (poly.family.unwrap(), poly.hex.unwrap(), poly.k.unwrap());
            let g = Family::from(family).build(&parse_poly(&hex, k)?, k)?;
            if !is_self_dual(&g) {
                return Err(Error::NotSelfDual.into());
            }
            g
        }
    };
    let opts = run.options();
    let dist = in_threads(run.threads, || weight_distribution_with(&g, &opts))?;
    let mut out = BufWriter::new(io::stdout().lock());
    for (w, c) in dist.counts().iter().enumerate() {
        writeln!(out, "{w}\t{c}")?;
    }
    out.flush()?;
    log::info!("total {} codewords, sha256 {}", dist.total(), dist.digest());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    family: FamilyArg,
    k: Option<u32>,
    k_min: Option<u32>,
    k_max: Option<u32>,
    out: Option<PathBuf>,
    all: bool,
    no_gcd_filter: bool,
    run: RunArgs,
) -> CmdResult {
    let (lo, hi) = match (k, k_min, k_max) {
        (Some(k), _, _) => (k, k),
        (None, Some(a), Some(b)) => (a, b),
        (None, Some(a), None) => (a, a),
        (None, None, Some(b)) => (2, b),
        (None, None, None) => {
            return Err(Failure(
                EXIT_PARSE,
                "search needs --k or --k-min/--k-max".into(),
            ))
        }
    };
    let mut cfg = SearchConfig::new(family.into(), lo, hi);
    cfg.threads = run.threads;
    cfg.enum_opts = run.options();
    cfg.enum_opts.progress = false;
    cfg.progress_every = 16;
    cfg.gcd_filter = !no_gcd_filter;
    if all {
        cfg.dedup = Dedup::ByPolynomial;
    }
    let report = run_search(&cfg)?;
    if let Some(path) = out {
        let file = File::create(&path)
            .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))?;
        sio::write_records(BufWriter::new(file), &report.records)?;
    }
    println!(
        "{} K={lo}..={hi}: {} examined, {} rejected by gcd, {} by rank, {} by distance, {} verified, {} records, {:.1}s",
        cfg.family,
        report.candidates_examined,
        report.rejected_by_gcd,
        report.rejected_by_rank,
        report.rejected_by_distance,
        report.verified,
        report.records.len(),
        report.wall_time.as_secs_f64()
    );
    for r in &report.records {
        println!("  K={} hex {} {}", r.constraint_length, r.hex(), r.params);
    }
    Ok(())
}

fn cmd_tables(
    fixture: Option<PathBuf>,
    results: Option<PathBuf>,
    family: Option<FamilyArg>,
    sample: Option<usize>,
    seed: u64,
    run: RunArgs,
) -> CmdResult {
    let mut rows = match fixture {
        Some(path) => sio::parse_fixture(&read_file(&path)?)?,
        None => sio::embedded_fixture(),
    };
    if let Some(f) = family {
        let f = Family::from(f);
        rows.retain(|r| r.family == f);
    }
    if let Some(n) = sample {
        rows = sio::sample_rows(&rows, n, seed, &[]);
    }
    let report: TableReport = match results {
        Some(path) => {
            let file = File::open(&path)
                .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            let records = sio::read_records(BufReader::new(file))?;
            sio::compare_records(&rows, &records)
        }
        None => {
            let opts = run.options();
            let total = rows.len();
            let mut done = 0;
            sio::verify_rows(&rows, |row| {
                done += 1;
                log::info!("row {done}/{total}: {row}");
                in_threads(run.threads, || {
                    verify_polynomial(row.family, &row.poly, row.constraint_length, &opts)
                })
            })
        }
    };
    println!("{report}");
    if report.is_clean() {
        Ok(())
    } else {
        Err(Failure(
            EXIT_TABLE_MISMATCH,
            format!(
                "{} of {} rows do not match",
                report.rows.len() - report.matches(),
                report.rows.len()
            ),
        ))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    let result = match cli.cmd {
        Command::Verify { poly, run } => cmd_verify(poly, run),
        Command::Distribution { poly, raw, run } => cmd_distribution(poly, raw, run),
        Command::Search {
            family,
            k,
            k_min,
            k_max,
            out,
            all,
            no_gcd_filter,
            run,
        } => cmd_search(family, k, k_min, k_max, out, all, no_gcd_filter, run),
        Command::Tables {
            fixture,
            results,
            family,
            sample,
            seed,
            run,
        } => cmd_tables(fixture, results, family, sample, seed, run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
