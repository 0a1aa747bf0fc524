use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use superspecial::curves::{cartier_manin, is_superspecial, HyperellipticCurve, PointCounter};
use superspecial::enumerate::{brute_force_census_with, census, BruteForceOptions, CensusRecord, CurveCensus};
use superspecial::ff::is_prime;
use superspecial::rosenhain::{
    all_rosenhain_defined_over, canonical_form_of_roots, canonical_key, five_products_are_fourth_powers, orbit_120,
    parse_triple, RosenhainTriple,
};
use superspecial::verify::{run_theorem, ScanBudgets, Theorem, TheoremReport};
use superspecial::{Fp2Context, Polynomial};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "superspecial",
    version,
    about = "Superspecial hyperelliptic curves over F_{p^2}"
)]
struct Cli {
    /// Worker threads for the parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the census of superspecial genus-2 curves.
    Enumerate(EnumerateArgs),
    /// Inspect a single curve.
    Check(CheckArgs),
    /// Run verification checkers over a range of primes.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Richelot walk from glued seeds (brute force below p = 7).
    Walk,
    /// Exhaustive scan of Rosenhain triples.
    Brute,
    /// Both, failing unless they agree.
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// A single odd prime "p" or an inclusive range "a..b" of odd primes.
#[derive(Clone, Debug)]
struct Primes(Vec<u64>);

impl FromStr for Primes {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("invalid prime {t:?}"));
        let check = |p: u64| {
            if !is_prime(p) {
                Err(format!("{p} is not prime"))
            } else if p == 2 {
                Err("characteristic 2 is not supported".to_string())
            } else {
                Ok(p)
            }
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (check(num(a)?)?, check(num(b)?)?);
                if a > b {
                    return Err(format!("empty range {a}..{b}"));
                }
                Ok(Primes((a..=b).filter(|&n| n % 2 == 1 && is_prime(n)).collect()))
            }
            None => Ok(Primes(vec![check(num(s)?)?])),
        }
    }
}

#[derive(Args)]
struct EnumerateArgs {
    /// Prime or inclusive range a..b.
    #[arg(long)]
    p: Primes,
    #[arg(long, value_enum, default_value = "walk")]
    method: Method,
    /// Largest prime the brute-force scan accepts.
    #[arg(long, default_value_t = superspecial::enumerate::DEFAULT_BRUTE_FORCE_MAX)]
    brute_max: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    p: u64,
    /// Rosenhain triple "(l; m; n)" or "l,m,n".
    #[arg(long, conflicts_with = "coeffs", required_unless_present = "coeffs")]
    triple: Option<String>,
    /// Coefficients of f, constant term first, comma separated.
    #[arg(long)]
    coeffs: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Prime or inclusive range a..b.
    #[arg(long)]
    p: Primes,
    /// Comma-separated selectors; default is every checker that applies.
    #[arg(long, value_delimiter = ',')]
    theorems: Vec<Theorem>,
    /// Sample size for the genus-3 family beyond the full-scan primes.
    #[arg(long)]
    genus3_budget: Option<u64>,
    /// Sample size for the genus-4 family beyond the full-scan primes.
    #[arg(long)]
    genus4_budget: Option<u64>,
    /// Seed for sampled scans.
    #[arg(long)]
    seed: Option<u64>,
    /// Scan only genus-3/4 parameters above superspecial genus-2 curves.
    #[arg(long)]
    targeted: bool,
    /// Write elapsed_ms as 0 so reports are byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Result of a command that ran to completion; input errors travel as `Err`.
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Check(args) => cmd_check(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn brute(p: u64, max: u64) -> Result<CurveCensus> {
    Ok(brute_force_census_with(
        p,
        BruteForceOptions {
            max_p: max,
            ..Default::default()
        },
    )?)
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<Outcome> {
    let mut records: Vec<CensusRecord> = Vec::new();
    let mut outcome = Outcome::Ok;
    for &p in &args.p.0 {
        let (c, note) = match args.method {
            Method::Walk => (census(p)?, String::new()),
            Method::Brute => (brute(p, args.brute_max)?, String::new()),
            Method::Both => {
                let walk = census(p)?;
                let oracle = brute(p, args.brute_max)?;
                let equal = walk.keys() == oracle.keys();
                if !equal {
                    outcome = Outcome::Failed;
                }
                let verdict = if equal { "agree" } else { "DISAGREE" };
                (walk, format!(", brute force {} ({verdict})", oracle.len()))
            }
        };
        let mut kinds = std::collections::BTreeMap::new();
        for e in c.entries() {
            *kinds.entry(e.classification.kind.to_string()).or_insert(0usize) += 1;
        }
        let kinds: String = kinds.iter().map(|(k, n)| format!("; {k} {n}")).collect();
        println!("p={p}: {} curves{note}{kinds}", c.len());
        records.extend(c.records());
    }
    if let Some(path) = &args.out {
        write_census(path, args.format, &records)?;
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct CensusFile<'a> {
    schema: u32,
    entries: &'a [CensusRecord],
}

fn write_census(path: &Path, format: Format, records: &[CensusRecord]) -> Result<()> {
    match format {
        Format::Json => write_json(
            path,
            &CensusFile {
                schema: SCHEMA,
                entries: records,
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
            if records.is_empty() {
                w.write_record([
                    "p",
                    "key",
                    "lambda",
                    "mu",
                    "nu",
                    "classification",
                    "point_count",
                    "provenance",
                ])?;
            }
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

fn parse_curve(ctx: &Fp2Context, args: &CheckArgs) -> Result<(HyperellipticCurve, Option<RosenhainTriple>)> {
    if let Some(text) = &args.triple {
        let text = text.replace(',', ";");
        let text = if text.trim_start().starts_with('(') {
            text
        } else {
            format!("({text})")
        };
        let t = parse_triple(ctx, &text)?;
        return Ok((t.curve(), Some(t)));
    }
    let text = args
        .coeffs
        .as_deref()
        .ok_or_else(|| anyhow!("one of --triple or --coeffs is required"))?;
    let coeffs = text
        .split(',')
        .map(|c| ctx.parse(c))
        .collect::<superspecial::Result<Vec<_>>>()?;
    let curve = HyperellipticCurve::from_poly(ctx.one(), Polynomial::new(*ctx, coeffs))?;
    let form = if curve.genus() == 2 {
        curve
            .weierstrass_points()
            .ok()
            .and_then(|w| <[_; 6]>::try_from(w).ok())
            .and_then(|roots| canonical_form_of_roots(&roots, curve.c()).ok())
    } else {
        None
    };
    Ok((curve, form))
}

fn cmd_check(args: CheckArgs) -> Result<Outcome> {
    let ctx = Fp2Context::new(args.p)?;
    let (curve, form) = parse_curve(&ctx, &args)?;
    let classification = PointCounter::new(ctx).classify(&curve);
    let mut out = io::stdout().lock();
    writeln!(out, "p: {}", args.p)?;
    writeln!(out, "genus: {}", curve.genus())?;
    writeln!(out, "superspecial: {}", is_superspecial(&curve))?;
    writeln!(out, "cartier_manin: {}", cartier_manin(&curve))?;
    writeln!(out, "point_count: {}", classification.point_count)?;
    writeln!(out, "classification: {}", classification.kind)?;
    match form {
        Some(t) => {
            let forms = orbit_120(&t);
            let squares = forms.iter().filter(|f| all_rosenhain_defined_over(f)).count();
            let fourth = forms.iter().filter(|f| five_products_are_fourth_powers(f)).count();
            writeln!(out, "rosenhain_form: {t}")?;
            writeln!(
                out,
                "nine_squares: {} ({squares}/{} forms)",
                squares == forms.len(),
                forms.len()
            )?;
            writeln!(
                out,
                "five_fourth_powers: {} ({fourth}/{} forms)",
                fourth == forms.len(),
                forms.len()
            )?;
            writeln!(out, "canonical_key: {}", canonical_key(&t))?;
        }
        None if curve.genus() == 2 => writeln!(out, "canonical_key: unavailable (roots not rational)")?,
        None => {}
    }
    Ok(Outcome::Ok)
}

fn needs_census(t: Theorem) -> bool {
    matches!(
        t,
        Theorem::RosenhainSquares | Theorem::ExtremalCount | Theorem::DifferenceProducts | Theorem::RichelotClosure
    )
}

#[derive(Serialize)]
struct ReportFile<'a> {
    schema: u32,
    reports: &'a [TheoremReport],
}

#[derive(Serialize)]
struct ReportRow {
    theorem: String,
    p: u64,
    checked: u64,
    scanned: u64,
    failures: usize,
    elapsed_ms: u64,
}

fn cmd_verify(args: VerifyArgs) -> Result<Outcome> {
    let explicit = !args.theorems.is_empty();
    let budgets = ScanBudgets {
        genus3: args.genus3_budget,
        genus4: args.genus4_budget,
        seed: args.seed,
        targeted: args.targeted,
    };
    let mut reports = Vec::new();
    for &p in &args.p.0 {
        let selected: Vec<Theorem> = if explicit {
            args.theorems.clone()
        } else {
            Theorem::ALL
                .into_iter()
                .filter(|&t| t != Theorem::P3Nonexistence || p == 3)
                .collect()
        };
        if p != 3 && selected.contains(&Theorem::P3Nonexistence) {
            bail!("the p3 checker runs only for p = 3");
        }
        let c = if selected.iter().any(|&t| needs_census(t)) {
            Some(census(p)?)
        } else {
            None
        };
        for t in selected {
            let mut r = run_theorem(t, p, c.as_ref(), budgets)?;
            if args.no_timing {
                r.elapsed = Duration::ZERO;
            }
            println!(
                "{} {t} p={p}: {}/{} checked, {} failures",
                if r.passed() { "PASS" } else { "FAIL" },
                r.checked,
                r.scanned,
                r.failures.len()
            );
            for f in r.failures.iter().take(3) {
                println!("  {:?}: {}", f.check, f.detail);
            }
            reports.push(r);
        }
    }
    if let Some(path) = &args.out {
        match args.format {
            Format::Json => write_json(
                path,
                &ReportFile {
                    schema: SCHEMA,
                    reports: &reports,
                },
            )?,
            Format::Csv => {
                let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
                for r in &reports {
                    w.serialize(ReportRow {
                        theorem: r.theorem.to_string(),
                        p: r.p,
                        checked: r.checked,
                        scanned: r.scanned,
                        failures: r.failures.len(),
                        elapsed_ms: r.elapsed.as_millis() as u64,
                    })?;
                }
                w.flush()?;
            }
        }
    }
    Ok(if reports.iter().all(|r| r.passed()) {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}
