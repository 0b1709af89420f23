//! Command-line front end. Parses `(M, D)` inputs, orchestrates the
//! classification / construction / verification pipelines, runs the
//! theorem-verification suites, and emits JSON, CSV, or plot-point
//! reports. All randomness is seeded and every JSON report embeds the
//! tool version and a config echo, so identical invocations produce
//! byte-identical output; timing goes to stderr only.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use affspec_core::exact::{rat_to_f64, IMat2, Int};
use affspec_core::mask::{parse_qvec, DigitSet3};
use affspec_core::orbit::{partition, seed_indices, OrbitPartition};
use affspec_core::orders::order_mod;
use affspec_core::report::{
    BoundRepr, CertificateReport, ClassifyReport, FrequencyRepr, MuhatReport, NStarJson,
    OrbitReport, OrderReport, SuiteReport, SCHEMA_VERSION,
};
use affspec_core::spectral::{mu_hat_numeric, nstar, NStarOptions};
use affspec_core::suite::{run_suites, SuiteConfig, SuiteSummary};
use affspec_core::transform::{classify, Case};
use affspec_core::{AffError, Result};

#[derive(Parser)]
#[command(name = "affspec", version, about = "orthogonal exponentials for planar self-affine measures with three digits")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker hint recorded in the config echo; computations run
    /// single-threaded so reports stay byte-deterministic.
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplicative order of an integer matrix mod p^s.
    Order {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// Two-case classification of (M, D) with the sharp bound.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, allow_hyphen_values = true)]
        digits: String,
    },
    /// Full pipeline: bound certificate, construction, pairwise
    /// verification, and (optionally) the max-clique cross-check.
    Nstar {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, allow_hyphen_values = true)]
        digits: String,
        #[arg(long)]
        jmax: Option<u64>,
        /// Skip the exact max-clique confirmation.
        #[arg(long)]
        no_clique: bool,
    },
    /// Construct the maximal frequency family only.
    Lambda {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, allow_hyphen_values = true)]
        digits: String,
        #[arg(long)]
        jmax: Option<u64>,
    },
    /// Construct and pairwise-verify; exits 1 on inconclusive pairs.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, allow_hyphen_values = true)]
        digits: String,
        #[arg(long)]
        jmax: Option<u64>,
    },
    /// Orbit partition of the level-s stratum under M mod 1.
    Orbits {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Truncated Fourier transform of mu_{M,D} at a rational point.
    Muhat {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, allow_hyphen_values = true)]
        digits: String,
        /// Evaluation point "x,y" with integer or n/d entries.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, default_value_t = 64)]
        depth: u32,
    },
    /// Batch theorem-verification suites over (p, s) ranges.
    Suite {
        /// Comma-separated primes, each <= 13.
        #[arg(long, default_value = "3,5")]
        p: String,
        /// Comma-separated levels, each <= 3.
        #[arg(long, default_value = "1,2")]
        s: String,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    PlotPoints,
}

/// Common JSON wrapper: tool identity, config echo, seed.
#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: BTreeMap<&'static str, String>,
    seed: Option<u64>,
    report: T,
}

fn envelope<T: Serialize>(
    command: &'static str,
    config: BTreeMap<&'static str, String>,
    seed: Option<u64>,
    report: T,
) -> Envelope<T> {
    Envelope {
        schema_version: SCHEMA_VERSION,
        tool: "affspec",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        seed,
        report,
    }
}

fn parse_matrix(s: &str) -> Result<IMat2> {
    let mut rows = s.split(';');
    let err = || AffError::Parse(format!("expected matrix 'a,b;c,d', got {s:?}"));
    let r1 = parse_qvec(rows.next().ok_or_else(err)?)?;
    let r2 = parse_qvec(rows.next().ok_or_else(err)?)?;
    if rows.next().is_some() {
        return Err(err());
    }
    let entry = |r: &affspec_core::exact::Rat| -> Result<Int> {
        if r.is_integer() {
            Ok(r.to_integer())
        } else {
            Err(AffError::Parse(format!("non-integer matrix entry {r} in {s:?}")))
        }
    };
    Ok(IMat2::from_ints(
        entry(&r1.x)?,
        entry(&r1.y)?,
        entry(&r2.x)?,
        entry(&r2.y)?,
    ))
}

/// Digits accept both "a1,a2;b1,b2" and the space-separated
/// "a1,a2 b1,b2" form; the zero digit is implicit.
fn parse_digits(s: &str) -> Result<DigitSet3> {
    if s.contains(';') {
        DigitSet3::parse(s)
    } else {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(AffError::Parse(format!(
                "expected two nonzero digits 'x1,y1 x2,y2', got {s:?}"
            )));
        }
        DigitSet3::new(parse_qvec(parts[0])?, parse_qvec(parts[1])?)
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<()> {
    let io_err = |e: std::io::Error| AffError::Internal(format!("write failed: {e}"));
    match out {
        Some(path) => std::fs::write(path, text).map_err(io_err),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io_err),
    }
}

fn emit_json<T: Serialize>(out: Option<&PathBuf>, env: &Envelope<T>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(env)
        .map_err(|e| AffError::Internal(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_output(out, &text)
}

#[derive(Serialize)]
struct LambdaJson {
    case: String,
    eta: u32,
    bound: String,
    count: usize,
    frequencies: Vec<FrequencyRepr>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct VerifyJson {
    bound_certificate: BoundRepr,
    certificate: Option<CertificateReport>,
    notes: Vec<String>,
}

fn checked_prime_power(p: u64, s: u32) -> Result<u64> {
    if p < 2 {
        return Err(AffError::Domain(format!("p must be >= 2, got {p}")));
    }
    p.checked_pow(s)
        .ok_or_else(|| AffError::Domain(format!("{p}^{s} overflows u64")))
}

fn class_of(part: &OrbitPartition, l: u64) -> usize {
    part.classes
        .iter()
        .position(|c| c.contains(&l))
        .expect("every seed index is classified")
}

fn orbits_csv(part: &OrbitPartition) -> String {
    let mut text = String::from("l,orbit_size,class\n");
    for l in seed_indices(part.p, part.s) {
        let size = part.orbit_of[&l].len();
        let class = class_of(part, l);
        text.push_str(&format!("{l},{size},{class}\n"));
    }
    text
}

fn orbits_plot_points(part: &OrbitPartition) -> String {
    let mut text = String::new();
    for (ci, class) in part.classes.iter().enumerate() {
        // orbits within a class coincide; plot each distinct orbit once
        let rep = class[0];
        for pt in &part.orbit_of[&rep] {
            text.push_str(&format!(
                "{} {} {ci}\n",
                rat_to_f64(&pt.x),
                rat_to_f64(&pt.y)
            ));
        }
    }
    text
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| AffError::Parse(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn is_small_prime(p: u64) -> bool {
    p >= 2 && (2..p).all(|d| d * d > p || p % d != 0)
}

fn run_suite_command(p: &str, s: &str, trials: u32, seed: u64) -> Result<(SuiteSummary, bool)> {
    let primes: Vec<u64> = parse_list(p, "prime")?;
    let levels: Vec<u32> = parse_list(s, "level")?;
    for &q in &primes {
        if !is_small_prime(q) || q > 13 {
            return Err(AffError::Domain(format!(
                "suite cap: p must be prime and <= 13, got {q}"
            )));
        }
    }
    for &l in &levels {
        if l == 0 || l > 3 {
            return Err(AffError::Domain(format!(
                "suite cap: s must be in 1..=3, got {l}"
            )));
        }
    }
    if primes.is_empty() || levels.is_empty() {
        return Ok((SuiteSummary { seed, stats: Vec::new() }, true));
    }
    let mut cfg = SuiteConfig {
        seed,
        thm31_trials: trials,
        prop_trials: trials,
        ..SuiteConfig::default()
    };
    cfg.thm34_levels = primes
        .iter()
        .flat_map(|&q| levels.iter().map(move |&l| (q, l)))
        .collect();
    let summary = run_suites(&cfg)?;
    let passed = summary.all_passed();
    Ok((summary, passed))
}

fn run(cli: &Cli) -> Result<u8> {
    let out = cli.out.as_ref();
    match &cli.command {
        Command::Order { matrix, p, s } => {
            let m = parse_matrix(matrix)?;
            let modulus = checked_prime_power(*p, *s)?;
            let r = order_mod(&m, modulus)?;
            let config = BTreeMap::from([
                ("matrix", matrix.clone()),
                ("p", p.to_string()),
                ("s", s.to_string()),
            ]);
            let report = OrderReport {
                schema_version: SCHEMA_VERSION,
                matrix: affspec_core::report::matrix_repr(&m),
                modulus: r.modulus,
                order: r.order,
            };
            emit_json(out, &envelope("order", config, None, report))?;
            Ok(0)
        }
        Command::Classify { matrix, digits } => {
            let m = parse_matrix(matrix)?;
            let d = parse_digits(digits)?;
            let r = classify(&m, &d)?;
            let config =
                BTreeMap::from([("matrix", matrix.clone()), ("digits", digits.clone())]);
            let report = ClassifyReport::new(&m, &d, &r);
            emit_json(out, &envelope("classify", config, None, report))?;
            Ok(0)
        }
        Command::Nstar {
            matrix,
            digits,
            jmax,
            no_clique,
        } => {
            let m = parse_matrix(matrix)?;
            let d = parse_digits(digits)?;
            let opts = NStarOptions {
                run_clique: !no_clique,
                j_max: *jmax,
            };
            let r = nstar(&m, &d, &opts)?;
            let determined = r.determined();
            let config = BTreeMap::from([
                ("matrix", matrix.clone()),
                ("digits", digits.clone()),
                ("jmax", format!("{jmax:?}")),
                ("no_clique", no_clique.to_string()),
            ]);
            let report = NStarJson::new(&m, &d, &r);
            emit_json(out, &envelope("nstar", config, None, report))?;
            Ok(if determined { 0 } else { 1 })
        }
        Command::Lambda {
            matrix,
            digits,
            jmax,
        } => {
            let m = parse_matrix(matrix)?;
            let d = parse_digits(digits)?;
            let opts = NStarOptions {
                run_clique: false,
                j_max: *jmax,
            };
            let r = nstar(&m, &d, &opts)?;
            let config = BTreeMap::from([
                ("matrix", matrix.clone()),
                ("digits", digits.clone()),
                ("jmax", format!("{jmax:?}")),
            ]);
            let report = LambdaJson {
                case: match r.classification.case {
                    Case::I => "i".into(),
                    Case::Ii => "ii".into(),
                },
                eta: r.classification.eta,
                bound: r.classification.bound.to_string(),
                count: r.lambda.len(),
                frequencies: r.lambda.iter().map(FrequencyRepr::new).collect(),
                notes: r.notes.clone(),
            };
            let nonempty = !r.lambda.is_empty();
            emit_json(out, &envelope("lambda", config, None, report))?;
            Ok(if nonempty { 0 } else { 1 })
        }
        Command::Verify {
            matrix,
            digits,
            jmax,
        } => {
            let m = parse_matrix(matrix)?;
            let d = parse_digits(digits)?;
            let opts = NStarOptions {
                run_clique: false,
                j_max: *jmax,
            };
            let r = nstar(&m, &d, &opts)?;
            let complete = r.certificate.as_ref().is_some_and(|c| c.complete());
            let config = BTreeMap::from([
                ("matrix", matrix.clone()),
                ("digits", digits.clone()),
                ("jmax", format!("{jmax:?}")),
            ]);
            let report = VerifyJson {
                bound_certificate: BoundRepr::new(&r.bound_certificate),
                certificate: r.certificate.as_ref().map(CertificateReport::new),
                notes: r.notes.clone(),
            };
            emit_json(out, &envelope("verify", config, None, report))?;
            Ok(if complete { 0 } else { 1 })
        }
        Command::Orbits {
            matrix,
            p,
            s,
            format,
        } => {
            let m = parse_matrix(matrix)?;
            checked_prime_power(*p, *s)?;
            let part = partition(&m, *p, *s)?;
            match format {
                Format::Json => {
                    let config = BTreeMap::from([
                        ("matrix", matrix.clone()),
                        ("p", p.to_string()),
                        ("s", s.to_string()),
                    ]);
                    let report = OrbitReport::new(&m, &part);
                    emit_json(out, &envelope("orbits", config, None, report))?;
                }
                Format::Csv => write_output(out, &orbits_csv(&part))?,
                Format::PlotPoints => write_output(out, &orbits_plot_points(&part))?,
            }
            Ok(0)
        }
        Command::Muhat {
            matrix,
            digits,
            xi,
            depth,
        } => {
            let m = parse_matrix(matrix)?;
            let d = parse_digits(digits)?;
            let point = parse_qvec(xi)?;
            let value = mu_hat_numeric(&point, &m, &d, *depth)?;
            let config = BTreeMap::from([
                ("matrix", matrix.clone()),
                ("digits", digits.clone()),
                ("xi", xi.clone()),
                ("depth", depth.to_string()),
            ]);
            let report = MuhatReport::new(&point, *depth, value);
            emit_json(out, &envelope("muhat", config, None, report))?;
            Ok(0)
        }
        Command::Suite { p, s, trials, seed } => {
            let (summary, passed) = run_suite_command(p, s, *trials, *seed)?;
            let config = BTreeMap::from([
                ("p", p.clone()),
                ("s", s.clone()),
                ("trials", trials.to_string()),
                ("seed", seed.to_string()),
            ]);
            let report = SuiteReport::new(&summary);
            emit_json(out, &envelope("suite", config, Some(*seed), report))?;
            Ok(if passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("AFFSPEC_LOG")).init();
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    log::info!("elapsed: {:.3?}", start.elapsed());
    ExitCode::from(code)
}
