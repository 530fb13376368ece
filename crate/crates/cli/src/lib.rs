//! Command implementations behind the `fixperm` binary. Each command builds
//! an [`OutputDocument`]; [`run`] parses arguments and maps failures to exit
//! codes (0 ok, 1 violation found, 2 usage or parameter error).

use std::fmt;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use fixperm_core::analysis::{
    fixed_point_removal, identity_suite, image_pinned_counts, k_n_link, last_point_suite, monotone_in_d, monotone_in_k,
    monotone_in_n, oracle_equivalence, sandwich_suite, subset_independence, table_cells, table_render, triangle,
    TableKind,
};
use fixperm_core::oracle::{verify_bijection, SizeGuard};
use fixperm_core::sampler::{calibrate_triangle, estimate_f};
use fixperm_core::{
    cond_fix_prob, count_exact_fixed, render_decimal, DecimalStyle, Params, Rational, VerificationReport,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest `n` the exhaustive oracle sweeps use under `verify` unless
/// `--allow-large` is given.
pub const VERIFY_ORACLE_CAP: u32 = 8;
pub const VERIFY_BIJECTION_CAP: u32 = 6;
pub const VERIFY_SUBSET_CAP: u32 = 7;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fixperm_core::Error),
    #[error(transparent)]
    Param(#[from] fixperm_core::ParamError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Ascii => "ascii",
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub command: &'static str,
    pub params: Map<String, Value>,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputDocument {
    pub format: Format,
    pub payload: String,
    pub metadata: Metadata,
}

impl OutputDocument {
    fn build(
        format: Format,
        command: &'static str,
        params: Value,
        ascii: impl FnOnce() -> String,
        csv: impl FnOnce() -> String,
        results: impl FnOnce() -> Vec<Value>,
    ) -> OutputDocument {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        let payload = match format {
            Format::Ascii => ascii(),
            Format::Csv => csv(),
            Format::Json => {
                let doc = json!({
                    "command": command,
                    "params": params,
                    "results": results(),
                    "version": VERSION,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
                s.push('\n');
                s
            }
        };
        OutputDocument {
            format,
            payload,
            metadata: Metadata {
                command,
                params,
                version: VERSION,
            },
        }
    }
}

/// A finished command: what to print and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: OutputDocument,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(document: OutputDocument) -> Outcome {
        Outcome { document, exit_code: 0 }
    }
}

fn exact_json(r: &Rational, places: u32, style: DecimalStyle) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "decimal": render_decimal(r, places, style),
    })
}

fn csv_lines(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn cmd_count(n: u32, k: u32, d: u32, format: Format) -> Result<Outcome, CliError> {
    let c = count_exact_fixed(Params::counting(n, k, d)?);
    let s = c.to_string();
    Ok(Outcome::ok(OutputDocument::build(
        format,
        "count",
        json!({"n": n, "k": k, "d": d}),
        || format!("{s}\n"),
        || csv_lines("n,k,d,count", [format!("{n},{k},{d},{s}")]),
        || vec![json!({"n": n, "k": k, "d": d, "count": s})],
    )))
}

pub fn cmd_cond(n: u32, k: u32, d: u32, places: u32, format: Format) -> Result<Outcome, CliError> {
    let f = cond_fix_prob(Params::conditional(n, k, d)?)?.to_rational();
    let dec = render_decimal(&f, places, DecimalStyle::Bare);
    Ok(Outcome::ok(OutputDocument::build(
        format,
        "cond",
        json!({"n": n, "k": k, "d": d, "places": places}),
        || format!("{}/{} ≈ {dec}\n", f.numer(), f.denom()),
        || {
            csv_lines(
                "n,k,d,num,den,decimal",
                [format!("{n},{k},{d},{},{},{dec}", f.numer(), f.denom())],
            )
        },
        || {
            let mut v = exact_json(&f, places, DecimalStyle::Bare);
            v["n"] = n.into();
            v["k"] = k.into();
            v["d"] = d.into();
            vec![v]
        },
    )))
}

fn cell_rows(cells: &[(u32, u32, u32, Rational)], places: u32, style: DecimalStyle) -> (Vec<String>, Vec<Value>) {
    let rows = cells
        .iter()
        .map(|(n, k, d, r)| {
            format!(
                "{n},{k},{d},{},{},{}",
                r.numer(),
                r.denom(),
                render_decimal(r, places, style)
            )
        })
        .collect();
    let json = cells
        .iter()
        .map(|(n, k, d, r)| {
            let mut v = exact_json(r, places, style);
            v["n"] = (*n).into();
            v["k"] = (*k).into();
            v["d"] = (*d).into();
            v
        })
        .collect();
    (rows, json)
}

pub fn cmd_triangle(n: u32, format: Format, places: u32) -> Result<Outcome, CliError> {
    let t = triangle(n)?;
    let cells: Vec<(u32, u32, u32, Rational)> = t.entries().map(|((k, d), v)| (n, k, d, v.to_rational())).collect();
    let (rows, results) = cell_rows(&cells, places, DecimalStyle::Padded);
    Ok(Outcome::ok(OutputDocument::build(
        format,
        "triangle",
        json!({"n": n, "places": places}),
        || t.render_ascii(places),
        || csv_lines("n,k,d,num,den,decimal", rows),
        || results,
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    P,
    F,
}

impl From<Which> for TableKind {
    fn from(w: Which) -> TableKind {
        match w {
            Which::P => TableKind::P,
            Which::F => TableKind::F,
        }
    }
}

pub fn cmd_table(
    which: Which,
    n_max: u32,
    k_max: Option<u32>,
    places: u32,
    format: Format,
) -> Result<Outcome, CliError> {
    let kind = TableKind::from(which);
    let ascii = table_render(kind, n_max, k_max, places)?;
    let cells: Vec<(u32, u32, u32, Rational)> = table_cells(kind, n_max, k_max)?
        .into_iter()
        .map(|(n, k, v)| (n, k, 0, v.to_rational()))
        .collect();
    let (rows, results) = cell_rows(&cells, places, DecimalStyle::Trimmed);
    let name = match which {
        Which::P => "p",
        Which::F => "f",
    };
    Ok(Outcome::ok(OutputDocument::build(
        format,
        "table",
        json!({"which": name, "n_max": n_max, "k_max": k_max, "places": places}),
        || ascii,
        || csv_lines("n,k,d,num,den,decimal", rows),
        || results,
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Recurrences,
    MonotoneK,
    MonotoneN,
    MonotoneD,
    KNLink,
    Bounds,
    Oracle,
    Bijection,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Recurrences,
        Check::MonotoneK,
        Check::MonotoneN,
        Check::MonotoneD,
        Check::KNLink,
        Check::Bounds,
        Check::Oracle,
        Check::Bijection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Recurrences => "recurrences",
            Check::MonotoneK => "monotone-k",
            Check::MonotoneN => "monotone-n",
            Check::MonotoneD => "monotone-d",
            Check::KNLink => "k-n-link",
            Check::Bounds => "bounds",
            Check::Oracle => "oracle",
            Check::Bijection => "bijection",
        }
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Check, String> {
        // older spelling of k-n-link, kept for existing scripts
        if s == "lemx" {
            return Ok(Check::KNLink);
        }
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = Check::ALL.iter().map(|c| c.name()).collect();
            format!("unknown check '{s}' (expected one of: {})", names.join(", "))
        })
    }
}

/// Parses a comma-separated check list; duplicates collapse.
pub fn parse_checks(list: &str) -> Result<Vec<Check>, CliError> {
    let mut out: Vec<Check> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(CliError::Usage))
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(CliError::Usage("empty --checks list".into()));
    }
    Ok(out)
}

/// Runs the selected sweeps. Enumeration-backed checks are capped (see
/// [`VERIFY_ORACLE_CAP`] and friends). With `allow_large` they run at
/// `n_max` itself, which must not exceed the hard enumeration limit.
pub fn run_checks(n_max: u32, checks: &[Check], allow_large: bool) -> Result<VerificationReport, CliError> {
    let guard = if allow_large {
        SizeGuard::allow_large()
    } else {
        SizeGuard::standard()
    };
    if allow_large && checks.iter().any(|c| matches!(c, Check::Oracle | Check::Bijection)) {
        guard.check(n_max)?;
    }
    let cap = |c: u32| if allow_large { n_max } else { n_max.min(c) };
    let mut rep = VerificationReport::new();
    for check in checks {
        match check {
            Check::Recurrences => rep.merge(identity_suite(n_max)),
            Check::MonotoneK => rep.merge(monotone_in_k(n_max)),
            Check::MonotoneN => rep.merge(monotone_in_n(n_max)),
            Check::MonotoneD => rep.merge(monotone_in_d(n_max)),
            Check::KNLink => rep.merge(k_n_link(n_max)),
            Check::Bounds => {
                rep.merge(sandwich_suite(n_max));
                rep.merge(last_point_suite(n_max));
            }
            Check::Oracle => {
                let m = cap(VERIFY_ORACLE_CAP);
                rep.merge(oracle_equivalence(m, guard)?);
                rep.merge(fixed_point_removal(m, guard)?);
                rep.merge(image_pinned_counts(m, guard)?);
                rep.merge(subset_independence(cap(VERIFY_SUBSET_CAP), guard)?);
            }
            Check::Bijection => {
                if n_max >= 2 {
                    rep.merge(verify_bijection(cap(VERIFY_BIJECTION_CAP)));
                }
            }
        }
    }
    rep.sort();
    Ok(rep)
}

pub fn cmd_verify(n_max: u32, checks: &[Check], allow_large: bool, format: Format) -> Result<Outcome, CliError> {
    if n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    let rep = run_checks(n_max, checks, allow_large)?;
    let summary = format!(
        "records={} violations={} exceptions={}",
        rep.len(),
        rep.violation_count(),
        rep.exception_count()
    );
    let check_names: Vec<_> = checks.iter().map(|c| c.name()).collect();
    let doc = OutputDocument::build(
        format,
        "verify",
        json!({"n_max": n_max, "checks": check_names, "allow_large": allow_large}),
        || format!("{}{summary}\n", rep.to_lines()),
        || {
            csv_lines(
                "claim,status,params,witness",
                rep.records().iter().map(|r| {
                    let params: Vec<_> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    let witness: Vec<_> = r.witness.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    format!("{},{},{},{}", r.claim, r.status, params.join(";"), witness.join(";"))
                }),
            )
        },
        || {
            rep.records()
                .iter()
                .map(|r| {
                    let params: Map<String, Value> = r.params.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                    let witness: Map<String, Value> = r
                        .witness
                        .iter()
                        .map(|(k, v)| (k.to_string(), exact_json(v, 6, DecimalStyle::Padded)))
                        .collect();
                    json!({"claim": r.claim, "status": r.status.as_str(), "params": params, "witness": witness})
                })
                .collect()
        },
    );
    Ok(Outcome {
        document: doc,
        exit_code: if rep.is_clean() { 0 } else { 1 },
    })
}

pub fn cmd_sample(n: u32, k: u32, d: u32, trials: u64, seed: u64, format: Format) -> Result<Outcome, CliError> {
    let est = estimate_f(n, k, d, trials, seed)?;
    let exact = fixperm_core::conditional::cond_fix_prob(Params::conditional(n, k, d)?)?;
    let exact_r = exact.to_rational();
    let z = est.z_score(&exact);
    let z_text = z.map_or("undefined".to_string(), |z| format!("{z:.3}"));
    let within = est.within(&exact, 3.0);
    Ok(Outcome::ok(OutputDocument::build(
        format,
        "sample",
        json!({"n": n, "k": k, "d": d, "trials": trials, "seed": seed}),
        || {
            format!(
                "estimate={:.6} stderr={:.6} exact={} ({}) z={z_text}\n\
                 trials={} conditioned={} hits={} seed={} generator={}\n",
                est.point_estimate,
                est.standard_error,
                exact,
                render_decimal(&exact_r, 6, DecimalStyle::Padded),
                est.trials_total,
                est.trials_conditioned,
                est.hits,
                est.seed,
                est.generator,
            )
        },
        || {
            csv_lines(
                "n,k,d,estimate,stderr,num,den,decimal,z,trials,conditioned,hits,seed,generator",
                [format!(
                    "{n},{k},{d},{:.6},{:.6},{},{},{},{z_text},{},{},{},{},{}",
                    est.point_estimate,
                    est.standard_error,
                    exact.numer(),
                    exact.denom(),
                    render_decimal(&exact_r, 6, DecimalStyle::Padded),
                    est.trials_total,
                    est.trials_conditioned,
                    est.hits,
                    est.seed,
                    est.generator
                )],
            )
        },
        || {
            vec![json!({
                "n": n, "k": k, "d": d,
                "estimate": est.point_estimate,
                "stderr": est.standard_error,
                "exact": exact_json(&exact_r, 6, DecimalStyle::Padded),
                "z": z,
                "within_3_se": within,
                "trials": est.trials_total,
                "conditioned": est.trials_conditioned,
                "hits": est.hits,
                "seed": est.seed,
                "generator": est.generator,
            })]
        },
    )))
}

pub fn cmd_calibrate(n: u32, trials: u64, seed: u64, format: Format) -> Result<Outcome, CliError> {
    let cal = calibrate_triangle(n, trials, seed, 3.0)?;
    let line = |c: &fixperm_core::sampler::CellCalibration| {
        let z = c
            .estimate
            .z_score(&c.exact)
            .map_or("undefined".to_string(), |z| format!("{z:.3}"));
        (
            format!(
                "k={} d={} exact={} estimate={:.6} stderr={:.6} z={z} within={}",
                c.k, c.d, c.exact, c.estimate.point_estimate, c.estimate.standard_error, c.within
            ),
            format!(
                "{n},{},{},{},{},{:.6},{:.6},{z},{}",
                c.k,
                c.d,
                c.exact.numer(),
                c.exact.denom(),
                c.estimate.point_estimate,
                c.estimate.standard_error,
                c.within
            ),
        )
    };
    Ok(Outcome::ok(OutputDocument::build(
        format,
        "calibrate",
        json!({"n": n, "trials": trials, "seed": seed, "sigmas": 3.0}),
        || {
            let mut s: String = cal.cells.iter().map(|c| line(c).0 + "\n").collect();
            s.push_str(&format!("cells={} misses={}\n", cal.cells.len(), cal.misses()));
            s
        },
        || {
            csv_lines(
                "n,k,d,num,den,estimate,stderr,z,within",
                cal.cells.iter().map(|c| line(c).1),
            )
        },
        || {
            cal.cells
                .iter()
                .map(|c| {
                    json!({
                        "n": n, "k": c.k, "d": c.d,
                        "exact": exact_json(&c.exact.to_rational(), 6, DecimalStyle::Padded),
                        "estimate": c.estimate.point_estimate,
                        "stderr": c.estimate.standard_error,
                        "within_3_se": c.within,
                    })
                })
                .collect()
        },
    )))
}

/// Exact counts and conditional fixed-point probabilities for random
/// permutations.
#[derive(Debug, Parser)]
#[command(name = "fixperm", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// c(n, k, d): permutations of [n] with exactly d fixed points in [k]
    Count {
        n: u32,
        k: u32,
        d: u32,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// f(n, k, d): P(k+1 fixed | exactly d fixed in [k]), requires k < n
    Cond {
        n: u32,
        k: u32,
        d: u32,
        #[arg(long, default_value_t = 4)]
        places: u32,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Every f(n, k, d) for one n, laid out as a triangle
    Triangle {
        n: u32,
        #[arg(long, default_value_t = 3)]
        places: u32,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// p(n, k, 0) or f(n, k, 0) for 1 <= n <= N
    Table {
        #[arg(value_enum)]
        which: Which,
        n_max: u32,
        #[arg(long)]
        k_max: Option<u32>,
        #[arg(long, default_value_t = 4)]
        places: u32,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Sweep the exact claims and report every checked instance
    Verify {
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        /// Comma-separated subset of: recurrences, monotone-k, monotone-n,
        /// monotone-d, k-n-link, bounds, oracle, bijection
        #[arg(long)]
        checks: Option<String>,
        /// Run enumeration-backed checks at the full --n-max (at most 12)
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Monte Carlo estimate of f(n, k, d)
    Sample {
        n: u32,
        k: u32,
        d: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Monte Carlo estimate of every cell of one triangle against the exact values
    Calibrate {
        n: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
}

pub fn execute(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Count { n, k, d, format } => cmd_count(n, k, d, format),
        Command::Cond {
            n,
            k,
            d,
            places,
            format,
        } => cmd_cond(n, k, d, places, format),
        Command::Triangle { n, places, format } => cmd_triangle(n, format, places),
        Command::Table {
            which,
            n_max,
            k_max,
            places,
            format,
        } => cmd_table(which, n_max, k_max, places, format),
        Command::Verify {
            n_max,
            checks,
            allow_large,
            format,
        } => {
            let checks = match checks {
                Some(list) => parse_checks(&list)?,
                None => Check::ALL.to_vec(),
            };
            cmd_verify(n_max, &checks, allow_large, format)
        }
        Command::Sample {
            n,
            k,
            d,
            trials,
            seed,
            format,
        } => cmd_sample(n, k, d, trials, seed, format),
        Command::Calibrate {
            n,
            trials,
            seed,
            format,
        } => cmd_calibrate(n, trials, seed, format),
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

/// Parses `args` (program name first) and runs the command without touching
/// the process streams.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Invocation {
                    stdout: text,
                    stderr: String::new(),
                    exit_code: 0,
                }
            } else {
                Invocation {
                    stdout: String::new(),
                    stderr: text,
                    exit_code: 2,
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(out) => Invocation {
            stdout: out.document.payload,
            stderr: String::new(),
            exit_code: out.exit_code,
        },
        Err(e) => Invocation {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            exit_code: e.exit_code(),
        },
    }
}
