//! The `frob` command line: single-query commands, scan campaigns with
//! CSV/JSON output, and the circle-method demonstrator.
//!
//! Output is deterministic: a fixed 12-significant-digit float format,
//! stable column order, LF line endings, and worker counts that influence
//! speed but never bytes. Exit codes: 0 success, 2 validation, 3 budget
//! exhausted, 4 internal.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::circle::{self, ArcConfig, ArcMode, CircleError};
use crate::counts::{
    self, fmt_sig12, Budget, CountReport, CountsError, OutputSink, Pairing, ReportOptions,
    ScanOutcome, ScanRow, CSV_COLUMNS,
};
use crate::semigroup::{
    self, frobenius_ell, rep_count_oracle, validate_params, SemigroupError, SemigroupParams,
};
use crate::sieve::{sieve_range, SieveError};

/// `count --oracle` re-derives every representation count by brute force;
/// that is quadratic-ish work, so audits are capped.
pub const ORACLE_AUDIT_LIMIT: u64 = 100_000;

#[derive(Debug, Clone)]
pub enum CliError {
    Validation(String),
    Budget,
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Budget => 3,
            CliError::Internal(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Validation(m) => m.clone(),
            CliError::Budget => "wall-clock budget exhausted".to_string(),
            CliError::Internal(m) => m.clone(),
        }
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SieveError> for CliError {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::OutOfTableRange { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<CountsError> for CliError {
    fn from(e: CountsError) -> Self {
        match e {
            CountsError::BudgetExceeded => CliError::Budget,
            CountsError::BadT { .. } => CliError::Validation(e.to_string()),
            CountsError::TableDoesNotCoverRange { .. } => CliError::Internal(e.to_string()),
            CountsError::Semigroup(inner) => inner.into(),
            CountsError::Sieve(inner) => inner.into(),
        }
    }
}

impl From<CircleError> for CliError {
    fn from(e: CircleError) -> Self {
        match e {
            CircleError::TableDoesNotCoverRange { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("i/o error: {e}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairingArg {
    Consecutive,
    Fixed,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Parser)]
#[command(
    name = "frob",
    version,
    about = "l-numerical semigroup calculator: Frobenius numbers, representation \
             counts, prime-count statistics, and a circle-method demonstrator"
)]
pub struct Cli {
    #[command(subcommand)]
    command: CliCommand,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Worker threads (0 = auto). Affects speed only, never output bytes.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Wall-clock budget in seconds (0 = unlimited); exhausted rows are
    /// abandoned gracefully and the exit code becomes 3.
    #[arg(long, global = true)]
    budget_seconds: Option<u64>,

    /// Seed for all randomized choices (pair drawing, arc sampling).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Optional key=value config file (keys: format, threads,
    /// budget_seconds, seed, out); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Print the l-Frobenius number (l+1)cd - c - d.
    G {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        ell: u64,
    },
    /// Count the representations n = c*x + d*y.
    RepCount {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u64,
    },
    /// List every n in [0, g_ell] with at most ell representations.
    Gaps {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        ell: u64,
    },
    /// Full counting report for one (c, d, ell).
    Count {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        ell: u64,
        /// Audit run: re-derive all representation counts by brute force
        /// and fail (exit 4) on any mismatch with the fast path.
        #[arg(long)]
        oracle: bool,
    },
    /// Convergence campaign over a list of c values.
    Scan {
        /// Comma-separated c values; empty means an empty (header-only) scan.
        #[arg(long, default_value = "")]
        c: String,
        #[arg(long, value_enum, default_value_t = PairingArg::Consecutive)]
        pairing: PairingArg,
        /// d for --pairing fixed.
        #[arg(long)]
        fixed_d: Option<u64>,
        /// Comma-separated ell values.
        #[arg(long, default_value = "0")]
        ell: String,
    },
    /// Major/minor arc decomposition plus the sampled minor-arc sup of |f|.
    Circle {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        ell: u64,
        #[arg(long = "Q")]
        q: u64,
        #[arg(long, default_value_t = 65536)]
        grid: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1024)]
        samples: u64,
    },
}

/// Fully resolved invocation; round-trips through serde unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliConfig {
    pub command: CommandConfig,
    pub format: OutputFormat,
    pub threads: usize,
    pub budget_seconds: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CommandConfig {
    G { c: u64, d: u64, ell: u64 },
    RepCount { c: u64, d: u64, n: u64 },
    Gaps { c: u64, d: u64, ell: u64 },
    Count { c: u64, d: u64, ell: u64, oracle: bool },
    Scan { spec: counts::ScanSpec },
    Circle { c: u64, d: u64, ell: u64, arc: ArcConfig, samples: u64 },
}

#[derive(Debug, Default)]
struct FileDefaults {
    format: Option<OutputFormat>,
    threads: Option<usize>,
    budget_seconds: Option<u64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

fn parse_config_file(path: &PathBuf) -> Result<FileDefaults, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    let mut defaults = FileDefaults::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Validation(format!(
                "config line {} is not key=value: {raw:?}",
                lineno + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| {
            CliError::Validation(format!("config line {}: bad {what}: {value:?}", lineno + 1))
        };
        match key {
            "format" => {
                defaults.format = Some(match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    "plain" => OutputFormat::Plain,
                    _ => return Err(bad("format")),
                })
            }
            "threads" => defaults.threads = Some(value.parse().map_err(|_| bad("threads"))?),
            "budget_seconds" => {
                defaults.budget_seconds = Some(value.parse().map_err(|_| bad("budget_seconds"))?)
            }
            "seed" => defaults.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "out" => defaults.out = Some(PathBuf::from(value)),
            _ => {
                return Err(CliError::Validation(format!(
                    "config line {}: unknown key {key:?}",
                    lineno + 1
                )))
            }
        }
    }
    Ok(defaults)
}

fn parse_u64_list(s: &str, what: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| CliError::Validation(format!("bad {what} value: {t:?}")))
        })
        .collect()
}

/// Merge flags over config-file defaults over built-ins.
pub fn resolve_config(cli: Cli) -> Result<CliConfig, CliError> {
    let file = match &cli.config {
        Some(path) => parse_config_file(path)?,
        None => FileDefaults::default(),
    };
    let format = cli
        .format
        .or(file.format)
        .unwrap_or(OutputFormat::Plain);
    let threads = cli.threads.or(file.threads).unwrap_or(0);
    let budget_seconds = cli.budget_seconds.or(file.budget_seconds).unwrap_or(0);
    let seed = cli.seed.or(file.seed).unwrap_or(0);
    let out = cli.out.or(file.out);

    let command = match cli.command {
        CliCommand::G { c, d, ell } => CommandConfig::G { c, d, ell },
        CliCommand::RepCount { c, d, n } => CommandConfig::RepCount { c, d, n },
        CliCommand::Gaps { c, d, ell } => CommandConfig::Gaps { c, d, ell },
        CliCommand::Count { c, d, ell, oracle } => CommandConfig::Count { c, d, ell, oracle },
        CliCommand::Scan {
            c,
            pairing,
            fixed_d,
            ell,
        } => {
            let pairing = match pairing {
                PairingArg::Consecutive => Pairing::Consecutive,
                PairingArg::Fixed => Pairing::FixedD {
                    d: fixed_d.ok_or_else(|| {
                        CliError::Validation("--pairing fixed requires --fixed-d".into())
                    })?,
                },
                PairingArg::Random => Pairing::RandomCoprime { seed },
            };
            CommandConfig::Scan {
                spec: counts::ScanSpec {
                    c_values: parse_u64_list(&c, "--c")?,
                    pairing,
                    ell_values: parse_u64_list(&ell, "--ell")?,
                    output: match &out {
                        Some(p) => OutputSink::Path(p.clone()),
                        None => OutputSink::Stdout,
                    },
                },
            }
        }
        CliCommand::Circle {
            c,
            d,
            ell,
            q,
            grid,
            mode,
            samples,
        } => CommandConfig::Circle {
            c,
            d,
            ell,
            arc: ArcConfig {
                q,
                grid_points: grid,
                mode: match mode {
                    ModeArg::Exact => ArcMode::ExactGrid,
                    ModeArg::Sampled => ArcMode::Sampled,
                },
            },
            samples,
        },
    };

    Ok(CliConfig {
        command,
        format,
        threads,
        budget_seconds,
        seed,
        out,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmdOutput {
    pub body: String,
    pub diagnostics: Vec<String>,
    pub budget_hit: bool,
}

impl CmdOutput {
    fn plain(body: String) -> Self {
        Self {
            body,
            diagnostics: Vec::new(),
            budget_hit: false,
        }
    }
}

fn csv_of_records(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
}

fn single_value(format: OutputFormat, key: &str, value: u64) -> String {
    match format {
        OutputFormat::Plain => format!("{value}\n"),
        OutputFormat::Json => format!("{{\"{key}\":{value}}}\n"),
        OutputFormat::Csv => format!("{key}\n{value}\n"),
    }
}

fn count_plain(report: &CountReport) -> String {
    let r = report.row();
    let mut s = String::new();
    let _ = writeln!(s, "c = {}", r.c);
    let _ = writeln!(s, "d = {}", r.d);
    let _ = writeln!(s, "ell = {}", r.ell);
    let _ = writeln!(s, "g_ell = {}", r.g_ell);
    let _ = writeln!(s, "pi_ell = {}", r.pi_ell);
    let _ = writeln!(s, "pi_of_g = {}", r.pi_of_g);
    let _ = writeln!(s, "psi_ell = {}", fmt_sig12(r.psi_ell));
    let _ = writeln!(s, "theta_ell = {}", fmt_sig12(r.theta_ell));
    let _ = writeln!(s, "ratio = {}", fmt_sig12(r.ratio));
    let _ = writeln!(s, "half_g = {}", fmt_sig12(r.half_g));
    let _ = writeln!(s, "psi_over_half_g = {}", fmt_sig12(r.psi_over_half_g));
    let _ = writeln!(s, "pi_reconstructed = {}", fmt_sig12(r.pi_reconstructed));
    if r.pi_of_g == 0 {
        let _ = writeln!(s, "note: pi_of_g = 0, ratio undefined and reported as 0");
    }
    s
}

/// Brute-force rebuild of a report, sharing no counting code with the fast
/// path: representation counts come from the loop oracle and the partial
/// summation is re-derived from scratch.
fn audit_report(params: &SemigroupParams) -> Result<CountReport, CliError> {
    let g_ell = params.g_ell();
    if g_ell > ORACLE_AUDIT_LIMIT {
        return Err(CliError::Validation(format!(
            "--oracle audits are limited to g_ell <= {ORACLE_AUDIT_LIMIT} (got {g_ell})"
        )));
    }
    let table = sieve_range(0, g_ell)?;
    let ell_cd = params.ell_cd();
    let need = params.ell() + 1;

    let mut pi_of_g = 0u64;
    let mut pi_ell = 0u64;
    let mut theta = 0.0f64;
    let mut integral = 0.0f64;
    let mut last_inv_log = 0.0f64;
    let mut any = false;
    for p in table.iter_primes() {
        pi_of_g += 1;
        if p > ell_cd && rep_count_oracle(params.c(), params.d(), p).map_err(CliError::from)? >= need
        {
            let inv = 1.0 / (p as f64).ln();
            if any {
                integral += theta * (last_inv_log - inv);
            }
            theta += (p as f64).ln();
            last_inv_log = inv;
            any = true;
            pi_ell += 1;
        }
    }
    let mut psi = theta;
    for &(n, log_p) in table.prime_powers() {
        if n > ell_cd
            && rep_count_oracle(params.c(), params.d(), n - ell_cd).map_err(CliError::from)? >= 1
        {
            psi += log_p;
        }
    }
    let pi_reconstructed = if any {
        let inv_g = 1.0 / (g_ell as f64).ln();
        theta * inv_g + integral + theta * (last_inv_log - inv_g)
    } else {
        0.0
    };
    let half_g = params.g_zero() as f64 / 2.0;
    Ok(CountReport {
        params: *params,
        pi_ell,
        pi_of_g,
        psi_ell: psi,
        theta_ell: theta,
        ratio: if pi_of_g == 0 {
            0.0
        } else {
            (2.0 * params.ell() as f64 + 2.0) * pi_ell as f64 / pi_of_g as f64
        },
        half_g,
        psi_over_half_g: psi / half_g,
        pi_reconstructed,
    })
}

fn check_audit(fast: &CountReport, audit: &CountReport) -> Result<(), CliError> {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
    if fast.pi_ell != audit.pi_ell
        || fast.pi_of_g != audit.pi_of_g
        || !close(fast.psi_ell, audit.psi_ell)
        || !close(fast.theta_ell, audit.theta_ell)
        || !close(fast.pi_reconstructed, audit.pi_reconstructed)
    {
        return Err(CliError::Internal(format!(
            "oracle audit mismatch: fast (pi={}, psi={}) vs oracle (pi={}, psi={})",
            fast.pi_ell, fast.psi_ell, audit.pi_ell, audit.psi_ell
        )));
    }
    Ok(())
}

fn scan_csv(outcome: &ScanOutcome) -> String {
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    header.push("error");
    let rows = outcome
        .rows
        .iter()
        .map(|row| match (&row.report, &row.error) {
            (Some(rep), _) => {
                let mut fields = rep.csv_fields();
                fields.push(String::new());
                fields
            }
            (None, err) => {
                let mut fields = vec![
                    row.c.to_string(),
                    row.d.to_string(),
                    row.ell.to_string(),
                ];
                fields.extend(std::iter::repeat_n(String::new(), CSV_COLUMNS.len() - 3));
                fields.push(err.clone().unwrap_or_default());
                fields
            }
        })
        .collect();
    csv_of_records(&header, rows)
}

#[derive(Serialize)]
struct ScanJsonRow {
    c: u64,
    d: u64,
    ell: u64,
    g_ell: Option<u64>,
    pi_ell: Option<u64>,
    pi_of_g: Option<u64>,
    psi_ell: Option<f64>,
    theta_ell: Option<f64>,
    ratio: Option<f64>,
    half_g: Option<f64>,
    psi_over_half_g: Option<f64>,
    pi_reconstructed: Option<f64>,
    error: Option<String>,
}

fn scan_json_row(row: &ScanRow) -> ScanJsonRow {
    match &row.report {
        Some(rep) => {
            let r = rep.row();
            ScanJsonRow {
                c: r.c,
                d: r.d,
                ell: r.ell,
                g_ell: Some(r.g_ell),
                pi_ell: Some(r.pi_ell),
                pi_of_g: Some(r.pi_of_g),
                psi_ell: Some(r.psi_ell),
                theta_ell: Some(r.theta_ell),
                ratio: Some(r.ratio),
                half_g: Some(r.half_g),
                psi_over_half_g: Some(r.psi_over_half_g),
                pi_reconstructed: Some(r.pi_reconstructed),
                error: None,
            }
        }
        None => ScanJsonRow {
            c: row.c,
            d: row.d,
            ell: row.ell,
            g_ell: None,
            pi_ell: None,
            pi_of_g: None,
            psi_ell: None,
            theta_ell: None,
            ratio: None,
            half_g: None,
            psi_over_half_g: None,
            pi_reconstructed: None,
            error: row.error.clone(),
        },
    }
}

fn scan_plain(outcome: &ScanOutcome) -> String {
    let mut s = String::new();
    for row in &outcome.rows {
        match &row.report {
            Some(rep) => {
                let r = rep.row();
                let _ = writeln!(
                    s,
                    "c={} d={} ell={} g_ell={} pi_ell={} pi_of_g={} psi_ell={} theta_ell={} \
                     ratio={} half_g={} psi_over_half_g={} pi_reconstructed={}",
                    r.c,
                    r.d,
                    r.ell,
                    r.g_ell,
                    r.pi_ell,
                    r.pi_of_g,
                    fmt_sig12(r.psi_ell),
                    fmt_sig12(r.theta_ell),
                    fmt_sig12(r.ratio),
                    fmt_sig12(r.half_g),
                    fmt_sig12(r.psi_over_half_g),
                    fmt_sig12(r.pi_reconstructed),
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    "c={} d={} ell={} error={}",
                    row.c,
                    row.d,
                    row.ell,
                    row.error.as_deref().unwrap_or("unknown")
                );
            }
        }
    }
    s
}

#[derive(Serialize)]
struct CircleJsonRow {
    c: u64,
    d: u64,
    ell: u64,
    q: u64,
    grid_points: u64,
    mode: ArcMode,
    major_re: f64,
    major_im: f64,
    minor_re: f64,
    minor_im: f64,
    total_exact: f64,
    half_g: f64,
    error_estimate: f64,
    quadrature_defect: f64,
    minor_sup_estimate: f64,
}

fn execute_circle(
    params: &SemigroupParams,
    arc: &ArcConfig,
    samples: u64,
    seed: u64,
    format: OutputFormat,
) -> Result<String, CliError> {
    let table = sieve_range(params.ell_cd(), params.g_ell())?;
    let report = circle::arc_report(params, &table, arc, samples, seed)?;
    let dec = &report.decomposition;
    let defect = (dec.major + dec.minor - dec.total_exact).norm();
    let row = CircleJsonRow {
        c: params.c(),
        d: params.d(),
        ell: params.ell(),
        q: dec.q,
        grid_points: dec.grid_points,
        mode: dec.mode,
        major_re: dec.major.re,
        major_im: dec.major.im,
        minor_re: dec.minor.re,
        minor_im: dec.minor.im,
        total_exact: dec.total_exact,
        half_g: dec.half_g,
        error_estimate: dec.error_estimate,
        quadrature_defect: defect,
        minor_sup_estimate: report.minor_sup_estimate,
    };
    Ok(match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string(&row).expect("serializable");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let header = [
                "c",
                "d",
                "ell",
                "q",
                "grid_points",
                "mode",
                "major_re",
                "major_im",
                "minor_re",
                "minor_im",
                "total_exact",
                "half_g",
                "error_estimate",
                "quadrature_defect",
                "minor_sup_estimate",
            ];
            let mode = match row.mode {
                ArcMode::ExactGrid => "exact_grid",
                ArcMode::Sampled => "sampled",
            };
            csv_of_records(
                &header,
                vec![vec![
                    row.c.to_string(),
                    row.d.to_string(),
                    row.ell.to_string(),
                    row.q.to_string(),
                    row.grid_points.to_string(),
                    mode.to_string(),
                    fmt_sig12(row.major_re),
                    fmt_sig12(row.major_im),
                    fmt_sig12(row.minor_re),
                    fmt_sig12(row.minor_im),
                    fmt_sig12(row.total_exact),
                    fmt_sig12(row.half_g),
                    fmt_sig12(row.error_estimate),
                    fmt_sig12(row.quadrature_defect),
                    fmt_sig12(row.minor_sup_estimate),
                ]],
            )
        }
        OutputFormat::Plain => {
            let mut s = String::new();
            let _ = writeln!(s, "c = {}", row.c);
            let _ = writeln!(s, "d = {}", row.d);
            let _ = writeln!(s, "ell = {}", row.ell);
            let _ = writeln!(s, "q = {}", row.q);
            let _ = writeln!(s, "grid_points = {}", row.grid_points);
            let _ = writeln!(
                s,
                "mode = {}",
                match row.mode {
                    ArcMode::ExactGrid => "exact_grid",
                    ArcMode::Sampled => "sampled",
                }
            );
            let _ = writeln!(s, "major = {} + {}i", fmt_sig12(row.major_re), fmt_sig12(row.major_im));
            let _ = writeln!(s, "minor = {} + {}i", fmt_sig12(row.minor_re), fmt_sig12(row.minor_im));
            let _ = writeln!(s, "total_exact = {}", fmt_sig12(row.total_exact));
            let _ = writeln!(s, "half_g = {}", fmt_sig12(row.half_g));
            let _ = writeln!(s, "error_estimate = {}", fmt_sig12(row.error_estimate));
            let _ = writeln!(s, "quadrature_defect = {}", fmt_sig12(row.quadrature_defect));
            let _ = writeln!(s, "minor_sup_estimate = {}", fmt_sig12(row.minor_sup_estimate));
            s
        }
    })
}

/// Run one resolved invocation and render its output.
pub fn execute(config: &CliConfig) -> Result<CmdOutput, CliError> {
    let opts = ReportOptions {
        budget: Budget::from_seconds(config.budget_seconds),
        ..ReportOptions::default()
    };
    match &config.command {
        CommandConfig::G { c, d, ell } => {
            let params = validate_params(*c, *d, *ell)?;
            Ok(CmdOutput::plain(single_value(
                config.format,
                "g_ell",
                frobenius_ell(&params),
            )))
        }
        CommandConfig::RepCount { c, d, n } => {
            let count = semigroup::rep_count(*c, *d, *n)?;
            Ok(CmdOutput::plain(single_value(
                config.format,
                "rep_count",
                count,
            )))
        }
        CommandConfig::Gaps { c, d, ell } => {
            let params = validate_params(*c, *d, *ell)?;
            let gaps = semigroup::gaps(&params)?;
            let body = match config.format {
                OutputFormat::Plain => {
                    let strs: Vec<String> = gaps.iter().map(u64::to_string).collect();
                    format!("{}\n", strs.join(","))
                }
                OutputFormat::Json => {
                    let obj = serde_json::json!({
                        "c": c, "d": d, "ell": ell,
                        "g_ell": params.g_ell(),
                        "gaps": gaps,
                    });
                    format!("{obj}\n")
                }
                OutputFormat::Csv => {
                    csv_of_records(&["n"], gaps.iter().map(|n| vec![n.to_string()]).collect())
                }
            };
            Ok(CmdOutput::plain(body))
        }
        CommandConfig::Count { c, d, ell, oracle } => {
            let params = validate_params(*c, *d, *ell)?;
            let report = counts::report(&params, &opts)?;
            if *oracle {
                check_audit(&report, &audit_report(&params)?)?;
            }
            let body = match config.format {
                OutputFormat::Csv => {
                    csv_of_records(&CSV_COLUMNS, vec![report.csv_fields()])
                }
                OutputFormat::Json => {
                    let mut s = serde_json::to_string(&report.row()).expect("serializable");
                    s.push('\n');
                    s
                }
                OutputFormat::Plain => count_plain(&report),
            };
            Ok(CmdOutput::plain(body))
        }
        CommandConfig::Scan { spec } => {
            let outcome = counts::scan(spec, &opts);
            let body = match config.format {
                OutputFormat::Csv => scan_csv(&outcome),
                OutputFormat::Json => {
                    let rows: Vec<ScanJsonRow> = outcome.rows.iter().map(scan_json_row).collect();
                    let mut s = serde_json::to_string(&rows).expect("serializable");
                    s.push('\n');
                    s
                }
                OutputFormat::Plain => scan_plain(&outcome),
            };
            Ok(CmdOutput {
                body,
                diagnostics: counts::trend_diagnostics(&outcome.rows),
                budget_hit: outcome.budget_exhausted,
            })
        }
        CommandConfig::Circle {
            c,
            d,
            ell,
            arc,
            samples,
        } => {
            let params = validate_params(*c, *d, *ell)?;
            let body = execute_circle(&params, arc, *samples, config.seed, config.format)?;
            Ok(CmdOutput::plain(body))
        }
    }
}

fn write_output(config: &CliConfig, output: &CmdOutput) -> Result<(), CliError> {
    match &config.out {
        Some(path) => fs::write(path, output.body.as_bytes())?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(output.body.as_bytes())?;
            stdout.flush()?;
        }
    }
    for line in &output.diagnostics {
        eprintln!("{line}");
    }
    Ok(())
}

fn run_resolved(config: &CliConfig) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    let output = pool.install(|| execute(config))?;
    write_output(config, &output)?;
    if output.budget_hit {
        return Err(CliError::Budget);
    }
    Ok(())
}

/// Entry point for the `frob` binary; returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match resolve_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return e.exit_code();
        }
    };
    match run_resolved(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(args: &[&str]) -> CliConfig {
        let cli = Cli::try_parse_from(args).expect("parse");
        resolve_config(cli).expect("resolve")
    }

    #[test]
    fn config_round_trips_through_serde() {
        for args in [
            vec!["frob", "g", "--c", "3", "--d", "5", "--ell", "1"],
            vec!["frob", "--format", "json", "count", "--c", "3", "--d", "5"],
            vec![
                "frob",
                "scan",
                "--c",
                "300,3000",
                "--pairing",
                "random",
                "--ell",
                "0,1,2",
                "--seed",
                "9",
            ],
            vec![
                "frob", "circle", "--c", "101", "--d", "103", "--Q", "4", "--grid", "4096",
                "--mode", "sampled",
            ],
        ] {
            let config = resolve(&args);
            let json = serde_json::to_string(&config).unwrap();
            let back: CliConfig = serde_json::from_str(&json).unwrap();
            assert_eq!(config, back, "args={args:?}");
        }
    }

    #[test]
    fn empty_scan_list_parses_to_no_pairs() {
        let config = resolve(&["frob", "scan", "--c", "", "--ell", "0,1"]);
        match &config.command {
            CommandConfig::Scan { spec } => {
                assert!(spec.c_values.is_empty());
                assert_eq!(spec.ell_values, vec![0, 1]);
            }
            other => panic!("unexpected command {other:?}"),
        }
    }

    #[test]
    fn fixed_pairing_requires_d() {
        let cli =
            Cli::try_parse_from(["frob", "scan", "--c", "5", "--pairing", "fixed"]).unwrap();
        assert!(matches!(
            resolve_config(cli),
            Err(CliError::Validation(_))
        ));
    }

    #[test]
    fn config_file_defaults_and_flag_override() {
        let dir = std::env::temp_dir().join(format!("frob-config-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("frob.conf");
        fs::write(&path, "# defaults\nformat=json\nthreads=2\nseed=11\n").unwrap();

        let cli = Cli::try_parse_from([
            "frob",
            "--config",
            path.to_str().unwrap(),
            "g",
            "--c",
            "3",
            "--d",
            "5",
        ])
        .unwrap();
        let config = resolve_config(cli).unwrap();
        assert_eq!(config.format, OutputFormat::Json);
        assert_eq!(config.threads, 2);
        assert_eq!(config.seed, 11);

        let cli = Cli::try_parse_from([
            "frob",
            "--config",
            path.to_str().unwrap(),
            "--format",
            "csv",
            "g",
            "--c",
            "3",
            "--d",
            "5",
        ])
        .unwrap();
        let config = resolve_config(cli).unwrap();
        assert_eq!(config.format, OutputFormat::Csv);

        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn g_command_formats() {
        let config = resolve(&["frob", "g", "--c", "3", "--d", "5", "--ell", "1"]);
        assert_eq!(execute(&config).unwrap().body, "22\n");

        let config = resolve(&["frob", "--format", "json", "g", "--c", "3", "--d", "5"]);
        assert_eq!(execute(&config).unwrap().body, "{\"g_ell\":7}\n");
    }

    #[test]
    fn validation_maps_to_exit_2() {
        let config = resolve(&["frob", "g", "--c", "4", "--d", "6"]);
        let err = execute(&config).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn count_oracle_audit_small() {
        let config = resolve(&["frob", "count", "--c", "3", "--d", "5", "--oracle"]);
        assert!(execute(&config).is_ok());
    }
}
