//! The `svp` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, 3 tolerance not
//! reached, 4 route unavailable.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::arith::kloosterman;
use crate::catalog::{self, rank_two_table, RankTwoCase};
use crate::poincare::{poincare_qexp, Control};
use crate::svp::{
    cm_rationality_check, rank2_rho, route_available, RationalityCriterion, Route, SvRankTwoResult,
    SvpError,
};
use crate::verify::{self, rationality_control, CheckContext, Status, Suite};

#[derive(Debug, Parser)]
#[command(name = "svp", version, about = "Poincare series coefficients and single-valued periods")]
pub struct Cli {
    /// Worker threads for the Kloosterman sums (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Periods,
    Poincare,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Fast,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The Kloosterman sum K(a, b; c).
    Kloosterman {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        c: u64,
    },
    /// Coefficients a_1..a_{n_max} of P_{m,weight,N}.
    Poincare {
        #[arg(long = "N", value_parser = clap::value_parser!(u64).range(1..))]
        level: u64,
        #[arg(long)]
        weight: u32,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 10)]
        n_max: u64,
        /// Sum moduli c <= c_max (default 1e5 in weight 2, 1e4 otherwise).
        #[arg(long, conflicts_with = "tol")]
        c_max: Option<u64>,
        /// Stop once every tail bound is below this.
        #[arg(long)]
        tol: Option<f64>,
        /// Largest modulus tried under --tol.
        #[arg(long, default_value_t = 1_000_000, requires = "tol")]
        cap: u64,
    },
    /// The single-valued period data (c, rho) of a rank-two case.
    Sv {
        #[arg(long = "N")]
        level: u64,
        #[arg(long)]
        weight: u32,
        #[arg(long, value_enum, default_value_t = RouteArg::Both)]
        route: RouteArg,
        /// Residuals are reported for n = 1..=n_max.
        #[arg(long, default_value_t = 8)]
        n_max: u64,
        /// Modulus cutoff of the Poincare route (default 1e6 in weight 2, 1e4 otherwise).
        #[arg(long)]
        c_max: Option<u64>,
    },
    /// All rank-two cases with (c, rho) and the CM rationality verdict.
    Table {
        #[arg(long, default_value_t = 10)]
        n_max: u64,
    },
    /// Run the reproduction checks.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Only run these check ids.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
    },
}

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_TOLERANCE: u8 = 3;
pub const EXIT_ROUTE: u8 = 4;

/// A command's rendered output and exit status.
struct Outcome {
    body: String,
    code: u8,
    warnings: Vec<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self {
            body,
            code: 0,
            warnings: Vec::new(),
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::new(1, e.to_string())
    }
}

fn svp_failure(e: SvpError) -> Failure {
    match e {
        SvpError::RouteUnavailable { .. } | SvpError::Unsupported { .. } => {
            Failure::new(EXIT_ROUTE, e.to_string())
        }
        e => Failure::new(1, e.to_string()),
    }
}

/// Parses the process arguments and runs the command.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    ExitCode::from(run(cli))
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli) -> u8 {
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("svp: {e}");
            return EXIT_USAGE;
        }
    }
    let result = match &cli.command {
        Command::Kloosterman { a, b, c } => cmd_kloosterman(*a, *b, *c, cli.format),
        Command::Poincare {
            level,
            weight,
            m,
            n_max,
            c_max,
            tol,
            cap,
        } => cmd_poincare(*level, *weight, *m, *n_max, *c_max, tol.map(|t| (t, *cap)), cli.format),
        Command::Sv {
            level,
            weight,
            route,
            n_max,
            c_max,
        } => cmd_sv(*level, *weight, *route, *n_max, *c_max, cli.format),
        Command::Table { n_max } => cmd_table(*n_max, cli.format),
        Command::Verify { suite, only } => cmd_verify(*suite, only.as_deref(), cli.format),
    };
    match result {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("svp: warning: {w}");
            }
            if let Err(e) = emit(&out.body, cli.output.as_ref()) {
                eprintln!("svp: {e}");
                return 1;
            }
            out.code
        }
        Err(f) => {
            eprintln!("svp: {}", f.message);
            f.code
        }
    }
}

fn emit(body: &str, path: Option<&PathBuf>) -> io::Result<()> {
    match path {
        Some(p) => File::create(p)?.write_all(body.as_bytes()),
        None => io::stdout().lock().write_all(body.as_bytes()),
    }
}

/// Text rendering of a number: twelve decimals, or twelve significant
/// digits in scientific notation outside `[1e-4, 1e12)`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if !x.is_finite() {
        format!("{x}")
    } else if a == 0.0 || (1e-4..1e12).contains(&a) {
        format!("{x:.12}")
    } else {
        format!("{x:.11e}")
    }
}

fn format_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), format_number)
}

/// `None` for non-finite values so that JSON holds `null`.
fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::new(1, e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::new(1, e.to_string()))
}

fn cmd_kloosterman(a: i64, b: i64, c: u64, format: Format) -> Result<Outcome, Failure> {
    let value = kloosterman(a, b, c).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    #[derive(Serialize)]
    struct Row {
        a: i64,
        b: i64,
        c: u64,
        value: f64,
    }
    let row = Row { a, b, c, value };
    Ok(Outcome::ok(match format {
        Format::Text => format!("{}\n", format_number(value)),
        Format::Json => to_json(&row)?,
        Format::Csv => to_csv(&[row])?,
    }))
}

/// One row of `svp poincare`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareRow {
    pub n: u64,
    pub value: f64,
    /// Absent while the summed moduli have not reached the range where the
    /// tail bound applies.
    pub tail_estimate: Option<f64>,
    pub c_max: u64,
    pub warning: Option<String>,
}

/// Default modulus cutoff: weight 2 converges slowly.
pub fn default_c_max(weight: u32) -> u64 {
    if weight == 2 {
        100_000
    } else {
        10_000
    }
}

fn cmd_poincare(
    level: u64,
    weight: u32,
    m: i64,
    n_max: u64,
    c_max: Option<u64>,
    tol: Option<(f64, u64)>,
    format: Format,
) -> Result<Outcome, Failure> {
    if m == 0 {
        return Err(Failure::new(EXIT_USAGE, "m = 0 is the Eisenstein series; use m != 0"));
    }
    let control = match tol {
        Some((tol, cap)) => Control::Tol { tol, cap },
        None => Control::CMax(c_max.unwrap_or_else(|| default_c_max(weight))),
    };
    let p = poincare_qexp(m, weight, level, n_max, control)
        .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    let rows: Vec<PoincareRow> = p
        .coeffs
        .iter()
        .map(|c| PoincareRow {
            n: c.n,
            value: c.value,
            tail_estimate: finite(c.tail_estimate),
            c_max: c.c_max,
            warning: (c.tol_met == Some(false)).then(|| "tolerance not reached".to_string()),
        })
        .collect();
    let unmet = rows.iter().filter(|r| r.warning.is_some()).count();
    let body = match format {
        Format::Json => to_json(&rows)?,
        Format::Csv => to_csv(&rows)?,
        Format::Text => {
            let mut s = format!("# P_{{{m},{weight},{level}}}\n");
            s.push_str(&format!("{:>4}  {:>28}  {:>20}  {:>9}\n", "n", "value", "tail_estimate", "c_max"));
            for r in &rows {
                s.push_str(&format!(
                    "{:>4}  {:>28}  {:>20}  {:>9}{}\n",
                    r.n,
                    format_number(r.value),
                    r.tail_estimate.map_or("inf".to_string(), |t| format!("{t:.3e}")),
                    r.c_max,
                    if r.warning.is_some() { "  tolerance not reached" } else { "" }
                ));
            }
            s
        }
    };
    let mut out = Outcome::ok(body);
    if unmet > 0 {
        out.code = EXIT_TOLERANCE;
        out.warnings.push(format!("tolerance not reached for {unmet} coefficient(s)"));
    }
    Ok(out)
}

/// Output record of `svp sv` for one route.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvRecord {
    pub level: u64,
    pub weight: u32,
    pub route: String,
    pub c: f64,
    pub rho: Option<f64>,
    /// `|det P - 2 pi i|`, periods route only.
    pub det_residual: Option<f64>,
    /// Largest `|a_n(P_m) - predicted| / max(1, |predicted|)`, Poincare
    /// route only.
    pub max_residual: Option<f64>,
    pub residuals: Vec<ResidualRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub m: i64,
    pub n: u64,
    pub measured: f64,
    pub predicted: f64,
    pub deviation: f64,
}

/// Relative differences between the two routes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossRoute {
    pub c_relative: f64,
    pub rho_relative: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvOutput {
    pub records: Vec<SvRecord>,
    pub deviation: Option<CrossRoute>,
}

impl From<&SvRankTwoResult> for SvRecord {
    fn from(r: &SvRankTwoResult) -> Self {
        let residuals: Vec<ResidualRow> = r
            .residuals
            .iter()
            .map(|x| ResidualRow {
                m: x.m,
                n: x.n,
                measured: x.measured,
                predicted: x.predicted,
                deviation: x.deviation,
            })
            .collect();
        let max_residual = (!residuals.is_empty())
            .then(|| {
                residuals
                    .iter()
                    .map(|x| x.deviation.abs() / x.predicted.abs().max(1.0))
                    .fold(0.0, f64::max)
            });
        SvRecord {
            level: r.level,
            weight: r.weight,
            route: match r.route {
                Route::Periods => "periods",
                Route::Poincare => "poincare",
            }
            .to_string(),
            c: r.c,
            rho: r.rho,
            det_residual: r.legendre_residual,
            max_residual,
            residuals,
        }
    }
}

fn lookup(level: u64, weight: u32) -> Result<RankTwoCase, Failure> {
    catalog::find_case(level, weight).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))
}

fn sv_control(weight: u32, c_max: Option<u64>) -> Control {
    Control::CMax(c_max.unwrap_or(if weight == 2 { 1_000_000 } else { 10_000 }))
}

fn cmd_sv(
    level: u64,
    weight: u32,
    route: RouteArg,
    n_max: u64,
    c_max: Option<u64>,
    format: Format,
) -> Result<Outcome, Failure> {
    let case = lookup(level, weight)?;
    let routes = match route {
        RouteArg::Periods => vec![Route::Periods],
        RouteArg::Poincare => vec![Route::Poincare],
        RouteArg::Both => vec![Route::Periods, Route::Poincare],
    };
    let control = sv_control(weight, c_max);
    let mut records = Vec::new();
    for r in routes {
        let res = rank2_rho(case, r, n_max, control).map_err(svp_failure)?;
        records.push(SvRecord::from(&res));
    }
    let deviation = match records.as_slice() {
        [a, b] => Some(CrossRoute {
            c_relative: ((a.c - b.c) / a.c).abs(),
            rho_relative: a.rho.zip(b.rho).map(|(x, y)| ((x - y) / x).abs()),
        }),
        _ => None,
    };
    let output = SvOutput { records, deviation };
    let body = match format {
        Format::Json => to_json(&output)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Flat<'a> {
                level: u64,
                weight: u32,
                route: &'a str,
                c: f64,
                rho: Option<f64>,
                det_residual: Option<f64>,
                max_residual: Option<f64>,
            }
            let flat: Vec<Flat> = output
                .records
                .iter()
                .map(|r| Flat {
                    level: r.level,
                    weight: r.weight,
                    route: &r.route,
                    c: r.c,
                    rho: r.rho,
                    det_residual: r.det_residual,
                    max_residual: r.max_residual,
                })
                .collect();
            to_csv(&flat)?
        }
        Format::Text => {
            let mut s = String::new();
            for r in &output.records {
                s.push_str(&format!("({}, {}) route {}\n", r.level, r.weight, r.route));
                s.push_str(&format!("  c   = {}\n", format_number(r.c)));
                s.push_str(&format!("  rho = {}\n", format_opt(r.rho)));
                if let Some(d) = r.det_residual {
                    s.push_str(&format!("  |det P - 2 pi i| = {d:.3e}\n"));
                }
                if !r.residuals.is_empty() {
                    s.push_str("  m  n  a_n(P_m)  predicted  deviation\n");
                    for x in &r.residuals {
                        s.push_str(&format!(
                            "  {}  {}  {}  {}  {:.3e}\n",
                            x.m,
                            x.n,
                            format_number(x.measured),
                            format_number(x.predicted),
                            x.deviation
                        ));
                    }
                }
            }
            if let Some(d) = &output.deviation {
                s.push_str(&format!("cross-route relative deviation: c {:.3e}", d.c_relative));
                if let Some(r) = d.rho_relative {
                    s.push_str(&format!(", rho {r:.3e}"));
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome::ok(body))
}

/// One row of `svp table`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub level: u64,
    pub weight: u32,
    pub cm: bool,
    pub route: Option<String>,
    pub c: Option<f64>,
    pub rho: Option<f64>,
    /// `pass` or `fail` of the rational reconstruction of `a_n(P_{-1})`.
    pub rationality: Option<String>,
    pub error: Option<String>,
}

fn table_row(case: RankTwoCase, n_max: u64) -> TableRow {
    let mut row = TableRow {
        level: case.level,
        weight: case.weight,
        cm: case.cm,
        route: None,
        c: None,
        rho: None,
        rationality: None,
        error: None,
    };
    let mut errors = Vec::new();
    let route = [Route::Periods, Route::Poincare]
        .into_iter()
        .find(|&r| route_available(case, r));
    if let Some(r) = route {
        match rank2_rho(case, r, 1, sv_control(case.weight, Some(10_000))) {
            Ok(res) => {
                row.route = Some(SvRecord::from(&res).route);
                row.c = Some(res.c);
                row.rho = res.rho;
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    let control = rationality_control(case);
    match cm_rationality_check(case, n_max, control, RationalityCriterion::default()) {
        Ok(rep) => row.rationality = Some(if rep.pass { "pass" } else { "fail" }.to_string()),
        Err(e) => errors.push(e.to_string()),
    }
    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row
}

fn cmd_table(n_max: u64, format: Format) -> Result<Outcome, Failure> {
    let rows: Vec<TableRow> = rank_two_table().into_iter().map(|c| table_row(c, n_max)).collect();
    if rows.iter().all(|r| r.error.is_some()) {
        return Err(Failure::new(1, "every row failed"));
    }
    let body = match format {
        Format::Json => to_json(&rows)?,
        Format::Csv => to_csv(&rows)?,
        Format::Text => {
            let mut s = format!(
                "{:>3} {:>3} {:>3}  {:>8}  {:>22}  {:>22}  {}\n",
                "N", "w", "cm", "route", "c", "rho", "rational"
            );
            for r in &rows {
                s.push_str(&format!(
                    "{:>3} {:>3} {:>3}  {:>8}  {:>22}  {:>22}  {}\n",
                    r.level,
                    r.weight,
                    if r.cm { "yes" } else { "" },
                    r.route.as_deref().unwrap_or("-"),
                    format_opt(r.c),
                    format_opt(r.rho),
                    r.rationality.as_deref().unwrap_or("-"),
                ));
                if let Some(e) = &r.error {
                    s.push_str(&format!("    error: {e}\n"));
                }
            }
            s
        }
    };
    Ok(Outcome::ok(body))
}

fn cmd_verify(suite: SuiteArg, only: Option<&[u32]>, format: Format) -> Result<Outcome, Failure> {
    let suite = match suite {
        SuiteArg::Fast => Suite::Fast,
        SuiteArg::All => Suite::All,
    };
    let reports = verify::run_suite(suite, only, &CheckContext::default());
    let failed = reports
        .iter()
        .any(|r| matches!(r.status, Status::Fail | Status::Error));
    let body = match format {
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Line<'a> {
                id: u32,
                status: Status,
                label: &'a str,
                measured: f64,
                expected: f64,
                tolerance: f64,
                pass: bool,
            }
            let lines: Vec<Line> = reports
                .iter()
                .flat_map(|r| {
                    r.measurements.iter().map(move |m| Line {
                        id: r.id,
                        status: r.status,
                        label: &m.label,
                        measured: m.measured,
                        expected: m.expected,
                        tolerance: m.tolerance,
                        pass: m.pass,
                    })
                })
                .collect();
            to_csv(&lines)?
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&format!("{r}\n"));
            }
            let passed = reports.iter().filter(|r| r.status == Status::Pass).count();
            s.push_str(&format!("{passed}/{} checks passed\n", reports.len()));
            s
        }
    };
    Ok(Outcome {
        body,
        code: if failed { EXIT_VERIFY } else { 0 },
        warnings: Vec::new(),
    })
}
