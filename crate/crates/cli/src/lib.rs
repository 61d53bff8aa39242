//! The `zetareg` command line: argument handling, dispatch and exit codes.
//!
//! [`run`] writes to caller-supplied streams and returns the exit code, so
//! the whole front end can be driven in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use zetareg_core::exact::Rational;
use zetareg_core::query::{self, Arg, EvalContext, EvalError, Function, QueryAst, ResultDocument};
use zetareg_core::regint::{parse_series_bytes, PowerSeries, SeriesFileError};
use zetareg_core::special::EvalPrecision;
use zetareg_core::table::{lambda_table, TableError};
use zetareg_core::verify::{verify, Suite};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;

/// Name under which a `--series-file` series is registered.
pub const FILE_SERIES_NAME: &str = "file";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "zetareg",
    version,
    about = "Zeta-regularized values of divergent power integrals",
    propagate_version = true
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Target relative error for numeric routes.
    #[arg(long, global = true, value_name = "REL_ERR", value_parser = parse_precision)]
    pub precision: Option<f64>,

    /// Coefficient file (`k,p/q` per line), available as the series `file`.
    #[arg(long, global = true, value_name = "PATH")]
    pub series_file: Option<PathBuf>,

    /// Number of terms in the non-integer μ certificate.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub truncation: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one query, e.g. `mu(3)`, `zeta(-1)` or `regint(exp, 20)`.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Emit (r, λ(r)) on a regular grid.
    LambdaTable {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_number)]
        from: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_number)]
        to: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_number)]
        step: Rational,
    },
    /// Check the library's identities and report residuals.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
    /// Regularize ∫_0^∞ f(x) dx for a builtin or file series.
    Regint {
        /// exp, geometric, sin, cos, or `file` with --series-file.
        #[arg(long)]
        series: Option<String>,
        /// Highest power included in the partial sum.
        #[arg(long)]
        n: u64,
    },
}

fn parse_number(s: &str) -> Result<Rational, String> {
    Rational::from_decimal_str(s)
        .or_else(|_| s.parse::<Rational>())
        .map_err(|e| format!("not a decimal or p/q number: {e}"))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

fn parse_precision(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    EvalPrecision::new(p, EvalPrecision::default().max_terms)
        .map(|_| p)
        .map_err(|e| e.to_string())
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_PARSE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "{}", failure.message);
            failure.exit_code
        }
    }
}

struct Failure {
    exit_code: u8,
    message: String,
}

impl Failure {
    fn domain(code: &str, message: impl std::fmt::Display) -> Self {
        Failure {
            exit_code: EXIT_DOMAIN,
            message: format!("error[{code}]: {message}"),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::domain(e.code, e.message)
    }
}

impl From<TableError> for Failure {
    fn from(e: TableError) -> Self {
        let code = match e {
            TableError::NonPositiveStep(_) => "non_positive_step",
            TableError::EmptyRange { .. } => "empty_range",
            TableError::GridTooLarge { .. } => "grid_too_large",
        };
        Failure::domain(code, e)
    }
}

fn context(cli: &Cli) -> Result<EvalContext, Failure> {
    let mut ctx = EvalContext::default();
    if let Some(p) = cli.precision {
        ctx.precision.target_rel_error = p;
    }
    if let Some(n) = cli.truncation {
        ctx.truncation = usize::try_from(n).unwrap_or(usize::MAX);
    }
    if let Some(path) = &cli.series_file {
        ctx.user_series.push(load_series(path)?);
    }
    Ok(ctx)
}

fn load_series(path: &Path) -> Result<PowerSeries, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::domain("io", format!("cannot read {}: {e}", path.display())))?;
    let coeffs = parse_series_bytes(&bytes).map_err(|e| Failure {
        exit_code: EXIT_PARSE,
        message: render_series_error(path, &bytes, &e),
    })?;
    Ok(PowerSeries::from_coefficients(FILE_SERIES_NAME, coeffs))
}

/// `path:line: message` plus the offending line with a caret under the byte.
fn render_series_error(path: &Path, bytes: &[u8], e: &SeriesFileError) -> String {
    let offset = e.offset.min(bytes.len());
    let start = bytes[..offset]
        .iter()
        .rposition(|b| *b == b'\n')
        .map_or(0, |i| i + 1);
    let end = bytes[offset..]
        .iter()
        .position(|b| *b == b'\n')
        .map_or(bytes.len(), |i| offset + i);
    let line = String::from_utf8_lossy(&bytes[start..end]);
    let line = line.trim_end_matches('\r');
    let col = String::from_utf8_lossy(&bytes[start..offset])
        .chars()
        .count();
    format!(
        "error[series_file]: {}: {e}\n  {line}\n  {}^",
        path.display(),
        " ".repeat(col)
    )
}

fn render_document(doc: &ResultDocument, format: Format) -> String {
    match format {
        Format::Text => doc.to_text(),
        Format::Csv => doc.to_csv(),
        Format::Json => {
            let mut s = doc.to_json();
            s.push('\n');
            s
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::domain("io", format!("cannot write output: {e}")))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    match &cli.command {
        Command::Eval { expr } => {
            let ctx = context(cli)?;
            let ast = query::parse(expr).map_err(|e| Failure {
                exit_code: EXIT_PARSE,
                message: e.render(expr),
            })?;
            let doc = query::evaluate(&ast, &ctx)?;
            emit(out, &render_document(&doc, cli.format))?;
            Ok(EXIT_OK)
        }
        Command::Regint { series, n } => {
            let ctx = context(cli)?;
            let name = match (series, &cli.series_file) {
                (Some(name), _) => name.clone(),
                (None, Some(_)) => FILE_SERIES_NAME.to_string(),
                (None, None) => {
                    return Err(Failure {
                        exit_code: EXIT_PARSE,
                        message: "error: regint needs --series or --series-file".into(),
                    })
                }
            };
            let ast = QueryAst {
                function: Function::Regint,
                args: vec![Arg::Name(name), Arg::Number(Rational::from_integer(*n))],
            };
            let doc = query::evaluate(&ast, &ctx)?;
            emit(out, &render_document(&doc, cli.format))?;
            Ok(EXIT_OK)
        }
        Command::LambdaTable { from, to, step } => {
            let table = lambda_table(from, to, step)?;
            let text = match cli.format {
                Format::Text => table.to_text(),
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json() + "\n",
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => {
            let report = verify(*suite);
            let text = match cli.format {
                Format::Text => report.to_text(),
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json() + "\n",
            };
            emit(out, &text)?;
            Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}
