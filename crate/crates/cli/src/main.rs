//! `sympectra` command-line front end.
//!
//! Exit codes: 0 success or property holds, 1 property check failed,
//! 2 invalid input, 3 numerical failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sympectra::io::{matrix_to_json, parse_matrix, parse_matrix_list, parse_vector};
use sympectra::random::{random_pd, random_symplectic};
use sympectra::*;

#[derive(Parser, Debug)]
#[command(name = "sympectra", version, about = "Symplectic eigenvalues, Schur-Horn and Ky Fan tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Tolerance for residual and order checks.
    #[arg(long, global = true, env = "SYMPECTRA_TOL", default_value_t = 1e-8)]
    tol: f64,

    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Mean: arithmetic, geometric, harmonic, min, max or power:<p>.
    #[arg(long, global = true, default_value = "geometric", value_parser = parse_mean)]
    mean: MeanSpec,

    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Weak supermajorization.
    Weak,
    /// Majorization (equal totals).
    Majorize,
}

#[derive(Args, Debug)]
struct Input {
    /// Input matrix file, JSON or whitespace text (stdin when absent).
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symplectic eigenvalues of a positive definite matrix.
    Eig(Input),
    /// Williamson factorization A = W (D ⊕ D) Wᵀ.
    Williamson(Input),
    /// Mean-paired diagonal M(a_jj, a_{n+j,n+j}).
    DiagM(Input),
    /// Check diag_M(A) against δ(A) in the weak supermajorization order.
    SchurCheck(Input),
    /// Build a positive definite matrix with prescribed diag_M and δ.
    Realize {
        /// Target diagonal (file or inline list).
        #[arg(long)]
        x: String,
        /// Target symplectic spectrum (file or inline list).
        #[arg(long)]
        y: String,
    },
    /// Explicit Ky Fan minimizer over symplectic frames.
    KyfanMin {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Randomized search for frames beating the Ky Fan bound.
    KyfanSearch {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// s-pinching with respect to a block partition.
    Pinch {
        #[command(flatten)]
        input: Input,
        /// Comma-separated block sizes (singletons when absent).
        #[arg(long)]
        partition: Option<String>,
    },
    /// Expanding sum of matrices (repeat --in, or pass a JSON list on stdin).
    Boxplus {
        #[arg(long = "in")]
        inputs: Vec<PathBuf>,
    },
    /// Extend a symplectic frame to a full symplectic matrix.
    CompleteFrame(Input),
    /// Compare two vectors in the weak supermajorization or majorization order.
    MajorCheck {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, value_enum, default_value_t = Kind::Weak)]
        kind: Kind,
    },
    /// Seeded random positive definite matrix of order 2n.
    RandomPd {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
    },
    /// Seeded random symplectic matrix of order 2n.
    RandomSymplectic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
    },
}

fn parse_mean(s: &str) -> std::result::Result<MeanSpec, String> {
    s.parse::<MeanSpec>().map_err(|e| e.to_string())
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// A report plus whether the property it checks held.
struct Outcome {
    body: Value,
    holds: bool,
}

impl Outcome {
    fn ok(body: Value) -> Self {
        Outcome { body, holds: true }
    }
}

fn read_source(path: Option<&Path>) -> CliResult<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_matrix(input: &Input) -> CliResult<Matrix> {
    Ok(parse_matrix(&read_source(input.input.as_deref())?)?)
}

fn read_pd(input: &Input) -> CliResult<PdMatrix> {
    Ok(PdMatrix::new(read_matrix(input)?)?)
}

/// A vector given as a file path or inline (`[1,2]`, `1,2`, `1 2`).
fn read_vector(arg: &str) -> CliResult<Vec<f64>> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok(parse_vector(&read_source(Some(path))?)?)
    } else {
        Ok(parse_vector(arg)?)
    }
}

fn matrix_outcome(m: &Matrix) -> Outcome {
    Outcome::ok(matrix_to_json(m))
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Failure::Input(format!("tolerance must be positive, got {}", cli.tol)));
    }
    let (tol, mean) = (cli.tol, &cli.mean);
    let outcome = match &cli.command {
        Command::Eig(input) => {
            let spectrum = symplectic_eigenvalues(&read_pd(input)?, tol)?;
            Outcome::ok(json!({ "delta": spectrum.delta }))
        }
        Command::Williamson(input) => {
            let f = williamson(&read_pd(input)?, tol)?;
            Outcome::ok(json!({
                "delta": f.delta,
                "w": matrix_to_json(&f.w),
                "residual": f.residual,
                "symplectic_residual": f.symplectic_residual,
            }))
        }
        Command::DiagM(input) => {
            let d = symplectic_diag(&read_matrix(input)?, mean)?;
            Outcome::ok(json!({ "mean": mean.to_string(), "diag_m": d }))
        }
        Command::SchurCheck(input) => {
            let report = schur_check(&read_pd(input)?, mean, tol)?;
            Outcome { body: report.to_json(), holds: report.verdict() }
        }
        Command::Realize { x, y } => {
            let a = horn_symplectic_realize(&read_vector(x)?, &read_vector(y)?, mean, tol)?;
            matrix_outcome(a.matrix())
        }
        Command::KyfanMin { input, k } => {
            Outcome::ok(kyfan_minimizer(&read_pd(input)?, *k, mean, tol)?.to_json())
        }
        Command::KyfanSearch { input, k, budget } => {
            let report = kyfan_search(&read_pd(input)?, *k, mean, *budget, cli.seed, tol)?;
            Outcome { body: report.to_json(), holds: report.violations == 0 }
        }
        Command::Pinch { input, partition } => {
            let a = read_matrix(input)?;
            let partition = match partition {
                Some(p) => p.parse::<BlockPartition>()?,
                None => BlockPartition::singletons(a.nrows() / 2)?,
            };
            matrix_outcome(&s_pinching(&a, &partition)?)
        }
        Command::Boxplus { inputs } => {
            let blocks = if inputs.is_empty() {
                parse_matrix_list(&read_source(None)?)?
            } else {
                inputs
                    .iter()
                    .map(|p| Ok(parse_matrix(&read_source(Some(p))?)?))
                    .collect::<CliResult<Vec<_>>>()?
            };
            matrix_outcome(&expanding_sum(&blocks)?)
        }
        Command::CompleteFrame(input) => {
            let frame = SymplecticFrame::new(read_matrix(input)?, tol)?;
            matrix_outcome(&complete_to_symplectic(&frame, tol)?)
        }
        Command::MajorCheck { x, y, kind } => {
            let (x, y) = (read_vector(x)?, read_vector(y)?);
            let report = match kind {
                Kind::Weak => weak_supermajorize(&x, &y, tol)?,
                Kind::Majorize => majorize(&x, &y, tol)?,
            };
            let holds = report.verdict;
            Outcome {
                body: serde_json::to_value(report).expect("report serializes"),
                holds,
            }
        }
        Command::RandomPd { n, spread } => matrix_outcome(&random_pd(*n, cli.seed, *spread)?),
        Command::RandomSymplectic { n, spread } => {
            matrix_outcome(&random_symplectic(*n, cli.seed, *spread)?)
        }
    };
    Ok(outcome)
}

fn is_number_array(items: &[Value]) -> bool {
    items.iter().all(Value::is_number)
}

fn text_line(values: &[Value]) -> String {
    values.iter().map(Value::to_string).collect::<Vec<_>>().join(" ")
}

fn write_matrix_rows(rows: &[Value], out: &mut String) {
    for row in rows {
        out.push_str(&text_line(row.as_array().map_or(&[][..], Vec::as_slice)));
        out.push('\n');
    }
}

/// Plain-text rendering: a bare matrix becomes whitespace rows (readable by
/// `--in`); reports become `key: value` lines with matrices indented below.
fn render_text(body: &Value) -> String {
    let mut out = String::new();
    if let Some(rows) = body.get("rows").and_then(Value::as_array) {
        write_matrix_rows(rows, &mut out);
        return out;
    }
    if let Some(map) = body.as_object() {
        for (key, value) in map {
            match value {
                Value::Array(items) if is_number_array(items) => {
                    out.push_str(&format!("{key}: {}\n", text_line(items)));
                }
                Value::Object(inner) if inner.contains_key("rows") => {
                    out.push_str(&format!("{key}:\n"));
                    write_matrix_rows(inner["rows"].as_array().map_or(&[][..], Vec::as_slice), &mut out);
                }
                other => out.push_str(&format!("{key}: {other}\n")),
            }
        }
    }
    out
}

fn emit(cli: &Cli, body: &Value) -> io::Result<()> {
    let mut text = match cli.format {
        Format::Json => serde_json::to_string(body).expect("JSON value serializes"),
        Format::Text => render_text(body),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.body) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.holds { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
