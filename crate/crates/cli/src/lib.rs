//! `specseq`: reads couples, spectral sequences and solver instances as JSON,
//! runs the computations and prints a JSON report or aligned page tables.
//!
//! Exit codes: 0 success, 1 parse error, 2 validation failure, 3 a checked
//! statement fails (the report carries a witness).

mod commands;
mod demo;
pub mod instances;
mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use excouple::{Corner, ExcoupleError};
use serde_json::{json, Value};
use solvers::SolverError;
use spectral::{Pos, SpecError};
use zlinalg::LinalgError;

pub use demo::demo_input;

/// Environment variable overriding the stabilization budget.
pub const BUDGET_VAR: &str = "SPECSEQ_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "specseq", version, about = "Exact couples, their spectral sequences and abutments")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print page tables on stdout instead of the JSON report.
    #[arg(long, global = true)]
    pub table: bool,
    /// Stabilization budget for E∞ and stable E (overrides SPECSEQ_BUDGET).
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check exactness of a couple file.
    Validate { file: PathBuf },
    /// Pages E^1 … E^R of a couple.
    Pages {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        to: i64,
    },
    /// E∞ and the stable E-objects of a couple.
    Einf { file: PathBuf },
    /// Colimit and limit abutments of the diagonal D(N).
    Abutments {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Extension data at the D-position P,Q.
    ExtensionReport {
        file: PathBuf,
        #[arg(long, value_parser = parse_pos, allow_hyphen_values = true)]
        x: Pos,
    },
    /// Stable / matching classification of a couple.
    Classify { file: PathBuf },
    /// Re-index a couple by a unimodular matrix (default: the canonical one).
    Reindex {
        file: PathBuf,
        /// Entries a,b,c,d of [[a, b], [c, d]].
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
    },
    /// Run a comparison rule on the diagonals of a couple morphism.
    Compare {
        file: PathBuf,
        #[arg(long)]
        rule: String,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
    },
    /// Reverse comparison of two first-quadrant spectral sequences.
    Zeeman {
        file: PathBuf,
        #[arg(long)]
        setup: String,
    },
    /// Solve a two-row spectral sequence from its abutment.
    SolveTwoRow { file: PathBuf },
    /// The five-term exact sequence of a first-quadrant spectral sequence.
    FiveTerm { file: PathBuf },
    /// Built-in examples: couple1, couple2, couple3, cyclic-k, cp-r.
    Demo {
        name: String,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long = "N")]
        n_max: Option<i64>,
        #[arg(long)]
        r: Option<i64>,
        /// Print the demo's input file instead of the report.
        #[arg(long)]
        input: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Pages { .. } => "pages",
            Command::Einf { .. } => "einf",
            Command::Abutments { .. } => "abutments",
            Command::ExtensionReport { .. } => "extension-report",
            Command::Classify { .. } => "classify",
            Command::Reindex { .. } => "reindex",
            Command::Compare { .. } => "compare",
            Command::Zeeman { .. } => "zeeman",
            Command::SolveTwoRow { .. } => "solve-two-row",
            Command::FiveTerm { .. } => "five-term",
            Command::Demo { .. } => "demo",
        }
    }
}

fn parse_pos(s: &str) -> Result<Pos, String> {
    let (p, q) = s.split_once(',').ok_or_else(|| format!("expected P,Q, found {s:?}"))?;
    let n = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((n(p)?, n(q)?))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Parse(String),
    Validation { message: String, witness: Value },
    Theorem { message: String, witness: Value },
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        CliError::Parse(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Validation { message: msg.into(), witness: Value::Null }
    }

    pub fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Validation { .. } => 2,
            CliError::Theorem { .. } => 3,
        }
    }

    fn status(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse-error",
            CliError::Validation { .. } => "validation-failure",
            CliError::Theorem { .. } => "theorem-failure",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation { message: m, .. } | CliError::Theorem { message: m, .. } => m,
        }
    }

    fn witness(&self) -> Value {
        match self {
            CliError::Parse(_) => Value::Null,
            CliError::Validation { witness, .. } | CliError::Theorem { witness, .. } => witness.clone(),
        }
    }
}

fn corner_id(c: Corner) -> &'static str {
    match c {
        Corner::E => "E",
        Corner::DJ => "D-ij",
        Corner::DI => "D-ki",
    }
}

impl From<ExcoupleError> for CliError {
    fn from(e: ExcoupleError) -> Self {
        let message = e.to_string();
        match e {
            ExcoupleError::Parse(m) => CliError::Parse(m),
            ExcoupleError::Spectral(s) => s.into(),
            ExcoupleError::NotExact { position, corner } => CliError::Validation {
                message,
                witness: json!({"position": [position.0, position.1], "corner": corner_id(corner)}),
            },
            ExcoupleError::NotAMorphism { position } => {
                CliError::Validation { message, witness: json!({"position": [position.0, position.1]}) }
            }
            ExcoupleError::NotRegular { sigma } => CliError::Validation { message, witness: json!({"sigma": sigma}) },
            ExcoupleError::Internal(_) => CliError::Theorem { message, witness: Value::Null },
            _ => CliError::invalid(message),
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Parse(m) => CliError::Parse(m),
            SpecError::NotADifferential { page, position } | SpecError::NotAMorphism { page, position } => {
                CliError::Validation {
                    message: e.to_string(),
                    witness: json!({"page": page, "position": [position.0, position.1]}),
                }
            }
            other => CliError::invalid(other.to_string()),
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        let message = e.to_string();
        match e {
            SolverError::Inconsistent { degree, .. } => {
                CliError::Theorem { message, witness: json!({"degree": degree, "kind": "inconsistent"}) }
            }
            SolverError::Underdetermined { degree, .. } => {
                CliError::Theorem { message, witness: json!({"degree": degree, "kind": "underdetermined"}) }
            }
            SolverError::Spec(s) => s.into(),
            SolverError::Linalg(l) => l.into(),
            SolverError::SetupViolation(_) => CliError::invalid(message),
        }
    }
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Report {
    pub json: serde_json::Map<String, Value>,
    pub tables: String,
    /// A statement checked by the command failed: message and witness.
    pub failure: Option<(String, Value)>,
    /// Replaces the report on output (demo inputs).
    pub raw: Option<String>,
}

impl Report {
    pub fn set(&mut self, key: &str, v: Value) {
        self.json.insert(key.to_string(), v);
    }

    pub fn table(&mut self, t: &str) {
        if !self.tables.is_empty() {
            self.tables.push('\n');
        }
        self.tables.push_str(t);
    }

    pub fn fail(&mut self, message: impl Into<String>, witness: Value) {
        self.failure.get_or_insert((message.into(), witness));
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn budget(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| CliError::parse(format!("{BUDGET_VAR} must be a count, found {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let name = cli.command.name();
    let result = budget(cli.budget).and_then(|b| commands::dispatch(&cli.command, b));
    let (code, json, tables, raw, stderr) = match result {
        Ok(mut r) => {
            let (code, status, stderr) = match r.failure.take() {
                None => (0, "ok", String::new()),
                Some((m, w)) => {
                    r.set("error", Value::String(m.clone()));
                    r.set("witness", w);
                    (3, "theorem-failure", format!("specseq {name}: {m}\n"))
                }
            };
            r.set("command", json!(name));
            r.set("status", json!(status));
            (code, Value::Object(r.json), r.tables, r.raw, stderr)
        }
        Err(e) => {
            let json = json!({"command": name, "status": e.status(), "error": e.message(), "witness": e.witness()});
            (e.code(), json, String::new(), None, format!("specseq {name}: {}\n", e.message()))
        }
    };
    let show_tables = cli.table && raw.is_none();
    let text = raw.unwrap_or_else(|| instances::to_pretty(&json));
    let mut stdout = if show_tables { tables } else { String::new() };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return Outcome { code: 1, stdout, stderr: format!("specseq: cannot write {}: {e}\n", path.display()) };
            }
        }
        None if !show_tables => stdout = text,
        None => {}
    }
    Outcome { code, stdout, stderr }
}
