//! `upb`: build, verify and plan unextendible product bases from the command line.
//!
//! Every machine-readable payload is a JSON object on stdout carrying
//! `"schema": "upb/1"`. Exit codes: 0 success, 1 negative verdict, 2 usage or
//! input error, 3 inconclusive (time limit).

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub const SCHEMA: &str = "upb/1";

#[derive(Parser, Debug)]
#[command(
    name = "upb",
    version,
    about = "Unextendible product bases: construct, verify, plan"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Registered explicit bases and size facts.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Materialize a recipe (inline DSL or derivation JSON file).
    Construct(ConstructArgs),
    /// Certify a UPB document.
    Verify(VerifyArgs),
    /// Reachable missing numbers for the given dims.
    Plan(PlanArgs),
    /// Compare the closure with the reference 3..14 grid.
    Table1(GridArgs),
    /// Complement state of a UPB: rank, support and partial-transpose spectra.
    Bes(BesArgs),
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// e.g. "dsum_b(tiles3x3, tiles3x3_shifted)" or a path to a derivation JSON file
    #[arg(long)]
    recipe: String,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Extra leaves as name=path to a UPB document
    #[arg(long = "import", value_name = "NAME=PATH")]
    imports: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Seesaw,
    Both,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    file: std::path::PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,
    /// Seesaw seed; defaults to $UPB_SEED, then 1
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long = "timeout-ms")]
    timeout_ms: Option<u64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Disable the rank cut (plain enumeration of assignments)
    #[arg(long)]
    no_prune: bool,
}

#[derive(Args, Debug)]
struct PlanArgs {
    /// Comma-separated local dimensions, e.g. 7,7 or 10,4,2
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    /// Largest bipartite dimension handled by the closure grid
    #[arg(long, default_value_t = 14)]
    max: usize,
    /// UPB documents to add as buildable facts, as PATH or NAME=PATH
    #[arg(long = "import", value_name = "PATH")]
    imports: Vec<String>,
    /// Also return a derivation for this missing number
    #[arg(long)]
    realize: Option<usize>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args, Debug)]
struct BesArgs {
    file: std::path::PathBuf,
    /// Skip the exact unextendibility check (the report is flagged as waived)
    #[arg(long)]
    skip_verify: bool,
    #[arg(long = "timeout-ms")]
    timeout_ms: Option<u64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

/// A failed invocation: structured error plus exit code.
#[derive(Debug)]
pub struct Failure {
    pub exit: u8,
    pub code: String,
    pub message: String,
}

impl Failure {
    pub fn usage(code: &str, message: impl Into<String>) -> Self {
        Failure {
            exit: 2,
            code: code.into(),
            message: message.into(),
        }
    }
}

impl From<upb_core::Error> for Failure {
    fn from(e: upb_core::Error) -> Self {
        Failure::usage(e.code(), e.to_string())
    }
}

/// Successful output: payload and exit code.
pub struct Output {
    pub exit: u8,
    pub payload: Value,
    /// Printed instead of JSON when set.
    pub text: Option<String>,
}

impl Output {
    pub fn json(exit: u8, payload: Value) -> Self {
        Output {
            exit,
            payload,
            text: None,
        }
    }
}

pub fn with_schema(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
    }
    v
}

fn emit(text: &str) {
    use std::io::Write;
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    emit(&(serde_json::to_string_pretty(v).expect("serializable") + "\n"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            print_json(&with_schema(
                json!({"error": {"code": "usage", "message": first}}),
            ));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Catalog {
            action: CatalogAction::List,
        } => commands::catalog_list(),
        Command::Construct(a) => commands::construct(&a.recipe, a.out.as_deref(), &a.imports),
        Command::Verify(a) => commands::verify(&a),
        Command::Plan(a) => commands::plan(&a),
        Command::Table1(a) => commands::grid(&a),
        Command::Bes(a) => commands::bes(&a),
    };
    match result {
        Ok(out) => {
            match out.text {
                Some(t) => emit(&t),
                None => print_json(&with_schema(out.payload)),
            }
            ExitCode::from(out.exit)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            print_json(&with_schema(
                json!({"error": {"code": f.code, "message": f.message}}),
            ));
            ExitCode::from(f.exit)
        }
    }
}
