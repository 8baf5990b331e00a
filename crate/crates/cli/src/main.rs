use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

mod commands;
mod hom;
mod prove;

/// Terms, models and proof checking for common meadows.
#[derive(Parser)]
#[command(name = "meadowlab", version)]
struct Cli {
    /// Print a single JSON document on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and print it back with minimal parentheses.
    Parse { term: String },
    /// Evaluate a term in an algebra.
    Eval {
        term: String,
        #[arg(long)]
        algebra: String,
        /// Variable binding `x=v`, repeatable.
        #[arg(long = "bind", value_name = "VAR=VALUE")]
        binds: Vec<String>,
    },
    /// Rewrite a term into a single flat fraction.
    Flatten { term: String },
    /// Check a law or a law set in an algebra.
    Check(commands::CheckArgs),
    /// Check a law exhaustively in Z_n for a range of n.
    Scan {
        #[arg(long)]
        law: String,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Homomorphisms, quotients and saturation.
    #[command(subcommand)]
    Hom(hom::HomCommand),
    /// Proof scripts.
    #[command(subcommand)]
    Prove(prove::ProveCommand),
    /// List algebra names and law sets.
    Models,
}

/// Seed for every sampled search.
#[derive(Args, Clone, Copy)]
pub struct SeedArg {
    #[arg(long, env = "MEADOWLAB_SEED", default_value_t = meadowlab::laws::DEFAULT_SEED)]
    pub seed: u64,
}

/// What a command produced. `code` is 0 when the checked property holds and
/// 1 when a counterexample or rejection was found.
pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    pub fn ok(text: impl Into<String>, json: Value) -> Outcome {
        Outcome { code: 0, text: text.into(), json }
    }

    pub fn holds(holds: bool, text: impl Into<String>, json: Value) -> Outcome {
        Outcome { code: if holds { 0 } else { 1 }, text: text.into(), json }
    }
}

/// A usage error: bad input, unknown names, or a request the algebra cannot
/// serve. Always exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl ToString) -> CliError {
        CliError { kind, message: message.to_string() }
    }
}

pub type CliResult = Result<Outcome, CliError>;

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Parse { term } => commands::parse(&term),
        Command::Eval { term, algebra, binds } => commands::eval(&term, &algebra, &binds),
        Command::Flatten { term } => commands::flatten(&term),
        Command::Check(args) => commands::check(&args),
        Command::Scan { law, from, to } => commands::scan(&law, from, to),
        Command::Hom(cmd) => hom::run(cmd),
        Command::Prove(cmd) => prove::run(cmd),
        Command::Models => commands::models(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            let body = if json { serde_json::to_string_pretty(&out.json).expect("json value") } else { out.text };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{body}");
            ExitCode::from(out.code)
        }
        Err(e) => {
            if json {
                let v = json!({"error": {"kind": e.kind, "message": e.message}});
                eprintln!("{}", serde_json::to_string_pretty(&v).expect("json value"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
