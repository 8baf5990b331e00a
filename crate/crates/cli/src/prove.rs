use std::path::Path;

use clap::Subcommand;
use meadowlab::laws::LawSet;
use meadowlab::proofkernel::{check_proof, ProofScript, Rejection, ScriptError, SHIPPED_SCRIPTS};
use serde_json::json;

use crate::{CliError, CliResult, Outcome};

#[derive(Subcommand)]
pub enum ProveCommand {
    /// Check a JSON-lines proof script. FILE may also name a shipped script.
    Check {
        file: String,
        /// Law set; defaults to the one named in the script header.
        #[arg(long)]
        laws: Option<String>,
    },
    /// List the shipped scripts.
    List,
}

fn rejected(file: &str, laws: Option<&str>, r: &Rejection) -> Outcome {
    let text = format!("REJECT {file}: {r}");
    Outcome::holds(false, text, json!({"file": file, "laws": laws, "accepted": false, "rejection": r}))
}

fn load(file: &str) -> Result<Result<ProofScript, Rejection>, CliError> {
    if !Path::new(file).exists() {
        if let Some(s) = ProofScript::shipped(file) {
            return Ok(Ok(s));
        }
    }
    match ProofScript::load(file) {
        Ok(s) => Ok(Ok(s)),
        Err(ScriptError::Rejected(r)) => Ok(Err(r)),
        Err(e) => Err(CliError::new("io", e)),
    }
}

pub fn run(cmd: ProveCommand) -> CliResult {
    match cmd {
        ProveCommand::Check { file, laws } => {
            let script = match load(&file)? {
                Ok(s) => s,
                Err(r) => return Ok(rejected(&file, laws.as_deref(), &r)),
            };
            let name = laws
                .or_else(|| script.laws.clone())
                .ok_or_else(|| CliError::new("usage", "the script names no law set, pass --laws"))?;
            let set = LawSet::resolve(&name).map_err(|e| CliError::new("law", e))?;
            Ok(match check_proof(&script, &set) {
                Ok(()) => Outcome::ok(
                    format!("ACCEPT {file}: {} ({} steps, laws {name})", script.target, script.steps.len()),
                    json!({"file": file, "laws": name, "accepted": true, "target": script.target.to_string(), "steps": script.steps.len()}),
                ),
                Err(r) => rejected(&file, Some(&name), &r),
            })
        }
        ProveCommand::List => {
            let mut text = Vec::new();
            let mut rows = Vec::new();
            for (name, laws, body) in SHIPPED_SCRIPTS {
                let s = ProofScript::parse(body).expect("shipped script parses");
                text.push(format!("{name:<20} {laws:<14} {}", s.target));
                rows.push(json!({"name": name, "laws": laws, "target": s.target.to_string(), "steps": s.steps.len()}));
            }
            Ok(Outcome::ok(text.join("\n"), json!({"scripts": rows})))
        }
    }
}
