use clap::Subcommand;
use meadowlab::algebra::{TotalAlgebra, TotalVisitor};
use meadowlab::homs::{
    detect_bot_splitting, detect_bot_splitting_sampled, extend_ring_hom, map_phi, map_rho, quotient_by,
    saturate_to_cm, HomError, QuotientMode,
};
use meadowlab::laws::{Mode, DEFAULT_TRIALS};
use serde_json::{json, Map, Value};

use crate::commands::algebra;
use crate::{CliError, CliResult, Outcome, SeedArg};

#[derive(Subcommand)]
pub enum HomCommand {
    /// rho: keep M_0, send everything else to bot.
    Rho {
        #[arg(long)]
        algebra: String,
    },
    /// phi_{0*a}: b |-> b + 0*a.
    Phi {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        element: String,
        /// Pairs to sample on infinite carriers.
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Quotient by =_a, or by ='_a with --prime.
    Quotient {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        element: String,
        #[arg(long)]
        prime: bool,
    },
    /// Does reduction mod m extend to Z_n+bot -> Z_m+bot?
    Extend {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Quotient a finite GCM with AVL down to a common meadow.
    Saturate {
        #[arg(long)]
        algebra: String,
        /// An element whose image must not be bot.
        #[arg(long)]
        avoid: Option<String>,
    },
    /// Look for non-bot a, b with a + b = bot.
    Split {
        #[arg(long)]
        algebra: String,
        /// Pairs to sample on infinite carriers.
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
    },
}

/// Failed homomorphism properties are results (exit 1); the rest are usage
/// errors.
fn hom_error(e: HomError) -> CliResult {
    let failed = |what: &str, detail: Value| {
        let text = format!("{what}: {e}");
        Ok(Outcome::holds(false, text, json!({"holds": false, "failure": detail})))
    };
    match &e {
        HomError::NotHom(f) => failed("fails", json!(f)),
        HomError::NotCongruence(s) => failed("fails", json!(s)),
        HomError::Postcondition { algebra, law, detail } => {
            failed("fails", json!({"algebra": algebra, "law": law, "detail": detail}))
        }
        _ => Err(CliError::new("hom", e)),
    }
}

fn element<A: TotalAlgebra>(alg: &A, s: &str) -> Result<A::Elem, CliError> {
    alg.decode(s).map_err(|e| CliError::new("element", e))
}

struct Rho;

impl TotalVisitor for Rho {
    type Out = CliResult;

    fn visit<A: TotalAlgebra>(self, alg: &A) -> CliResult {
        match map_rho(alg) {
            Ok(h) => Ok(Outcome::ok(h.to_string(), json!({"holds": true, "hom": h.to_json(), "result": h.target.to_json()}))),
            Err(e) => hom_error(e),
        }
    }
}

struct Phi<'a> {
    element: &'a str,
    trials: u64,
    seed: u64,
}

impl TotalVisitor for Phi<'_> {
    type Out = CliResult;

    fn visit<A: TotalAlgebra>(self, alg: &A) -> CliResult {
        let a = element(alg, self.element)?;
        let mode = if alg.is_finite() { Mode::Exhaustive } else { Mode::Fuzz { trials: self.trials, seed: self.seed } };
        let phi = match map_phi(alg, &a, mode) {
            Ok(p) => p,
            Err(e) => return hom_error(e),
        };
        let shift = alg.render(&phi.shift);
        let mut text = vec![format!("phi: b |-> b + {shift}")];
        let mut map = Map::new();
        for b in alg.elements().unwrap_or_default() {
            let img = alg.render(&phi.apply(alg, &b));
            text.push(format!("  {} |-> {img}", alg.render(&b)));
            map.insert(alg.render(&b), Value::String(img));
        }
        let checked = if alg.is_finite() { "exhaustive" } else { "fuzz" };
        let mut v = json!({"holds": true, "algebra": alg.name(), "element": alg.encode(&a), "shift": alg.encode(&phi.shift), "checked": checked});
        if !map.is_empty() {
            v["map"] = Value::Object(map);
        }
        Ok(Outcome::ok(text.join("\n"), v))
    }
}

struct Quot<'a> {
    element: &'a str,
    mode: QuotientMode,
}

impl TotalVisitor for Quot<'_> {
    type Out = CliResult;

    fn visit<A: TotalAlgebra>(self, alg: &A) -> CliResult {
        let a = element(alg, self.element)?;
        let q = match quotient_by(alg, &a, self.mode) {
            Ok(q) => q,
            Err(e) => return hom_error(e),
        };
        let src = &q.hom.source;
        let classes: Vec<Vec<&str>> =
            q.congruence.classes.iter().map(|c| c.iter().map(|&i| src.label(i)).collect()).collect();
        let mut text = vec![format!("{} classes", classes.len())];
        text.extend(classes.iter().map(|c| format!("  {{{}}}", c.join(", "))));
        text.push(q.hom.to_string());
        let v = json!({"holds": true, "mode": self.mode, "classes": classes, "hom": q.hom.to_json(), "result": q.hom.target.to_json()});
        Ok(Outcome::ok(text.join("\n"), v))
    }
}

struct Saturate<'a> {
    avoid: Option<&'a str>,
}

impl TotalVisitor for Saturate<'_> {
    type Out = CliResult;

    fn visit<A: TotalAlgebra>(self, alg: &A) -> CliResult {
        let avoid = self.avoid.map(|s| element(alg, s)).transpose()?;
        let s = match saturate_to_cm(alg, avoid.as_ref()) {
            Ok(s) => s,
            Err(e) => return hom_error(e),
        };
        let idx = avoid.and_then(|a| alg.elements()?.iter().position(|e| *e == a));
        let mut text = vec![format!("quotiented by: {}", if s.steps.is_empty() { "nothing".into() } else { s.steps.join(", ") })];
        text.push(s.hom.to_string());
        if let Some(i) = idx {
            text.push(format!("{} stays at {}", s.hom.source.label(i), s.hom.target.label(s.hom.apply(i))));
        }
        let mut v = s.to_json(idx);
        v["holds"] = json!(true);
        Ok(Outcome::ok(text.join("\n"), v))
    }
}

struct Split {
    trials: u64,
    seed: u64,
}

impl TotalVisitor for Split {
    type Out = CliResult;

    fn visit<A: TotalAlgebra>(self, alg: &A) -> CliResult {
        let (found, searched) = if alg.is_finite() {
            (detect_bot_splitting(alg).map_err(|e| CliError::new("hom", e))?, "exhaustive")
        } else {
            (detect_bot_splitting_sampled(alg, self.trials, self.seed), "fuzz")
        };
        let (text, pair) = match &found {
            Some((a, b)) => (
                format!("{} + {} = bot", alg.render(a), alg.render(b)),
                json!([alg.encode(a), alg.encode(b)]),
            ),
            None => (format!("no bot-splitting pair found ({searched})"), Value::Null),
        };
        Ok(Outcome::ok(text, json!({"algebra": alg.name(), "checked": searched, "split": pair})))
    }
}

pub fn run(cmd: HomCommand) -> CliResult {
    match cmd {
        HomCommand::Rho { algebra: name } => algebra(&name)?.visit(Rho),
        HomCommand::Phi { algebra: name, element, trials, seed } => {
            algebra(&name)?.visit(Phi { element: &element, trials, seed: seed.seed })
        }
        HomCommand::Quotient { algebra: name, element, prime } => {
            let mode = if prime { QuotientMode::Prime } else { QuotientMode::Standard };
            algebra(&name)?.visit(Quot { element: &element, mode })
        }
        HomCommand::Extend { from, to } => match extend_ring_hom(from, to) {
            Ok(v) => Ok(Outcome::holds(v.holds, v.to_string(), json!(v))),
            Err(e) => hom_error(e),
        },
        HomCommand::Saturate { algebra: name, avoid } => algebra(&name)?.visit(Saturate { avoid: avoid.as_deref() }),
        HomCommand::Split { algebra: name, trials, seed } => algebra(&name)?.visit(Split { trials, seed: seed.seed }),
    }
}
