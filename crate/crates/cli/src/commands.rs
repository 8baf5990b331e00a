use std::str::FromStr;

use clap::Args;
use meadowlab::algebra::{
    eval as eval_term, Named, PartialAlgebra, PartialVisitor, TotalAlgebra, TotalVisitor, Valuation, ALGEBRA_NAMES,
};
use meadowlab::flatten::flatten as flatten_term;
use meadowlab::laws::{
    check_eager, check_law, check_suite, check_suite_eager, scan_zn, CheckError, Law, LawSet, Mode, SuiteReport,
    Verdict, BUILTIN_SETS, DEFAULT_TRIALS,
};
use meadowlab::term::{parse as parse_term, Term};
use serde_json::{json, Value};

use crate::{CliError, CliResult, Outcome, SeedArg};

pub fn read_term(s: &str) -> Result<Term, CliError> {
    parse_term(s).map_err(|e| CliError::new("parse", format!("{s:?}: {e}")))
}

pub fn algebra(name: &str) -> Result<Named, CliError> {
    Named::resolve(name).map_err(|e| CliError::new("algebra", e))
}

fn check_error(e: CheckError) -> CliError {
    CliError::new("check", e)
}

/// A shipped law by name (`-` and `_` are interchangeable), or an ad hoc
/// law written out in full, e.g. `1/x = bot -> 0*x = x`.
pub fn find_law(name: &str) -> Result<Law, CliError> {
    let all = LawSet::all_builtin();
    if let Some(l) = all.get(name).or_else(|| all.get(&name.replace('-', "_"))) {
        return Ok(l.clone());
    }
    if name.contains('=') {
        return Law::parse("adhoc", name).map_err(|e| CliError::new("parse", format!("{name:?}: {e}")));
    }
    Err(CliError::new("law", format!("unknown law {name:?}, see `models`")))
}

pub fn parse(term: &str) -> CliResult {
    let t = read_term(term)?;
    Ok(Outcome::ok(t.render(), json!({"term": t.render(), "ast": t.to_json()})))
}

struct Eval<'a> {
    term: &'a Term,
    binds: &'a [(String, String)],
}

impl TotalVisitor for Eval<'_> {
    type Out = Result<(String, Value), CliError>;

    fn visit<A: TotalAlgebra>(self, alg: &A) -> Self::Out {
        let mut v = Valuation::new();
        for (var, val) in self.binds {
            let e = alg.decode(val).map_err(|e| CliError::new("element", e))?;
            v.insert(var.clone(), e);
        }
        let r = eval_term(self.term, alg, &v).map_err(|e| CliError::new("eval", e))?;
        Ok((alg.render(&r), alg.encode(&r)))
    }
}

pub fn eval(term: &str, algebra_name: &str, binds: &[String]) -> CliResult {
    let t = read_term(term)?;
    let alg = algebra(algebra_name)?;
    let binds = binds
        .iter()
        .map(|b| {
            b.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| CliError::new("usage", format!("binding {b:?} is not VAR=VALUE")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (text, value) = alg.visit(Eval { term: &t, binds: &binds })?;
    let bound: serde_json::Map<String, Value> =
        binds.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    Ok(Outcome::ok(text, json!({"algebra": algebra_name, "term": t.render(), "bind": bound, "value": value})))
}

pub fn flatten(term: &str) -> CliResult {
    let t = read_term(term)?;
    let f = flatten_term(&t).map_err(|e| CliError::new("flatten", e))?;
    let flat = f.to_term();
    Ok(Outcome::ok(
        flat.render(),
        json!({"input": t.render(), "flat": flat.render(), "numerator": f.num.render(), "denominator": f.den.render(), "ast": flat.to_json()}),
    ))
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long)]
    algebra: String,
    /// A law name, or a law written out in full.
    #[arg(long, conflicts_with = "suite", required_unless_present = "suite")]
    law: Option<String>,
    /// A law set such as `e-ftc-cm` or `e-ftc-cm+avl`.
    #[arg(long)]
    suite: Option<String>,
    /// `exhaustive` or `fuzz:<trials>`; defaults to exhaustive on finite
    /// carriers and fuzz:10000 otherwise.
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    seed: SeedArg,
    /// Eager semantics in the partial algebra behind the name.
    #[arg(long)]
    eager: bool,
}

enum Target {
    Law(Law),
    Suite(LawSet),
}

enum Checked {
    One(Verdict),
    Many(SuiteReport),
}

struct Check<'a> {
    target: &'a Target,
    mode: Option<Mode>,
    seed: u64,
}

impl Check<'_> {
    fn mode(&self, finite: bool) -> Mode {
        let m = self.mode.unwrap_or(if finite { Mode::Exhaustive } else { Mode::fuzz(DEFAULT_TRIALS) });
        m.with_seed(self.seed)
    }
}

impl TotalVisitor for Check<'_> {
    type Out = Result<Checked, CheckError>;

    fn visit<A: TotalAlgebra>(self, alg: &A) -> Self::Out {
        let mode = self.mode(alg.is_finite());
        Ok(match self.target {
            Target::Law(l) => Checked::One(check_law(alg, l, mode)?),
            Target::Suite(s) => Checked::Many(check_suite(alg, s, mode)?),
        })
    }
}

impl PartialVisitor for Check<'_> {
    type Out = Result<Checked, CheckError>;

    fn visit<P: PartialAlgebra + Clone>(self, p: &P) -> Self::Out {
        let mode = self.mode(p.elements().is_some());
        Ok(match self.target {
            Target::Law(l) => Checked::One(check_eager(p, l, mode)?),
            Target::Suite(s) => Checked::Many(check_suite_eager(p, s, mode)?),
        })
    }
}

pub fn check(args: &CheckArgs) -> CliResult {
    let alg = algebra(&args.algebra)?;
    let target = match (&args.law, &args.suite) {
        (Some(l), _) => Target::Law(find_law(l)?),
        (None, Some(s)) => Target::Suite(LawSet::resolve(s).map_err(|e| CliError::new("law", e))?),
        (None, None) => return Err(CliError::new("usage", "give --law or --suite")),
    };
    let mode = args.mode.as_deref().map(Mode::from_str).transpose().map_err(|e| CliError::new("usage", e))?;
    let c = Check { target: &target, mode, seed: args.seed.seed };
    let checked = if args.eager {
        alg.visit_partial(c).ok_or_else(|| {
            CliError::new("usage", format!("{} has no partial form, --eager needs one", args.algebra))
        })?
    } else {
        alg.visit(c)
    }
    .map_err(check_error)?;
    Ok(match checked {
        Checked::One(v) => Outcome::holds(v.holds, v.to_string(), json!(v)),
        Checked::Many(r) => Outcome::holds(r.all_hold(), r.to_string(), json!(r)),
    })
}

pub fn scan(law: &str, from: u64, to: u64) -> CliResult {
    let l = find_law(law)?;
    let rows = scan_zn(from, to, &l).map_err(check_error)?;
    let text: Vec<String> = rows.iter().map(|(n, v)| format!("zn:{n:<3} {v}")).collect();
    let all = rows.iter().all(|(_, v)| v.holds);
    let results: Vec<Value> = rows.iter().map(|(n, v)| json!({"n": n, "verdict": v})).collect();
    Ok(Outcome::holds(all, text.join("\n"), json!({"law": l.name, "results": results})))
}

pub fn models() -> CliResult {
    let mut text = vec!["algebras:".to_string()];
    for (name, what) in ALGEBRA_NAMES {
        text.push(format!("  {name:<14} {what}"));
    }
    text.push("law sets:".into());
    let mut sets = Vec::new();
    for name in BUILTIN_SETS {
        let set = LawSet::builtin(name).expect("built-in set");
        text.push(format!("  {name:<14} {}", set.names().join(" ")));
        sets.push(json!({"name": name, "laws": set.names()}));
    }
    let algebras: Vec<Value> = ALGEBRA_NAMES.iter().map(|(n, d)| json!({"name": n, "description": d})).collect();
    Ok(Outcome::ok(text.join("\n"), json!({"algebras": algebras, "law_sets": sets})))
}
