use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{Law, LawSet};
use crate::algebra::{
    make_zn_inverse_division, prng, render_value, Compiled, Enlarged, EvalError, PartialAlgebra,
    Prng, TotalAlgebra, Valuation, WithBot,
};
use crate::term::{ConditionalEquation, Equation, Polarity};

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const MAX_EXHAUSTIVE_VARS: usize = 6;
const MAX_EXHAUSTIVE_VALUATIONS: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Fuzz { trials: u64, seed: u64 },
}

impl Mode {
    pub fn fuzz(trials: u64) -> Mode {
        Mode::Fuzz { trials, seed: DEFAULT_SEED }
    }

    pub fn with_seed(self, seed: u64) -> Mode {
        match self {
            Mode::Fuzz { trials, .. } => Mode::Fuzz { trials, seed },
            m => m,
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    /// `exhaustive`, `fuzz` or `fuzz:<trials>`.
    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "fuzz" => Ok(Mode::fuzz(DEFAULT_TRIALS)),
            _ => s
                .strip_prefix("fuzz:")
                .and_then(|n| n.parse().ok())
                .map(Mode::fuzz)
                .ok_or_else(|| format!("unknown mode {s:?}, expected exhaustive or fuzz:<trials>")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictMode {
    Exhaustive,
    Fuzz,
    Valuation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Tarski,
    Eager,
}

/// Values of the two sides of the violated conclusion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideValues {
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub law: String,
    pub holds: bool,
    pub mode: VerdictMode,
    pub semantics: Semantics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    /// Valuations evaluated, up to and including a counterexample.
    pub valuations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Map<String, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<SideValues>,
}

impl Verdict {
    /// The counterexample as `x=2, y=bot`.
    pub fn render_counterexample(&self) -> Option<String> {
        let cx = self.counterexample.as_ref()?;
        if cx.is_empty() {
            return Some("(closed)".into());
        }
        Some(cx.iter().map(|(k, v)| format!("{k}={}", render_value(v))).collect::<Vec<_>>().join(", "))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.valuations;
        let counted = format!("{n} valuation{}", if n == 1 { "" } else { "s" });
        let mode = match self.mode {
            VerdictMode::Exhaustive => format!("exhaustive, {counted}"),
            VerdictMode::Fuzz => format!("fuzz, {counted}, seed {}", self.seed.unwrap_or(0)),
            VerdictMode::Valuation => "single valuation".to_string(),
        };
        let eager = if self.semantics == Semantics::Eager { ", eager" } else { "" };
        if self.holds {
            write!(f, "holds  {} ({mode}{eager})", self.law)
        } else {
            write!(f, "FAILS  {} ({mode}{eager}): {}", self.law, self.render_counterexample().unwrap_or_default())?;
            if let Some(v) = &self.values {
                write!(f, " gives {} vs {}", render_value(&v.lhs), render_value(&v.rhs))?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub algebra: String,
    pub suite: String,
    pub verdicts: Vec<Verdict>,
}

impl SuiteReport {
    pub fn holding(&self) -> usize {
        self.verdicts.iter().filter(|v| v.holds).count()
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            writeln!(f, "{v}")?;
        }
        write!(f, "{}/{} laws hold in {}", self.holding(), self.verdicts.len(), self.algebra)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("exhaustive mode needs a finite carrier, {0} is infinite")]
    Infinite(String),
    #[error("exhaustive mode allows at most {max} variables, law {law} has {found}")]
    TooManyVars { law: String, found: usize, max: usize },
    #[error("exhaustive check of {law} would need {count} valuations")]
    TooLarge { law: String, count: u128 },
    #[error("`cond` has no eager reading (law {0})")]
    CondInEager(String),
    #[error("scan range must satisfy 2 <= from <= to <= 64, got {0}..{1}")]
    BadRange(u64, u64),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Terms of a law compiled into one program: conditions in order, then the
/// conclusion, each as an lhs/rhs pair.
struct Prepared {
    name: String,
    vars: Vec<String>,
    prog: Compiled,
    polarities: Vec<Polarity>,
}

impl Prepared {
    fn new(name: &str, ce: &ConditionalEquation) -> Result<Prepared, CheckError> {
        let vars = ce.vars_in_order();
        let mut terms = Vec::new();
        for c in &ce.conditions {
            terms.push(c.eq.lhs.clone());
            terms.push(c.eq.rhs.clone());
        }
        terms.push(ce.conclusion.lhs.clone());
        terms.push(ce.conclusion.rhs.clone());
        let prog = Compiled::many(&terms, &vars)?;
        let polarities = ce.conditions.iter().map(|c| c.polarity).collect();
        Ok(Prepared { name: name.to_string(), vars, prog, polarities })
    }

    /// Indices of the conclusion's two sides in an `eval_all` result.
    fn conclusion(&self) -> (usize, usize) {
        let k = 2 * self.polarities.len();
        (k, k + 1)
    }
}

/// The equality each semantics uses, given evaluated values. A negated
/// condition holds exactly when `same` is false.
trait Judge<E> {
    fn same(&self, a: &E, b: &E) -> bool;
}

struct Tarski;

impl<E: Eq> Judge<E> for Tarski {
    fn same(&self, a: &E, b: &E) -> bool {
        a == b
    }
}

/// Values come from the enlargement; `bot` reads as undefined.
struct Eager;

impl<E: Eq> Judge<WithBot<E>> for Eager {
    fn same(&self, a: &WithBot<E>, b: &WithBot<E>) -> bool {
        a.is_bot() || b.is_bot() || a == b
    }
}

fn violated<E, J: Judge<E>>(p: &Prepared, judge: &J, vals: &[E]) -> bool {
    for (i, pol) in p.polarities.iter().enumerate() {
        let (a, b) = (&vals[2 * i], &vals[2 * i + 1]);
        let holds = match pol {
            Polarity::Equal => judge.same(a, b),
            Polarity::NotEqual => !judge.same(a, b),
        };
        if !holds {
            return false;
        }
    }
    let (l, r) = p.conclusion();
    !judge.same(&vals[l], &vals[r])
}

struct Source<E, F> {
    elements: Option<Vec<E>>,
    sample: F,
    algebra: String,
}

fn run<A, J, F>(
    alg: &A,
    p: &Prepared,
    judge: &J,
    source: &Source<A::Elem, F>,
    mode: Mode,
    semantics: Semantics,
) -> Result<Verdict, CheckError>
where
    A: TotalAlgebra,
    J: Judge<A::Elem>,
    F: Fn(&mut Prng) -> A::Elem,
{
    let mut verdict = Verdict {
        law: p.name.clone(),
        holds: true,
        mode: VerdictMode::Exhaustive,
        semantics,
        seed: None,
        trials: None,
        valuations: 0,
        counterexample: None,
        values: None,
    };
    let test = |env: &[A::Elem], verdict: &mut Verdict| -> bool {
        verdict.valuations += 1;
        let vals = p.prog.eval_all(alg, env);
        if violated(p, judge, &vals) {
            let (l, r) = p.conclusion();
            verdict.holds = false;
            verdict.counterexample = Some(
                p.vars.iter().zip(env).map(|(k, v)| (k.clone(), alg.encode(v))).collect(),
            );
            verdict.values = Some(SideValues { lhs: alg.encode(&vals[l]), rhs: alg.encode(&vals[r]) });
            true
        } else {
            false
        }
    };
    match mode {
        Mode::Exhaustive => {
            let elems = source.elements.as_ref().ok_or_else(|| CheckError::Infinite(source.algebra.clone()))?;
            let k = p.vars.len();
            if k > MAX_EXHAUSTIVE_VARS {
                return Err(CheckError::TooManyVars { law: p.name.clone(), found: k, max: MAX_EXHAUSTIVE_VARS });
            }
            let count = (elems.len() as u128).pow(k as u32);
            if count > MAX_EXHAUSTIVE_VALUATIONS {
                return Err(CheckError::TooLarge { law: p.name.clone(), count });
            }
            if elems.is_empty() && k > 0 {
                return Ok(verdict);
            }
            // odometer over carrier indices, last variable fastest
            let mut idx = vec![0usize; k];
            let mut env: Vec<A::Elem> = idx.iter().map(|&i| elems[i].clone()).collect();
            loop {
                if test(&env, &mut verdict) {
                    break;
                }
                let mut pos = k;
                loop {
                    if pos == 0 {
                        return Ok(verdict);
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < elems.len() {
                        env[pos] = elems[idx[pos]].clone();
                        break;
                    }
                    idx[pos] = 0;
                    env[pos] = elems[0].clone();
                }
            }
        }
        Mode::Fuzz { trials, seed } => {
            verdict.mode = VerdictMode::Fuzz;
            verdict.seed = Some(seed);
            let mut rng = prng(seed);
            // a closed law has exactly one valuation
            let trials = if p.vars.is_empty() { trials.min(1) } else { trials };
            verdict.trials = Some(trials);
            for _ in 0..trials {
                let env: Vec<A::Elem> = p.vars.iter().map(|_| (source.sample)(&mut rng)).collect();
                if test(&env, &mut verdict) {
                    break;
                }
            }
        }
    }
    Ok(verdict)
}

fn single<A, J>(
    alg: &A,
    p: &Prepared,
    judge: &J,
    v: &Valuation<A::Elem>,
    semantics: Semantics,
) -> Result<Verdict, CheckError>
where
    A: TotalAlgebra,
    J: Judge<A::Elem>,
{
    let env = p
        .vars
        .iter()
        .map(|x| v.get(x).cloned().ok_or_else(|| EvalError::Unbound(x.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let vals = p.prog.eval_all(alg, &env);
    let bad = violated(p, judge, &vals);
    let (l, r) = p.conclusion();
    Ok(Verdict {
        law: p.name.clone(),
        holds: !bad,
        mode: VerdictMode::Valuation,
        semantics,
        seed: None,
        trials: None,
        valuations: 1,
        counterexample: bad
            .then(|| p.vars.iter().zip(&env).map(|(k, e)| (k.clone(), alg.encode(e))).collect()),
        values: bad.then(|| SideValues { lhs: alg.encode(&vals[l]), rhs: alg.encode(&vals[r]) }),
    })
}

fn law_name(ce: &ConditionalEquation) -> String {
    ce.name.clone().unwrap_or_else(|| ce.to_string())
}

fn tarski_source<A: TotalAlgebra>(alg: &A) -> Source<A::Elem, impl Fn(&mut Prng) -> A::Elem + '_> {
    Source { elements: alg.elements(), sample: |rng: &mut Prng| alg.sample(rng), algebra: alg.name() }
}

pub fn check_conditional<A: TotalAlgebra>(
    alg: &A,
    ce: &ConditionalEquation,
    mode: Mode,
) -> Result<Verdict, CheckError> {
    let p = Prepared::new(&law_name(ce), ce)?;
    run(alg, &p, &Tarski, &tarski_source(alg), mode, Semantics::Tarski)
}

pub fn check_equation<A: TotalAlgebra>(alg: &A, e: &Equation, mode: Mode) -> Result<Verdict, CheckError> {
    let ce = ConditionalEquation::from(e.clone());
    check_conditional(alg, &ce, mode)
}

pub fn check_law<A: TotalAlgebra>(alg: &A, law: &Law, mode: Mode) -> Result<Verdict, CheckError> {
    let p = Prepared::new(&law.name, &law.body)?;
    run(alg, &p, &Tarski, &tarski_source(alg), mode, Semantics::Tarski)
}

/// Evaluates a law at one valuation.
pub fn check_at<A: TotalAlgebra>(alg: &A, law: &Law, v: &Valuation<A::Elem>) -> Result<Verdict, CheckError> {
    let p = Prepared::new(&law.name, &law.body)?;
    single(alg, &p, &Tarski, v, Semantics::Tarski)
}

/// Eager validity in a partial algebra. Variables range over the partial
/// carrier; `bot` in a law is evaluated in the enlargement and read back as
/// undefined.
pub fn check_eager<P: PartialAlgebra + Clone>(p: &P, law: &Law, mode: Mode) -> Result<Verdict, CheckError> {
    if law.body.terms().any(|t| t.has_cond()) {
        return Err(CheckError::CondInEager(law.name.clone()));
    }
    let prepared = Prepared::new(&law.name, &law.body)?;
    let enl = Enlarged::wrap(p.clone());
    let source = Source {
        elements: p.elements().map(|es| es.into_iter().map(WithBot::Val).collect()),
        sample: |rng: &mut Prng| WithBot::Val(p.sample(rng)),
        algebra: p.name(),
    };
    run(&enl, &prepared, &Eager, &source, mode, Semantics::Eager)
}

pub fn check_eager_at<P: PartialAlgebra + Clone>(
    p: &P,
    law: &Law,
    v: &Valuation<P::Elem>,
) -> Result<Verdict, CheckError> {
    if law.body.terms().any(|t| t.has_cond()) {
        return Err(CheckError::CondInEager(law.name.clone()));
    }
    let prepared = Prepared::new(&law.name, &law.body)?;
    let enl = Enlarged::wrap(p.clone());
    let lifted = v.iter().map(|(k, e)| (k.clone(), WithBot::Val(e.clone()))).collect();
    single(&enl, &prepared, &Eager, &lifted, Semantics::Eager)
}

pub fn check_suite<A: TotalAlgebra>(alg: &A, set: &LawSet, mode: Mode) -> Result<SuiteReport, CheckError> {
    let verdicts = set.iter().map(|l| check_law(alg, l, mode)).collect::<Result<_, _>>()?;
    Ok(SuiteReport { algebra: alg.name(), suite: set.name.clone(), verdicts })
}

pub fn check_suite_eager<P: PartialAlgebra + Clone>(
    p: &P,
    set: &LawSet,
    mode: Mode,
) -> Result<SuiteReport, CheckError> {
    let verdicts = set.iter().map(|l| check_eager(p, l, mode)).collect::<Result<_, _>>()?;
    Ok(SuiteReport { algebra: p.name(), suite: set.name.clone(), verdicts })
}

/// Checks `law` exhaustively in each `Z_n` with bot for `from <= n <= to`.
pub fn scan_zn(from: u64, to: u64, law: &Law) -> Result<Vec<(u64, Verdict)>, CheckError> {
    if !(2 <= from && from <= to && to <= 64) {
        return Err(CheckError::BadRange(from, to));
    }
    (from..=to)
        .map(|n| {
            let z = make_zn_inverse_division(n).expect("n >= 2");
            check_law(&z, law, Mode::Exhaustive).map(|v| (n, v))
        })
        .collect()
}
