use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Judgement, ProofScript, Rejection, RejectReason, Rule, Step};
use crate::term::{parse, parse_equation, Equation, Substitution, Term};

/// Shipped scripts as `(name, law set, JSON lines)`.
pub const SHIPPED_SCRIPTS: &[(&str, &str, &str)] = &[
    ("ZERO_ONE_BOT", "e-ftc-cm", include_str!("../../scripts/zero_one_bot.jsonl")),
    ("SUCC_FIX", "e-ftc-cm", include_str!("../../scripts/succ_fix.jsonl")),
    ("ZERO_MUL_INV", "e-ftc-cm", include_str!("../../scripts/zero_mul_inv.jsonl")),
    ("AVL_SQUARES", "e-ftc-cm+avl", include_str!("../../scripts/avl_squares.jsonl")),
    ("RCM_INVERSE_SQUARE", "e-ftc-cm", include_str!("../../scripts/rcm_inverse_square.jsonl")),
    ("RCM_VIA_PRIME", "e-ftc-cm", include_str!("../../scripts/rcm_via_prime.jsonl")),
];

#[derive(Debug, thiserror::Error)]
pub enum ScriptError {
    #[error("cannot read script: {0}")]
    Io(#[from] std::io::Error),
    #[error("script rejected at {0}")]
    Rejected(#[from] Rejection),
}

#[derive(Serialize, Deserialize)]
struct RawTarget {
    #[serde(default)]
    hypotheses: Vec<String>,
    conclusion: String,
}

#[derive(Serialize, Deserialize)]
struct RawHeader {
    target: RawTarget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    laws: Option<String>,
}

type RawSubst = BTreeMap<String, String>;

#[derive(Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
enum RawRule {
    Axiom {
        law: String,
        #[serde(default)]
        subst: RawSubst,
    },
    Hyp {
        index: usize,
    },
    Assume,
    Refl {
        term: String,
    },
    Sym {
        of: String,
    },
    Trans {
        of: Vec<String>,
    },
    Cong {
        context: String,
        at: Vec<usize>,
        of: String,
    },
    Subst {
        of: String,
        subst: RawSubst,
    },
    Discharge {
        law: String,
        #[serde(default)]
        subst: RawSubst,
        premises: Vec<String>,
    },
    Rcm {
        left: String,
        left_assumption: String,
        right: String,
        right_assumption: String,
    },
    RcmPrime {
        of: String,
        assumption: String,
    },
}

#[derive(Serialize, Deserialize)]
struct RawStep {
    id: String,
    #[serde(flatten)]
    rule: RawRule,
    claim: String,
}

fn malformed(detail: impl ToString) -> RejectReason {
    RejectReason::Malformed { detail: detail.to_string() }
}

fn read_subst(raw: &RawSubst) -> Result<Substitution, RejectReason> {
    raw.iter()
        .map(|(v, t)| {
            if !crate::term::is_identifier(v) {
                return Err(RejectReason::BadSubstitution { detail: format!("{v:?} is not a variable name") });
            }
            let t = parse(t).map_err(|e| RejectReason::BadSubstitution { detail: format!("{v}: {e}") })?;
            Ok((v.clone(), t))
        })
        .collect()
}

fn write_subst(s: &Substitution) -> RawSubst {
    s.iter().map(|(v, t)| (v.clone(), t.render())).collect()
}

fn read_term(s: &str) -> Result<Term, RejectReason> {
    parse(s).map_err(malformed)
}

fn read_eq(s: &str) -> Result<Equation, RejectReason> {
    parse_equation(s).map_err(malformed)
}

impl RawRule {
    fn into_rule(self) -> Result<Rule, RejectReason> {
        Ok(match self {
            RawRule::Axiom { law, subst } => Rule::Axiom { law, subst: read_subst(&subst)? },
            RawRule::Hyp { index } => Rule::Hyp { index },
            RawRule::Assume => Rule::Assume,
            RawRule::Refl { term } => Rule::Refl { term: read_term(&term)? },
            RawRule::Sym { of } => Rule::Sym { of },
            RawRule::Trans { of } => Rule::Trans { of },
            RawRule::Cong { context, at, of } => Rule::Cong { context: read_term(&context)?, at, of },
            RawRule::Subst { of, subst } => Rule::Subst { of, subst: read_subst(&subst)? },
            RawRule::Discharge { law, subst, premises } => {
                Rule::Discharge { law, subst: read_subst(&subst)?, premises }
            }
            RawRule::Rcm { left, left_assumption, right, right_assumption } => {
                Rule::Rcm { left, left_assumption, right, right_assumption }
            }
            RawRule::RcmPrime { of, assumption } => Rule::RcmPrime { of, assumption },
        })
    }

    fn from_rule(rule: &Rule) -> RawRule {
        match rule.clone() {
            Rule::Axiom { law, subst } => RawRule::Axiom { law, subst: write_subst(&subst) },
            Rule::Hyp { index } => RawRule::Hyp { index },
            Rule::Assume => RawRule::Assume,
            Rule::Refl { term } => RawRule::Refl { term: term.render() },
            Rule::Sym { of } => RawRule::Sym { of },
            Rule::Trans { of } => RawRule::Trans { of },
            Rule::Cong { context, at, of } => RawRule::Cong { context: context.render(), at, of },
            Rule::Subst { of, subst } => RawRule::Subst { of, subst: write_subst(&subst) },
            Rule::Discharge { law, subst, premises } => {
                RawRule::Discharge { law, subst: write_subst(&subst), premises }
            }
            Rule::Rcm { left, left_assumption, right, right_assumption } => {
                RawRule::Rcm { left, left_assumption, right, right_assumption }
            }
            Rule::RcmPrime { of, assumption } => RawRule::RcmPrime { of, assumption },
        }
    }
}

impl ProofScript {
    /// Reads JSON lines. Blank lines and lines starting with `#` are skipped.
    /// Problems are reported as rejections of the offending step, the header
    /// being step 0.
    pub fn parse(text: &str) -> Result<ProofScript, Rejection> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let at = |step: usize, reason: RejectReason| Rejection { step, id: None, reason };
        let header = lines.next().ok_or_else(|| at(0, RejectReason::Empty))?;
        let raw: RawHeader = serde_json::from_str(header).map_err(|e| at(0, malformed(e)))?;
        let hypotheses = raw
            .target
            .hypotheses
            .iter()
            .map(|h| read_eq(h))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|r| at(0, r))?;
        let conclusion = read_eq(&raw.target.conclusion).map_err(|r| at(0, r))?;
        let mut steps = Vec::new();
        for (i, line) in lines.enumerate() {
            let raw: RawStep = serde_json::from_str(line).map_err(|e| at(i + 1, malformed(e)))?;
            let id = raw.id.clone();
            let fail = |reason| Rejection { step: i + 1, id: Some(id.clone()), reason };
            let rule = raw.rule.into_rule().map_err(fail)?;
            let claim = read_eq(&raw.claim).map_err(fail)?;
            steps.push(Step { id: raw.id, rule, claim });
        }
        Ok(ProofScript { target: Judgement { hypotheses, conclusion }, laws: raw.laws, steps })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ProofScript, ScriptError> {
        Ok(ProofScript::parse(&std::fs::read_to_string(path)?)?)
    }

    pub fn to_jsonl(&self) -> String {
        let header = RawHeader {
            target: RawTarget {
                hypotheses: self.target.hypotheses.iter().map(|h| h.to_string()).collect(),
                conclusion: self.target.conclusion.to_string(),
            },
            laws: self.laws.clone(),
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for s in &self.steps {
            let raw = RawStep { id: s.id.clone(), rule: RawRule::from_rule(&s.rule), claim: s.claim.to_string() };
            out.push_str(&serde_json::to_string(&raw).expect("step serializes"));
            out.push('\n');
        }
        out
    }

    /// A shipped script by name.
    pub fn shipped(name: &str) -> Option<ProofScript> {
        SHIPPED_SCRIPTS
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|(_, _, text)| ProofScript::parse(text).expect("shipped script parses"))
    }
}
