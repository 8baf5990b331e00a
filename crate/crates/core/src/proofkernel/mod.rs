//! A checker for derivations in conditional equational logic over a law set,
//! extended with the common-meadow rules `R_cm` and `R'_cm`.
//!
//! Scripts are JSON lines: a header naming the target judgement, then one
//! step per line. Every step states the equation it claims; the kernel
//! recomputes it from the rule and its cited steps and rejects on the first
//! disagreement. See `docs/proof-script-format.md` for the exact schema.

mod builder;
mod kernel;
mod script;
mod soundness;

use std::fmt;

use crate::term::{Equation, Substitution, Term};

pub use builder::{Chain, ScriptBuilder};
pub use kernel::{check_proof, Kernel, Rejection, RejectReason};
pub use script::{ScriptError, SHIPPED_SCRIPTS};
pub use soundness::{check_rcm_soundness, RcmVerdict};

/// `h1 /\ ... /\ hn -> conclusion`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgement {
    pub hypotheses: Vec<Equation>,
    pub conclusion: Equation,
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.hypotheses.iter().enumerate() {
            f.write_str(if i == 0 { "" } else { " /\\ " })?;
            write!(f, "{h}")?;
        }
        if !self.hypotheses.is_empty() {
            f.write_str(" -> ")?;
        }
        write!(f, "{}", self.conclusion)
    }
}

/// One inference. Step references are ids of earlier steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// An instance of an unconditional law.
    Axiom { law: String, subst: Substitution },
    /// The hypothesis at `index` (0-based) of the target.
    Hyp { index: usize },
    /// A local assumption, to be discharged by `Rcm` or `RcmPrime`.
    Assume,
    Refl { term: Term },
    Sym { of: String },
    /// A chain `a = b`, `b = c`, ... giving `a = z`.
    Trans { of: Vec<String> },
    /// From `l = r`, where `l` sits at path `at` of `context`, derive
    /// `context = context[at := r]`.
    Cong { context: Term, at: Vec<usize>, of: String },
    /// Instantiates a derived equation. Refused for variables that occur in
    /// a hypothesis or assumption the step depends on.
    Subst { of: String, subst: Substitution },
    /// An instance of a conditional law, each condition established by the
    /// premise at the same position.
    Discharge { law: String, subst: Substitution, premises: Vec<String> },
    /// From `r = bot` under assumption `t = bot` and `t = bot` under
    /// assumption `r = bot`, conclude `0*t = 0*r`.
    Rcm { left: String, left_assumption: String, right: String, right_assumption: String },
    /// From `r = bot` under assumption `t = bot`, conclude `0*r = 0*(t + r)`.
    RcmPrime { of: String, assumption: String },
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Axiom { .. } => "axiom",
            Rule::Hyp { .. } => "hyp",
            Rule::Assume => "assume",
            Rule::Refl { .. } => "refl",
            Rule::Sym { .. } => "sym",
            Rule::Trans { .. } => "trans",
            Rule::Cong { .. } => "cong",
            Rule::Subst { .. } => "subst",
            Rule::Discharge { .. } => "discharge",
            Rule::Rcm { .. } => "rcm",
            Rule::RcmPrime { .. } => "rcm_prime",
        }
    }

    /// Ids of the steps this rule cites.
    pub fn cites(&self) -> Vec<&str> {
        match self {
            Rule::Axiom { .. } | Rule::Hyp { .. } | Rule::Assume | Rule::Refl { .. } => vec![],
            Rule::Sym { of } | Rule::Cong { of, .. } | Rule::Subst { of, .. } => vec![of],
            Rule::Trans { of } => of.iter().map(String::as_str).collect(),
            Rule::Discharge { premises, .. } => premises.iter().map(String::as_str).collect(),
            Rule::Rcm { left, left_assumption, right, right_assumption } => {
                vec![left, left_assumption, right, right_assumption]
            }
            Rule::RcmPrime { of, assumption } => vec![of, assumption],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub id: String,
    pub rule: Rule,
    pub claim: Equation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub target: Judgement,
    /// The law set the script was written against, e.g. `e-ftc-cm+avl`.
    pub laws: Option<String>,
    pub steps: Vec<Step>,
}
