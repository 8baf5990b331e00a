use serde::Serialize;

use crate::algebra::TotalAlgebra;
use crate::laws::{check_conditional, CheckError, Mode, Verdict};
use crate::term::{Condition, ConditionalEquation, Equation, Polarity, Term};

const MAX_VARS: usize = 4;

/// Outcome of checking one instance of `R_cm` in a finite algebra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RcmVerdict {
    /// `E /\ t = bot -> r = bot` holds.
    pub left: bool,
    /// `E /\ r = bot -> t = bot` holds.
    pub right: bool,
    /// `E -> 0*t = 0*r` holds.
    pub conclusion: bool,
    /// False only when both premises hold and the conclusion fails.
    pub sound: bool,
    /// A valuation refuting the conclusion, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Verdict>,
}

fn conditional(hyps: &[Equation], extra: Option<Equation>, conclusion: Equation, name: &str) -> ConditionalEquation {
    let conditions = hyps
        .iter()
        .cloned()
        .chain(extra)
        .map(|eq| Condition { eq, polarity: Polarity::Equal })
        .collect();
    ConditionalEquation { conditions, conclusion, name: Some(name.into()) }
}

/// Checks `R_cm` semantically on one instance: if both premises are valid in
/// `alg`, the conclusion must be valid too. At most four variables.
pub fn check_rcm_soundness<A: TotalAlgebra>(
    alg: &A,
    t: &Term,
    r: &Term,
    hyps: &[Equation],
) -> Result<RcmVerdict, CheckError> {
    let bot = |x: &Term| Equation::new(x.clone(), Term::Bot);
    let zero = |x: &Term| Term::mul(Term::Zero, x.clone());
    let left = conditional(hyps, Some(bot(t)), bot(r), "rcm_left");
    let right = conditional(hyps, Some(bot(r)), bot(t), "rcm_right");
    let concl = conditional(hyps, None, Equation::new(zero(t), zero(r)), "rcm_conclusion");
    let vars = concl.vars_in_order();
    if vars.len() > MAX_VARS {
        return Err(CheckError::TooManyVars { law: "rcm".into(), found: vars.len(), max: MAX_VARS });
    }
    let holds = |ce: &ConditionalEquation| check_conditional(alg, ce, Mode::Exhaustive);
    let (l, rt, c) = (holds(&left)?, holds(&right)?, holds(&concl)?);
    let sound = !(l.holds && rt.holds && !c.holds);
    Ok(RcmVerdict {
        left: l.holds,
        right: rt.holds,
        conclusion: c.holds,
        sound,
        violation: (!c.holds).then_some(c),
    })
}
